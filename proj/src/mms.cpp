#include "choreduel/mms.hpp"

#include <algorithm>
#include <numeric>

#include "choreduel/errors.hpp"

namespace choreduel {

namespace {

// Indices 0-based, sorted by descending cost, ties by lower index.
std::vector<std::size_t> descending_order(const std::vector<Rat>& costs) {
    std::vector<std::size_t> order(costs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return costs[b] < costs[a]; });
    return order;
}

struct BnbSearch {
    const std::vector<Rat>& costs;
    const std::vector<std::size_t>& order;
    int k;
    Rat best_value;
    std::vector<std::vector<std::size_t>> best_bundles;  // 0-based items
    std::vector<Rat> loads;
    std::vector<std::vector<std::size_t>> bundles;

    void run(std::size_t depth, const Rat& partial_max) {
        if (partial_max >= best_value) return;
        if (depth == order.size()) {
            best_value = partial_max;
            best_bundles = bundles;
            return;
        }
        std::size_t item = order[depth];
        bool seen_empty = false;
        for (int b = 0; b < k; ++b) {
            if (bundles[b].empty()) {
                if (seen_empty) break;  // identical to the first empty bundle
                seen_empty = true;
            }
            Rat prev = loads[b];
            loads[b] += costs[item];
            bundles[b].push_back(item);
            run(depth + 1, std::max(partial_max, loads[b]));
            bundles[b].pop_back();
            loads[b] = std::move(prev);
        }
    }
};

Partition to_partition(const std::vector<std::vector<std::size_t>>& bundles) {
    Partition p;
    p.bundles.reserve(bundles.size());
    for (const auto& b : bundles) {
        std::vector<std::int64_t> out;
        out.reserve(b.size());
        for (std::size_t i : b) out.push_back(static_cast<std::int64_t>(i) + 1);
        std::sort(out.begin(), out.end());
        p.bundles.push_back(std::move(out));
    }
    return p;
}

}  // namespace

Partition lpt_partition(const std::vector<Rat>& item_costs, int k) {
    if (k < 1) throw std::invalid_argument("lpt_partition: k < 1");
    std::vector<Rat> loads(static_cast<std::size_t>(k));
    Partition p;
    p.bundles.resize(static_cast<std::size_t>(k));
    for (std::size_t item : descending_order(item_costs)) {
        std::size_t lightest = 0;
        for (std::size_t b = 1; b < loads.size(); ++b) {
            if (loads[b] < loads[lightest]) lightest = b;
        }
        loads[lightest] += item_costs[item];
        p.bundles[lightest].push_back(static_cast<std::int64_t>(item) + 1);
    }
    return p;
}

Rat partition_max_bundle(const std::vector<Rat>& item_costs, const Partition& partition) {
    const std::int64_t m = static_cast<std::int64_t>(item_costs.size());
    std::vector<char> seen(item_costs.size(), 0);
    Rat max_load;
    for (const auto& bundle : partition.bundles) {
        Rat load;
        for (std::int64_t idx : bundle) {
            if (idx < 1 || idx > m) {
                throw std::invalid_argument("partition index " + std::to_string(idx) + " out of range");
            }
            if (seen[static_cast<std::size_t>(idx - 1)]) {
                throw std::invalid_argument("partition repeats index " + std::to_string(idx));
            }
            seen[static_cast<std::size_t>(idx - 1)] = 1;
            load += item_costs[static_cast<std::size_t>(idx - 1)];
        }
        max_load = std::max(max_load, load);
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            throw std::invalid_argument("partition misses index " + std::to_string(i + 1));
        }
    }
    return max_load;
}

MmsResult mms_exact(const std::vector<Rat>& item_costs, int k, int max_items) {
    if (k < 1) throw std::invalid_argument("mms_exact: k < 1");
    if (static_cast<int>(item_costs.size()) > max_items) {
        throw ResourceLimitError("mms_exact: " + std::to_string(item_costs.size()) +
                                 " items exceeds cap " + std::to_string(max_items));
    }
    const auto order = descending_order(item_costs);

    // Seed the incumbent with LPT; the search can only improve on it.
    Partition lpt = lpt_partition(item_costs, k);
    Rat lpt_value = partition_max_bundle(item_costs, lpt);

    std::vector<std::vector<std::size_t>> lpt_bundles(static_cast<std::size_t>(k));
    for (std::size_t b = 0; b < lpt.bundles.size(); ++b) {
        for (std::int64_t idx : lpt.bundles[b]) {
            lpt_bundles[b].push_back(static_cast<std::size_t>(idx - 1));
        }
    }

    BnbSearch search{item_costs, order, k, lpt_value, std::move(lpt_bundles),
                     std::vector<Rat>(static_cast<std::size_t>(k)),
                     std::vector<std::vector<std::size_t>>(static_cast<std::size_t>(k))};
    search.run(0, Rat());
    return MmsResult{search.best_value, to_partition(search.best_bundles)};
}

Rat mms_bruteforce(const std::vector<Rat>& item_costs, int k, std::uint64_t max_assignments) {
    if (k < 1) throw std::invalid_argument("mms_bruteforce: k < 1");
    const std::size_t m = item_costs.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        total *= static_cast<std::uint64_t>(k);
        if (total > max_assignments) {
            throw ResourceLimitError("mms_bruteforce: k^m exceeds cap");
        }
    }

    std::vector<int> assign(m, 0);
    std::vector<Rat> loads(static_cast<std::size_t>(k));
    bool have_best = false;
    Rat best;
    for (;;) {
        for (auto& l : loads) l = Rat();
        for (std::size_t i = 0; i < m; ++i) {
            loads[static_cast<std::size_t>(assign[i])] += item_costs[i];
        }
        Rat max_load;
        for (const auto& l : loads) max_load = std::max(max_load, l);
        if (!have_best || max_load < best) {
            best = max_load;
            have_best = true;
        }
        // next assignment in odometer order
        std::size_t pos = 0;
        while (pos < m && ++assign[pos] == k) {
            assign[pos] = 0;
            ++pos;
        }
        if (pos == m) break;
    }
    return best;
}

VerifyReport verify_violation(const Transcript& t) {
    if (!t.outcome || !std::holds_alternative<Violation>(*t.outcome)) {
        return {VerifyStatus::structural_error, "transcript has no violation verdict"};
    }
    const auto& v = std::get<Violation>(*t.outcome);
    if (t.n < 1) return {VerifyStatus::structural_error, "n < 1"};
    if (t.epsilon.is_zero() || t.epsilon >= Rat(1)) {
        return {VerifyStatus::structural_error, "epsilon outside (0,1)"};
    }
    if (!valid_agent(v.agent, t.n)) {
        return {VerifyStatus::structural_error, "violated agent out of range"};
    }
    if (t.events.empty()) return {VerifyStatus::structural_error, "no chores"};
    for (const Event& e : t.events) {
        if (static_cast<int>(e.chore.costs.size()) != t.n) {
            return {VerifyStatus::structural_error, "cost vector length mismatch"};
        }
        if (!valid_agent(e.assignee, t.n)) {
            return {VerifyStatus::structural_error, "assignee out of range"};
        }
    }
    if (static_cast<int>(v.witness.bundles.size()) != t.n) {
        return {VerifyStatus::structural_error, "witness bundle count != n"};
    }

    std::vector<Rat> agent_costs;
    agent_costs.reserve(t.events.size());
    for (const Event& e : t.events) {
        agent_costs.push_back(e.chore.costs[static_cast<std::size_t>(v.agent.value - 1)]);
    }

    Rat recomputed_upper;
    try {
        recomputed_upper = partition_max_bundle(agent_costs, v.witness);
    } catch (const std::invalid_argument& e) {
        return {VerifyStatus::structural_error, std::string("witness is not an exact cover: ") + e.what()};
    }
    if (recomputed_upper != v.mms_upper) {
        return {VerifyStatus::invalid, "mms_upper does not match the witness partition"};
    }

    Rat recomputed_assigned = assigned_cost(t, v.agent);
    if (recomputed_assigned != v.assigned_cost) {
        return {VerifyStatus::invalid, "assigned_cost does not match the events"};
    }

    if (recomputed_upper.is_zero()) {
        return {VerifyStatus::invalid, "witness upper bound is zero"};
    }
    if (recomputed_assigned / recomputed_upper != v.ratio) {
        return {VerifyStatus::invalid, "ratio does not equal assigned_cost / mms_upper"};
    }

    Rat threshold = (Rat(1) - t.epsilon) * Rat(t.n);
    if (recomputed_assigned < threshold * recomputed_upper) {
        return {VerifyStatus::invalid, "assigned cost below (1-eps)*n times the witness bound"};
    }
    return {VerifyStatus::valid, ""};
}

}  // namespace choreduel
