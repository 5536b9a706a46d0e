#include "choreduel/adversary.hpp"

#include <algorithm>

#include "choreduel/errors.hpp"
#include "choreduel/mms.hpp"

namespace choreduel {

std::int64_t ell_bound(int k, int n, const Rat& eps_prime, std::int64_t ceiling) {
    if (k < 1) throw std::invalid_argument("ell_bound: k < 1");
    if (n < 1) throw std::invalid_argument("ell_bound: n < 1");
    if (eps_prime.is_zero()) throw std::invalid_argument("ell_bound: eps_prime = 0");

    mpz_class ell = n;
    if (ell > ceiling) throw ResourceLimitError("ell_bound: n exceeds the schedule ceiling");
    const Rat base = Rat(1) + Rat(1) / eps_prime;
    for (int j = 2; j <= k; ++j) {
        // ceil(base^ell); the exponent is bounded by the ceiling, so this pow
        // is always materializable.
        const auto e = static_cast<unsigned long>(ell.get_ui());
        mpz_class num_pow, den_pow, patterns;
        mpz_pow_ui(num_pow.get_mpz_t(), base.numerator().get_mpz_t(), e);
        mpz_pow_ui(den_pow.get_mpz_t(), base.denominator().get_mpz_t(), e);
        mpz_cdiv_q(patterns.get_mpz_t(), num_pow.get_mpz_t(), den_pow.get_mpz_t());
        ell = ell * n * patterns;
        if (ell > ceiling) {
            throw ResourceLimitError("ell_bound: ell_" + std::to_string(j) +
                                     " exceeds the schedule ceiling");
        }
    }
    return static_cast<std::int64_t>(ell.get_si());
}

Rat schedule_cost(const Rat& w, const Rat& eps_prime, std::int64_t length, std::int64_t i) {
    if (i < 1 || i > length) {
        throw std::out_of_range("schedule_cost: position " + std::to_string(i) +
                                " outside [1, " + std::to_string(length) + "]");
    }
    const Rat base = Rat(1) + Rat(1) / eps_prime;
    return w / base.pow(static_cast<std::uint64_t>(length - i + 1));
}

Adversary::Adversary(AdversaryParams params, std::string algo_name)
    : params_(std::move(params)) {
    if (params_.n < 1) throw std::invalid_argument("adversary: n < 1");
    if (params_.epsilon.is_zero() || params_.epsilon >= Rat(1)) {
        throw std::invalid_argument("adversary: epsilon outside (0,1)");
    }
    if (params_.kappa.is_zero()) throw std::invalid_argument("adversary: kappa = 0");
    if (params_.budget < 1) throw std::invalid_argument("adversary: budget < 1");

    arrived_total_.assign(static_cast<std::size_t>(params_.n), Rat());
    transcript_.n = params_.n;
    transcript_.epsilon = params_.epsilon;
    transcript_.kappa = params_.kappa;
    transcript_.algo_name = std::move(algo_name);

    levels_.reserve(static_cast<std::size_t>(params_.n));
    for (int d = 1; d <= params_.n; ++d) {
        levels_.push_back(make_level(d));
    }
}

ScenarioLevel Adversary::make_level(int depth) const {
    ScenarioLevel lvl;
    lvl.target = AgentId{depth};
    lvl.is_base = (depth == params_.n);
    lvl.eps_local = lvl.is_base ? params_.epsilon : params_.epsilon / Rat(4);
    lvl.x_snapshot = arrived_total_[static_cast<std::size_t>(depth - 1)];
    lvl.w = std::max(lvl.x_snapshot, params_.kappa) / lvl.eps_local;
    if (!lvl.is_base) {
        lvl.schedule_len = ell_bound(params_.n - depth, params_.n, lvl.eps_local);
        lvl.pattern_pos = 1;
    }
    return lvl;
}

void Adversary::reinstantiate_from(int depth) {
    for (int d = depth; d <= params_.n; ++d) {
        levels_[static_cast<std::size_t>(d - 1)] = make_level(d);
    }
}

Rat Adversary::violation_threshold() const {
    return (Rat(1) - params_.epsilon) * Rat(params_.n);
}

std::optional<ChoreCosts> Adversary::next_chore() {
    if (finished()) throw std::logic_error("next_chore: duel already decided");
    if (pending_) throw std::logic_error("next_chore: awaiting a decision");
    if (chores_emitted_ >= params_.budget) return std::nullopt;

    ChoreCosts chore;
    chore.costs.reserve(levels_.size());
    for (auto& lvl : levels_) {
        Rat cost = lvl.is_base
                       ? lvl.w
                       : schedule_cost(lvl.w, lvl.eps_local, lvl.schedule_len, lvl.pattern_pos);
        if (!lvl.is_base) lvl.generated_for_target += cost;
        arrived_total_[static_cast<std::size_t>(lvl.target.value - 1)] += cost;
        chore.costs.push_back(std::move(cost));
    }
    ++chores_emitted_;
    pending_ = chore;
    return chore;
}

bool Adversary::would_fire(AgentId assignee) const {
    if (!valid_agent(assignee, params_.n)) return false;
    const auto& lvl = levels_[static_cast<std::size_t>(assignee.value - 1)];
    if (lvl.is_base) return lvl.count_to_target + 1 >= params_.n;
    return lvl.generated_for_target >= Rat(params_.n) * lvl.w;
}

std::optional<Violation> Adversary::observe(AgentId assignee) {
    if (finished()) throw std::logic_error("observe: duel already decided");
    if (!pending_) throw std::logic_error("observe: no pending chore");
    if (!valid_agent(assignee, params_.n)) {
        throw ProtocolError("assignee " + std::to_string(assignee.value) +
                            " out of range [1, " + std::to_string(params_.n) + "]");
    }

    transcript_.events.push_back(Event{std::move(*pending_), assignee});
    pending_.reset();

    const int d = assignee.value;
    auto& lvl = levels_[static_cast<std::size_t>(d - 1)];
    bool fire = false;
    if (lvl.is_base) {
        if (++lvl.count_to_target >= params_.n) fire = true;
    } else {
        // Pattern end for level d.
        if (lvl.generated_for_target >= Rat(params_.n) * lvl.w) {
            fire = true;
        } else {
            lvl.pattern_pos = 1;
            reinstantiate_from(d + 1);
        }
    }

    if (fire) {
        Violation v = build_certificate(assignee);
        transcript_.outcome = v;
        return v;
    }

    // Patterns of shallower levels continue.
    for (int j = 1; j < d; ++j) {
        auto& shallow = levels_[static_cast<std::size_t>(j - 1)];
        if (++shallow.pattern_pos > shallow.schedule_len) {
            throw InternalAnomalyError("pattern position exceeded the schedule bound at depth " +
                                       std::to_string(j));
        }
    }
    return std::nullopt;
}

Violation Adversary::build_certificate(AgentId agent) const {
    std::vector<Rat> agent_costs;
    agent_costs.reserve(transcript_.events.size());
    for (const Event& e : transcript_.events) {
        agent_costs.push_back(e.chore.costs[static_cast<std::size_t>(agent.value - 1)]);
    }

    Partition witness = lpt_partition(agent_costs, params_.n);
    Rat upper = partition_max_bundle(agent_costs, witness);
    Rat assigned = assigned_cost(transcript_, agent);
    const Rat threshold = violation_threshold();

    if (upper.is_zero() || assigned < threshold * upper) {
        // Should be unreachable at natural termination; try the exact solver
        // before declaring an anomaly.
        if (static_cast<int>(agent_costs.size()) <= kDefaultExactItemCap) {
            MmsResult exact = mms_exact(agent_costs, params_.n);
            if (!exact.value.is_zero() && assigned >= threshold * exact.value) {
                return Violation{agent, assigned, std::move(exact.partition),
                                 exact.value, assigned / exact.value};
            }
        }
        throw InternalAnomalyError("certificate for agent " + std::to_string(agent.value) +
                                   " falls below the violation threshold");
    }
    return Violation{agent, assigned, std::move(witness), upper, assigned / upper};
}

BudgetExhausted Adversary::budget_verdict(std::optional<Rat> best_seen) {
    if (finished()) throw std::logic_error("budget_verdict: duel already decided");
    BudgetExhausted verdict;
    verdict.chores_emitted = chores_emitted_;
    verdict.best_certified_ratio = std::move(best_seen);
    for (int a = 1; a <= params_.n; ++a) {
        Rat ratio = certified_ratio(AgentId{a});
        if (!ratio.is_zero()) {
            if (!verdict.best_certified_ratio || *verdict.best_certified_ratio < ratio) {
                verdict.best_certified_ratio = ratio;
            }
        }
    }
    transcript_.outcome = verdict;
    return verdict;
}

Rat Adversary::certified_ratio(AgentId agent) const {
    std::vector<Rat> agent_costs;
    agent_costs.reserve(transcript_.events.size());
    for (const Event& e : transcript_.events) {
        agent_costs.push_back(e.chore.costs[static_cast<std::size_t>(agent.value - 1)]);
    }
    if (agent_costs.empty()) return Rat();
    Rat upper = partition_max_bundle(agent_costs, lpt_partition(agent_costs, params_.n));
    if (upper.is_zero()) return Rat();
    return assigned_cost(transcript_, agent) / upper;
}

void Adversary::record_outcome(Outcome outcome) {
    if (finished()) throw std::logic_error("record_outcome: duel already decided");
    transcript_.outcome = std::move(outcome);
}

std::optional<Violation> eager_check(const Transcript& t, const Rat& threshold) {
    for (int a = 1; a <= t.n; ++a) {
        const AgentId agent{a};
        std::vector<Rat> agent_costs;
        agent_costs.reserve(t.events.size());
        for (const Event& e : t.events) {
            agent_costs.push_back(e.chore.costs[static_cast<std::size_t>(a - 1)]);
        }
        if (agent_costs.empty()) continue;
        Partition witness = lpt_partition(agent_costs, t.n);
        Rat upper = partition_max_bundle(agent_costs, witness);
        if (upper.is_zero()) continue;
        Rat assigned = assigned_cost(t, agent);
        if (assigned >= threshold * upper) {
            Rat ratio = assigned / upper;
            return Violation{agent, std::move(assigned), std::move(witness), upper, std::move(ratio)};
        }
    }
    return std::nullopt;
}

EagerMonitor::EagerMonitor(int n, Rat threshold)
    : n_(n),
      threshold_(std::move(threshold)),
      assigned_(static_cast<std::size_t>(n)),
      arrived_total_(static_cast<std::size_t>(n)),
      max_item_(static_cast<std::size_t>(n)) {}

std::optional<Violation> EagerMonitor::on_event(const Transcript& t) {
    if (t.events.size() != events_seen_ + 1) {
        throw std::logic_error("eager monitor fed out of order");
    }
    ++events_seen_;
    const Event& e = t.events.back();
    for (int a = 1; a <= n_; ++a) {
        const std::size_t idx = static_cast<std::size_t>(a - 1);
        const Rat& cost = e.chore.costs[idx];
        arrived_total_[idx] += cost;
        max_item_[idx] = std::max(max_item_[idx], cost);
        if (e.assignee.value == a) assigned_[idx] += cost;
    }

    for (int a = 1; a <= n_; ++a) {
        const std::size_t idx = static_cast<std::size_t>(a - 1);
        // Cheap gate: any partition's max bundle is at least
        // max(total/n, max item), so the real check cannot fire below it.
        Rat lower = std::max(arrived_total_[idx] / Rat(n_), max_item_[idx]);
        if (lower.is_zero() || assigned_[idx] < threshold_ * lower) continue;

        std::vector<Rat> agent_costs;
        agent_costs.reserve(t.events.size());
        for (const Event& ev : t.events) {
            agent_costs.push_back(ev.chore.costs[idx]);
        }
        Partition witness = lpt_partition(agent_costs, n_);
        Rat upper = partition_max_bundle(agent_costs, witness);
        Rat ratio = assigned_[idx] / upper;
        if (!best_ratio_ || *best_ratio_ < ratio) best_ratio_ = ratio;
        if (assigned_[idx] >= threshold_ * upper) {
            return Violation{AgentId{a}, assigned_[idx], std::move(witness), upper, ratio};
        }
    }
    return std::nullopt;
}

}  // namespace choreduel
