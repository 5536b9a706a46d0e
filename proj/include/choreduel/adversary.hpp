#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "choreduel/model.hpp"

namespace choreduel {

// Ceiling on schedule lengths. Beyond it the exponential cost schedules are
// not materializable (the denominators alone would not fit in memory), so
// construction raises ResourceLimitError instead.
inline constexpr std::int64_t kMaxScheduleLength = 1'000'000;

struct AdversaryParams {
    int n = 1;
    Rat epsilon;        // in (0,1)
    Rat kappa{1};       // bootstrap base cost, > 0
    std::int64_t budget = 10'000;
    bool eager_check = false;
};

// Upper bound on the chores a k-agent scenario can emit before it must fire:
// ell_1 = n; ell_k = ell_{k-1} * n * ceil((1+1/eps')^{ell_{k-1}}), i.e.
// patterns (at most n*(1+1/eps')^{ell_{k-1}}) times pattern length.
// Monotone in k; values explode for k >= 3.
std::int64_t ell_bound(int k, int n, const Rat& eps_prime,
                       std::int64_t ceiling = kMaxScheduleLength);

// Position i of the exponential schedule: w / (1+1/eps')^{L-i+1}, exact.
Rat schedule_cost(const Rat& w, const Rat& eps_prime, std::int64_t length, std::int64_t i);

// One stack entry of the nested scenario. Depth d targets agent a_d; depths
// below n run the exponential pattern, depth n plays the base role (every
// chore costs its target exactly w).
struct ScenarioLevel {
    AgentId target;
    bool is_base = false;
    Rat eps_local;    // eps/4 for pattern levels, eps for the base level
    Rat x_snapshot;   // target's total arrived cost at instantiation
    Rat w;            // max(x_snapshot, kappa) / eps_local
    // Pattern levels only:
    std::int64_t schedule_len = 0;  // L
    std::int64_t pattern_pos = 0;   // i in [1, L]
    Rat generated_for_target;       // accumulated across this instance's patterns
    // Base level only:
    int count_to_target = 0;
};

// The adaptive scenario as a state machine. Strict alternation: exactly one
// next_chore between consecutive observe calls. Owns the authoritative
// transcript of the duel.
class Adversary {
public:
    Adversary(AdversaryParams params, std::string algo_name);

    // Cost vector for the next chore, or nullopt once the emission budget is
    // spent (callers then install budget_verdict()).
    std::optional<ChoreCosts> next_chore();

    // Irrevocably assigns the pending chore. Returns the fired Violation, or
    // nullopt to continue. Throws ProtocolError on an out-of-range assignee.
    std::optional<Violation> observe(AgentId assignee);

    // True iff assigning the pending chore to this agent would fire a
    // violation right now. Pure; used by the white-box delayer policy.
    bool would_fire(AgentId assignee) const;

    // Violation certificate for the given agent over everything arrived:
    // witness = LPT partition under her costs, U = its max bundle,
    // ratio = assigned/U. Falls back to mms_exact at small m; throws
    // InternalAnomalyError if even that cannot reach the threshold.
    Violation build_certificate(AgentId agent) const;

    // Installs a BudgetExhausted outcome. best_seen is folded into
    // best_certified_ratio alongside the final witness-bound ratios.
    BudgetExhausted budget_verdict(std::optional<Rat> best_seen = std::nullopt);

    // Installs an externally produced outcome (eager violation, protocol
    // failure, anomaly).
    void record_outcome(Outcome outcome);

    const AdversaryParams& params() const { return params_; }
    const Transcript& transcript() const { return transcript_; }
    const std::vector<ScenarioLevel>& levels() const { return levels_; }
    std::int64_t chores_emitted() const { return chores_emitted_; }
    bool awaiting_decision() const { return pending_.has_value(); }
    bool finished() const { return transcript_.outcome.has_value(); }
    Rat violation_threshold() const;  // (1-eps)*n

private:
    ScenarioLevel make_level(int depth) const;
    void reinstantiate_from(int depth);
    Rat certified_ratio(AgentId agent) const;  // assigned / LPT bound, 0 if unbounded

    AdversaryParams params_;
    std::vector<ScenarioLevel> levels_;   // depth d at index d-1
    std::vector<Rat> arrived_total_;      // per agent, updated at emission
    std::int64_t chores_emitted_ = 0;
    std::optional<ChoreCosts> pending_;
    Transcript transcript_;
};

// The sound early-exit check: for each agent, U_i = max bundle of the LPT
// partition of everything arrived under her costs; fires a Violation as soon
// as assigned_i >= threshold * U_i (lowest agent index wins ties). Any
// partition upper-bounds MMS, so a fired certificate is always verifiable.
std::optional<Violation> eager_check(const Transcript& t, const Rat& threshold);

// Incremental form of eager_check for the duel loop: O(1) checks per step via
// the lower bounds max(total_i/n, max_item_i) <= U_i, building the LPT
// witness only when those bounds cannot rule the firing out. Fires on exactly
// the same step and agent as eager_check on the same transcript.
class EagerMonitor {
public:
    EagerMonitor(int n, Rat threshold);

    // Feeds the next event; returns the violation if the check fires.
    std::optional<Violation> on_event(const Transcript& t);

    const std::optional<Rat>& best_ratio_seen() const { return best_ratio_; }

private:
    int n_;
    Rat threshold_;
    std::size_t events_seen_ = 0;
    std::vector<Rat> assigned_;
    std::vector<Rat> arrived_total_;
    std::vector<Rat> max_item_;
    std::optional<Rat> best_ratio_;
};

}  // namespace choreduel
