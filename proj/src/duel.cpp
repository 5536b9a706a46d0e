#include "choreduel/duel.hpp"

#include <optional>
#include <variant>

#include "choreduel/errors.hpp"

namespace choreduel {

Outcome run_duel(Adversary& adversary, Policy& policy) {
    const AdversaryParams& params = adversary.params();
    std::optional<EagerMonitor> monitor;
    if (params.eager_check) monitor.emplace(params.n, adversary.violation_threshold());

    Outcome outcome = [&]() -> Outcome {
        try {
            policy.begin(params.n, params.epsilon);
            for (;;) {
                std::optional<ChoreCosts> chore = adversary.next_chore();
                if (!chore) {
                    return adversary.budget_verdict(monitor ? monitor->best_ratio_seen()
                                                            : std::nullopt);
                }
                std::int64_t index = adversary.chores_emitted();
                AgentId assignee = policy.white_box()
                                       ? policy.decide_white_box(index, *chore, adversary)
                                       : policy.decide(index, *chore, adversary.transcript());
                if (std::optional<Violation> fired = adversary.observe(assignee)) {
                    return *fired;
                }
                if (monitor) {
                    if (std::optional<Violation> eager = monitor->on_event(adversary.transcript())) {
                        adversary.record_outcome(*eager);
                        return *eager;
                    }
                }
            }
        } catch (const ProtocolError& e) {
            ProtocolFailure failure{adversary.chores_emitted(), e.what()};
            adversary.record_outcome(failure);
            return failure;
        } catch (const InternalAnomalyError& e) {
            Anomaly anomaly{e.what()};
            adversary.record_outcome(anomaly);
            return anomaly;
        }
    }();

    policy.end(outcome);
    return outcome;
}

int outcome_exit_code(const Outcome& outcome) {
    struct Visitor {
        int operator()(const Violation&) const { return 0; }
        int operator()(const BudgetExhausted&) const { return 2; }
        int operator()(const ProtocolFailure&) const { return 3; }
        int operator()(const Anomaly&) const { return 5; }
    };
    return std::visit(Visitor{}, outcome);
}

}  // namespace choreduel
