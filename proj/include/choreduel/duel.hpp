#pragma once

#include "choreduel/adversary.hpp"
#include "choreduel/policies.hpp"

namespace choreduel {

// Plays one full duel: next_chore → policy decision → observe, with the
// incremental eager check when the adversary was configured for it. The
// verdict is recorded on the adversary's transcript and returned. A
// ProtocolError from the policy or from observe becomes a protocol-failure
// verdict; an InternalAnomalyError becomes an anomaly verdict.
Outcome run_duel(Adversary& adversary, Policy& policy);

// duel subcommand exit status: 0 violation, 2 budget exhausted,
// 3 protocol failure, 5 anomaly.
int outcome_exit_code(const Outcome& outcome);

}  // namespace choreduel
