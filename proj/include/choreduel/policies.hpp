#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "choreduel/model.hpp"

namespace choreduel {

class Adversary;

// A deterministic online assignment policy. One instance plays one duel:
// begin() resets, then decide() is called once per chore in arrival order and
// every decision is irrevocable. Black-box policies see only the history and
// the pending chore; a white-box policy (white_box() == true) is handed the
// adversary itself instead.
class Policy {
public:
    virtual ~Policy() = default;

    virtual const std::string& name() const = 0;
    virtual bool white_box() const { return false; }

    virtual void begin(int /*n*/, const Rat& /*epsilon*/) {}

    // index is the 1-based arrival position; history holds chores 1..index-1.
    virtual AgentId decide(std::int64_t index, const ChoreCosts& chore,
                           const Transcript& history) = 0;

    // Default forwards to decide() on the adversary's transcript.
    virtual AgentId decide_white_box(std::int64_t index, const ChoreCosts& chore,
                                     const Adversary& adversary);

    virtual void end(const Outcome& /*outcome*/) {}
};

// Built-ins: "all-to-one", "round-robin", "greedy-marginal", "greedy-load",
// "delayer" (white-box). Throws std::invalid_argument on unknown names.
std::unique_ptr<Policy> make_builtin_policy(const std::string& name);

const std::vector<std::string>& builtin_policy_names();

}  // namespace choreduel
