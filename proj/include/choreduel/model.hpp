#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "choreduel/rat.hpp"

namespace choreduel {

// Agents are a_1..a_n; chore indices are 1-based everywhere (API, witness
// partitions, transcript files).
struct AgentId {
    int value = 1;

    friend bool operator==(AgentId a, AgentId b) { return a.value == b.value; }
    friend bool operator!=(AgentId a, AgentId b) { return a.value != b.value; }
};

// Cost vector of one chore over the n agents; entry i-1 is agent a_i's cost.
struct ChoreCosts {
    std::vector<Rat> costs;
};

struct Event {
    ChoreCosts chore;
    AgentId assignee;
};

// n bundles of 1-based chore indices; pairwise disjoint, union {1..m},
// empty bundles allowed.
struct Partition {
    std::vector<std::vector<std::int64_t>> bundles;
};

struct Violation {
    AgentId agent;
    Rat assigned_cost;
    Partition witness;
    Rat mms_upper;  // max bundle cost of witness under the violated agent's costs
    Rat ratio;      // assigned_cost / mms_upper, >= (1-eps)*n
};

struct BudgetExhausted {
    std::int64_t chores_emitted = 0;
    std::optional<Rat> best_certified_ratio;
};

struct ProtocolFailure {
    std::int64_t chores_emitted = 0;
    std::string reason;
};

// Unreachable by design; emitted instead of an unverifiable Violation.
struct Anomaly {
    std::string reason;
};

using Outcome = std::variant<Violation, BudgetExhausted, ProtocolFailure, Anomaly>;

// Full record of a duel. Events are strictly ordered by arrival and never
// modified; the chore count m is just events.size().
struct Transcript {
    int n = 1;
    Rat epsilon;
    Rat kappa;
    std::string algo_name;
    std::vector<Event> events;
    std::optional<Outcome> outcome;
};

inline bool valid_agent(AgentId a, int n) { return a.value >= 1 && a.value <= n; }

// Agent's exact cost for one chore (1-based index).
const Rat& chore_cost(const Transcript& t, std::int64_t chore_index, AgentId agent);

// Sum of the agent's costs over the listed chores; empty list -> 0.
Rat bundle_cost(const Transcript& t, AgentId agent, std::span<const std::int64_t> indices);

// Sum of the agent's costs over exactly the chores assigned to her.
Rat assigned_cost(const Transcript& t, AgentId agent);

}  // namespace choreduel
