#include "choreduel/model.hpp"

#include <stdexcept>

namespace choreduel {

const Rat& chore_cost(const Transcript& t, std::int64_t chore_index, AgentId agent) {
    if (chore_index < 1 || chore_index > static_cast<std::int64_t>(t.events.size())) {
        throw std::out_of_range("chore index " + std::to_string(chore_index) + " out of range");
    }
    if (!valid_agent(agent, t.n)) {
        throw std::out_of_range("agent index " + std::to_string(agent.value) + " out of range");
    }
    return t.events[static_cast<std::size_t>(chore_index - 1)].chore.costs[static_cast<std::size_t>(agent.value - 1)];
}

Rat bundle_cost(const Transcript& t, AgentId agent, std::span<const std::int64_t> indices) {
    Rat sum;
    for (std::int64_t idx : indices) {
        sum += chore_cost(t, idx, agent);
    }
    return sum;
}

Rat assigned_cost(const Transcript& t, AgentId agent) {
    Rat sum;
    for (const Event& e : t.events) {
        if (e.assignee == agent) {
            sum += e.chore.costs[static_cast<std::size_t>(agent.value - 1)];
        }
    }
    return sum;
}

}  // namespace choreduel
