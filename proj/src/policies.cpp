#include "choreduel/policies.hpp"

#include <stdexcept>

#include "choreduel/adversary.hpp"

namespace choreduel {

AgentId Policy::decide_white_box(std::int64_t index, const ChoreCosts& chore,
                                 const Adversary& adversary) {
    return decide(index, chore, adversary.transcript());
}

namespace {

class AllToOne final : public Policy {
public:
    const std::string& name() const override {
        static const std::string n = "all-to-one";
        return n;
    }

    AgentId decide(std::int64_t, const ChoreCosts&, const Transcript&) override {
        return AgentId{1};
    }
};

class RoundRobin final : public Policy {
public:
    const std::string& name() const override {
        static const std::string n = "round-robin";
        return n;
    }

    void begin(int n, const Rat&) override { n_ = n; }

    AgentId decide(std::int64_t index, const ChoreCosts&, const Transcript&) override {
        return AgentId{static_cast<int>((index - 1) % n_) + 1};
    }

private:
    int n_ = 1;
};

class GreedyMarginal final : public Policy {
public:
    const std::string& name() const override {
        static const std::string n = "greedy-marginal";
        return n;
    }

    AgentId decide(std::int64_t, const ChoreCosts& chore, const Transcript&) override {
        std::size_t best = 0;
        for (std::size_t i = 1; i < chore.costs.size(); ++i) {
            if (chore.costs[i] < chore.costs[best]) best = i;
        }
        return AgentId{static_cast<int>(best) + 1};
    }
};

class GreedyLoad final : public Policy {
public:
    const std::string& name() const override {
        static const std::string n = "greedy-load";
        return n;
    }

    void begin(int n, const Rat&) override { loads_.assign(static_cast<std::size_t>(n), Rat{}); }

    AgentId decide(std::int64_t, const ChoreCosts& chore, const Transcript&) override {
        std::size_t best = 0;
        Rat best_total = loads_[0] + chore.costs[0];
        for (std::size_t i = 1; i < chore.costs.size(); ++i) {
            Rat total = loads_[i] + chore.costs[i];
            if (total < best_total) {
                best = i;
                best_total = std::move(total);
            }
        }
        loads_[best] = std::move(best_total);
        return AgentId{static_cast<int>(best) + 1};
    }

private:
    std::vector<Rat> loads_;
};

// Survives as long as the scenario allows: feed the deepest level whose
// counter can still absorb the chore without firing, and only feed a_1 (the
// slow accumulation target) when every deeper level is one step from firing.
class Delayer final : public Policy {
public:
    const std::string& name() const override {
        static const std::string n = "delayer";
        return n;
    }

    bool white_box() const override { return true; }

    AgentId decide(std::int64_t, const ChoreCosts&, const Transcript&) override {
        throw std::logic_error("delayer requires white-box access to the adversary");
    }

    AgentId decide_white_box(std::int64_t, const ChoreCosts&,
                             const Adversary& adversary) override {
        int n = adversary.params().n;
        for (int d = n; d >= 1; --d) {
            AgentId a{d};
            if (!adversary.would_fire(a)) return a;
        }
        return AgentId{1};
    }
};

}  // namespace

std::unique_ptr<Policy> make_builtin_policy(const std::string& name) {
    if (name == "all-to-one") return std::make_unique<AllToOne>();
    if (name == "round-robin") return std::make_unique<RoundRobin>();
    if (name == "greedy-marginal") return std::make_unique<GreedyMarginal>();
    if (name == "greedy-load") return std::make_unique<GreedyLoad>();
    if (name == "delayer") return std::make_unique<Delayer>();
    throw std::invalid_argument("unknown policy: " + name);
}

const std::vector<std::string>& builtin_policy_names() {
    static const std::vector<std::string> names = {
        "all-to-one", "round-robin", "greedy-marginal", "greedy-load", "delayer",
    };
    return names;
}

}  // namespace choreduel
