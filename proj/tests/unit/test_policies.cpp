#include "doctest.h"

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "choreduel/duel.hpp"
#include "choreduel/external_policy.hpp"
#include "choreduel/mms.hpp"
#include "choreduel/policies.hpp"
#include "choreduel/transcript_io.hpp"

using namespace choreduel;

namespace {

AdversaryParams params_n2() {
    AdversaryParams p;
    p.n = 2;
    p.epsilon = Rat(1, 4);
    return p;
}

ChoreCosts costs2(Rat a, Rat b) {
    ChoreCosts c;
    c.costs = {std::move(a), std::move(b)};
    return c;
}

// Body of the transcript: every line except the header, so duels that differ
// only in the policy's display name can be compared event-for-event.
std::string events_and_verdict(const Transcript& t) {
    std::string full = transcript_to_jsonl(t);
    return full.substr(full.find('\n') + 1);
}

const char* kAlwaysOne = R"(python3 -c '
import sys, json
for line in sys.stdin:
    msg = json.loads(line)
    if msg.get("type") == "chore":
        print(json.dumps({"type": "assign", "agent": 1}), flush=True)
')";

const char* kOutOfRange = R"(python3 -c '
import sys, json
for line in sys.stdin:
    if json.loads(line).get("type") == "chore":
        print(json.dumps({"type": "assign", "agent": 7}), flush=True)
')";

const char* kGarbage = R"(python3 -c '
import sys
for line in sys.stdin:
    print("this is not json", flush=True)
')";

}  // namespace

TEST_CASE("builtin registry") {
    CHECK(builtin_policy_names() ==
          std::vector<std::string>{"all-to-one", "round-robin", "greedy-marginal",
                                   "greedy-load", "delayer"});
    for (const std::string& name : builtin_policy_names()) {
        auto p = make_builtin_policy(name);
        REQUIRE(p != nullptr);
        CHECK(p->name() == name);
        CHECK(p->white_box() == (name == "delayer"));
    }
    CHECK_THROWS_AS(make_builtin_policy("nope"), std::invalid_argument);
    CHECK_THROWS_AS(make_builtin_policy(""), std::invalid_argument);
}

TEST_CASE("single-decision behavior of the black-box builtins") {
    Transcript empty_history;
    empty_history.n = 2;

    auto all_to_one = make_builtin_policy("all-to-one");
    all_to_one->begin(2, Rat(1, 4));
    CHECK(all_to_one->decide(1, costs2(Rat(5), Rat(1)), empty_history).value == 1);
    CHECK(all_to_one->decide(7, costs2(Rat(0), Rat(0)), empty_history).value == 1);

    auto round_robin = make_builtin_policy("round-robin");
    round_robin->begin(2, Rat(1, 4));
    CHECK(round_robin->decide(1, costs2(Rat(1), Rat(1)), empty_history).value == 1);
    CHECK(round_robin->decide(2, costs2(Rat(1), Rat(1)), empty_history).value == 2);
    CHECK(round_robin->decide(3, costs2(Rat(1), Rat(1)), empty_history).value == 1);

    auto marginal = make_builtin_policy("greedy-marginal");
    marginal->begin(2, Rat(1, 4));
    CHECK(marginal->decide(1, costs2(Rat(1, 2), Rat(1, 3)), empty_history).value == 2);
    CHECK(marginal->decide(2, costs2(Rat(1), Rat(1)), empty_history).value == 1);  // tie -> lowest
    CHECK(marginal->decide(3, costs2(Rat(16, 289), Rat(4)), empty_history).value == 1);

    auto load = make_builtin_policy("greedy-load");
    load->begin(2, Rat(1, 4));
    CHECK(load->decide(1, costs2(Rat(2), Rat(1)), empty_history).value == 2);  // loads -> (0,1)
    CHECK(load->decide(2, costs2(Rat(2), Rat(1)), empty_history).value == 1);  // 2 vs 2, tie -> a_1
    load->begin(2, Rat(1, 4));  // reset clears the accumulated loads
    CHECK(load->decide(1, costs2(Rat(5), Rat(0)), empty_history).value == 2);
    CHECK(load->decide(2, costs2(Rat(5), Rat(0)), empty_history).value == 2);
    load->begin(2, Rat(1, 4));
    CHECK(load->decide(1, costs2(Rat(5), Rat(1000)), empty_history).value == 1);  // loads (5,0)
    CHECK(load->decide(2, costs2(Rat(1), Rat(100)), empty_history).value == 1);   // 6 vs 100
}

TEST_CASE("delayer: white-box only, and survives longest at n=2") {
    auto delayer = make_builtin_policy("delayer");
    Transcript empty_history;
    empty_history.n = 2;
    CHECK_THROWS_AS(delayer->decide(1, costs2(Rat(1), Rat(1)), empty_history),
                    std::logic_error);

    Adversary adv(params_n2(), delayer->name());
    auto chore1 = adv.next_chore();
    REQUIRE(chore1.has_value());
    // Fresh base absorbs one chore without firing, so the delayer feeds it.
    CHECK(delayer->decide_white_box(1, *chore1, adv).value == 2);
    REQUIRE_FALSE(adv.observe(AgentId{2}).has_value());
    // A second base chore would fire, so the next deepest safe level is a_1.
    auto chore2 = adv.next_chore();
    REQUIRE(chore2.has_value());
    CHECK(delayer->decide_white_box(2, *chore2, adv).value == 1);
}

TEST_CASE("delayer duel: deferred but still defeated") {
    auto delayer = make_builtin_policy("delayer");
    Adversary adv(params_n2(), delayer->name());
    Outcome outcome = run_duel(adv, *delayer);
    REQUIRE(std::holds_alternative<Violation>(outcome));
    const auto& v = std::get<Violation>(outcome);
    CHECK(adv.chores_emitted() <= 200);
    CHECK(adv.chores_emitted() == 66);
    CHECK(v.agent.value == 1);
    CHECK(v.ratio == Rat(17, 9));
    CHECK(v.ratio >= adv.violation_threshold());
    CHECK(verify_violation(adv.transcript()).ok());
}

TEST_CASE("every builtin loses the n=2 duel with a checkable certificate") {
    for (const std::string& name : builtin_policy_names()) {
        CAPTURE(name);
        auto policy = make_builtin_policy(name);
        Adversary adv(params_n2(), name);
        Outcome outcome = run_duel(adv, *policy);
        REQUIRE(std::holds_alternative<Violation>(outcome));
        CHECK(adv.chores_emitted() <= 1156);
        CHECK(verify_violation(adv.transcript()).ok());
    }
}

TEST_CASE("replay purity: a fresh instance re-derives every recorded decision") {
    for (const std::string& name : {std::string("all-to-one"), std::string("round-robin"),
                                    std::string("greedy-marginal"), std::string("greedy-load")}) {
        CAPTURE(name);
        auto policy = make_builtin_policy(name);
        Adversary adv(params_n2(), name);
        run_duel(adv, *policy);
        const Transcript& recorded = adv.transcript();

        auto replayer = make_builtin_policy(name);
        replayer->begin(recorded.n, recorded.epsilon);
        Transcript history;
        history.n = recorded.n;
        history.epsilon = recorded.epsilon;
        for (std::size_t i = 0; i < recorded.events.size(); ++i) {
            AgentId again = replayer->decide(static_cast<std::int64_t>(i) + 1,
                                             recorded.events[i].chore, history);
            CHECK(again.value == recorded.events[i].assignee.value);
            history.events.push_back(recorded.events[i]);
        }
    }
}

TEST_CASE("external subprocess: faithful play matches the builtin") {
    auto builtin = make_builtin_policy("all-to-one");
    Adversary ref(params_n2(), builtin->name());
    run_duel(ref, *builtin);

    auto external = external_policy(kAlwaysOne);
    CHECK(external->name() == std::string("external:") + kAlwaysOne);
    Adversary adv(params_n2(), external->name());
    Outcome outcome = run_duel(adv, *external);
    REQUIRE(std::holds_alternative<Violation>(outcome));
    CHECK(events_and_verdict(adv.transcript()) == events_and_verdict(ref.transcript()));
}

TEST_CASE("external subprocess: wire violations become protocol failures") {
    SUBCASE("assignee out of range") {
        auto external = external_policy(kOutOfRange);
        Adversary adv(params_n2(), external->name());
        Outcome outcome = run_duel(adv, *external);
        REQUIRE(std::holds_alternative<ProtocolFailure>(outcome));
        CHECK(std::get<ProtocolFailure>(outcome).chores_emitted == 1);
        CHECK(std::holds_alternative<ProtocolFailure>(*adv.transcript().outcome));
    }
    SUBCASE("unparseable reply") {
        auto external = external_policy(kGarbage);
        Adversary adv(params_n2(), external->name());
        Outcome outcome = run_duel(adv, *external);
        REQUIRE(std::holds_alternative<ProtocolFailure>(outcome));
    }
    SUBCASE("silence past the deadline") {
        auto external = external_policy("sleep 30", /*timeout_ms=*/300);
        Adversary adv(params_n2(), external->name());
        Outcome outcome = run_duel(adv, *external);
        REQUIRE(std::holds_alternative<ProtocolFailure>(outcome));
        CHECK(std::get<ProtocolFailure>(outcome).reason.find("300") != std::string::npos);
    }
    SUBCASE("immediate exit") {
        auto external = external_policy("true");
        Adversary adv(params_n2(), external->name());
        Outcome outcome = run_duel(adv, *external);
        REQUIRE(std::holds_alternative<ProtocolFailure>(outcome));
    }
}
