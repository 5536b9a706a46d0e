#include "doctest.h"

#include <filesystem>
#include <string>
#include <variant>

#include "choreduel/errors.hpp"
#include "choreduel/transcript_io.hpp"

using namespace choreduel;

namespace {

Transcript two_chore_transcript() {
    Transcript t;
    t.n = 2;
    t.epsilon = Rat(1, 4);
    t.kappa = Rat(1);
    t.algo_name = "always-2";
    Event e1;
    e1.chore.costs = {Rat(16, 289), Rat(4)};
    e1.assignee = AgentId{2};
    Event e2;
    e2.chore.costs = {Rat(16, 17), Rat(4)};
    e2.assignee = AgentId{2};
    t.events = {e1, e2};
    return t;
}

Transcript with_violation() {
    Transcript t = two_chore_transcript();
    Violation v;
    v.agent = AgentId{2};
    v.assigned_cost = Rat(8);
    v.witness.bundles = {{1}, {2}};
    v.mms_upper = Rat(4);
    v.ratio = Rat(2);
    t.outcome = v;
    return t;
}

const char* kGolden =
    "{\"algo\":\"always-2\",\"epsilon\":\"1/4\",\"kappa\":\"1\",\"n\":2}\n"
    "{\"assigned\":2,\"costs\":[\"16/289\",\"4\"],\"index\":1}\n"
    "{\"assigned\":2,\"costs\":[\"16/17\",\"4\"],\"index\":2}\n"
    "{\"agent\":2,\"assigned_cost\":\"8\",\"mms_upper\":\"4\",\"ratio\":\"2\","
    "\"type\":\"violation\",\"witness\":[[1],[2]]}\n";

void check_rejected(const std::string& text) {
    CHECK_THROWS_AS(transcript_from_jsonl(text), ParseError);
}

}  // namespace

TEST_CASE("serialization: stable golden bytes") {
    CHECK(transcript_to_jsonl(with_violation()) == kGolden);
}

TEST_CASE("round trip: serialize, parse, serialize again") {
    SUBCASE("violation verdict") {
        std::string once = transcript_to_jsonl(with_violation());
        Transcript parsed = transcript_from_jsonl(once);
        CHECK(parsed.n == 2);
        CHECK(parsed.epsilon == Rat(1, 4));
        CHECK(parsed.algo_name == "always-2");
        REQUIRE(parsed.events.size() == 2);
        CHECK(parsed.events[0].chore.costs[0] == Rat(16, 289));
        REQUIRE(parsed.outcome.has_value());
        CHECK(std::get<Violation>(*parsed.outcome).ratio == Rat(2));
        CHECK(transcript_to_jsonl(parsed) == once);
    }
    SUBCASE("budget verdict, with and without a best ratio") {
        Transcript t = two_chore_transcript();
        t.outcome = BudgetExhausted{2, Rat(5, 3)};
        std::string once = transcript_to_jsonl(t);
        CHECK(transcript_to_jsonl(transcript_from_jsonl(once)) == once);

        t.outcome = BudgetExhausted{2, std::nullopt};
        once = transcript_to_jsonl(t);
        CHECK(transcript_to_jsonl(transcript_from_jsonl(once)) == once);
    }
    SUBCASE("protocol failure verdict") {
        Transcript t = two_chore_transcript();
        t.outcome = ProtocolFailure{2, "no reply within 300 ms"};
        std::string once = transcript_to_jsonl(t);
        Transcript parsed = transcript_from_jsonl(once);
        CHECK(std::get<ProtocolFailure>(*parsed.outcome).reason == "no reply within 300 ms");
        CHECK(transcript_to_jsonl(parsed) == once);
    }
    SUBCASE("anomaly verdict") {
        Transcript t = two_chore_transcript();
        t.outcome = Anomaly{"pattern position exceeded the schedule bound at depth 1"};
        std::string once = transcript_to_jsonl(t);
        CHECK(transcript_to_jsonl(transcript_from_jsonl(once)) == once);
    }
    SUBCASE("no verdict (aborted session)") {
        Transcript t = two_chore_transcript();
        std::string once = transcript_to_jsonl(t);
        Transcript parsed = transcript_from_jsonl(once);
        CHECK_FALSE(parsed.outcome.has_value());
        CHECK(transcript_to_jsonl(parsed) == once);
    }
    SUBCASE("loading is structural only; range checks belong to the verifier") {
        // epsilon outside (0,1) still loads; verify_violation rejects it.
        Transcript parsed = transcript_from_jsonl(
            "{\"algo\":\"x\",\"epsilon\":\"5/4\",\"kappa\":\"1\",\"n\":2}\n");
        CHECK(parsed.epsilon == Rat(5, 4));
    }
    SUBCASE("header only") {
        Transcript t;
        t.n = 3;
        t.epsilon = Rat(1, 2);
        t.kappa = Rat(1);
        t.algo_name = "x";
        std::string once = transcript_to_jsonl(t);
        CHECK(transcript_to_jsonl(transcript_from_jsonl(once)) == once);
    }
}

TEST_CASE("file round trip") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "choreduel-transcript-test.jsonl";
    Transcript t = with_violation();
    save_transcript(path, t);
    Transcript loaded = load_transcript(path);
    CHECK(transcript_to_jsonl(loaded) == transcript_to_jsonl(t));
    fs::remove(path);
    CHECK_THROWS_AS(load_transcript(path), ParseError);
}

TEST_CASE("parser rejects corrupted inputs") {
    const std::string header = "{\"algo\":\"x\",\"epsilon\":\"1/4\",\"kappa\":\"1\",\"n\":2}\n";
    const std::string chore1 = "{\"assigned\":2,\"costs\":[\"16/289\",\"4\"],\"index\":1}\n";
    const std::string verdict =
        "{\"agent\":2,\"assigned_cost\":\"4\",\"mms_upper\":\"4\",\"ratio\":\"1\","
        "\"type\":\"violation\",\"witness\":[[1]]}\n";

    check_rejected("");  // no header at all
    check_rejected(header + "\n" + chore1);  // blank interior line
    check_rejected(header + "{\"assigned\":2,\"costs\":[\"16/289\",\"4\"],\"index\":2}\n");
    check_rejected(header + chore1 + chore1);  // index 1 repeated
    check_rejected(header + "{\"assigned\":2,\"costs\":[\"16/289\"],\"index\":1}\n");
    check_rejected(header + "{\"assigned\":2,\"costs\":[\"2/4\",\"4\"],\"index\":1}\n");
    check_rejected(header + "{\"assigned\":2,\"costs\":[\"16/289\",4],\"index\":1}\n");
    check_rejected(header + "{\"assigned\":2,\"costs\":[\"16/289\",\"4\"],\"index\":1,\"note\":1}\n");
    check_rejected(header + "{\"assigned\":0,\"costs\":[\"16/289\",\"4\"],\"index\":1}\n");
    check_rejected(header + "{\"assigned\":3,\"costs\":[\"16/289\",\"4\"],\"index\":1}\n");
    check_rejected(header + "{\"assigned\":2,\"costs\":[\"16/289\",\"4\"]");  // truncated
    check_rejected(header + chore1 + verdict + chore1);   // record after the verdict
    check_rejected(header + chore1 + verdict + verdict);  // two verdicts
    check_rejected(header + "{\"type\":\"sideways\"}\n");
    check_rejected(header + "{\"agent\":7,\"assigned_cost\":\"4\",\"mms_upper\":\"4\","
                            "\"ratio\":\"1\",\"type\":\"violation\",\"witness\":[[1]]}\n");
    check_rejected(header + "{\"agent\":2,\"assigned_cost\":\"4\",\"mms_upper\":\"4\","
                            "\"ratio\":\"1\",\"type\":\"violation\",\"witness\":[1]}\n");
    check_rejected(header + "{\"agent\":2,\"assigned_cost\":\"4\",\"mms_upper\":\"4\","
                            "\"ratio\":\"1\",\"type\":\"violation\",\"witness\":[[\"1\"]]}\n");
    check_rejected(header + "{\"chores_emitted\":1,\"type\":\"budget-exhausted\","
                            "\"best_certified_ratio\":\"2/4\"}\n");
    check_rejected("{\"algo\":\"x\",\"epsilon\":\"1/4\",\"kappa\":\"1\",\"n\":0}\n");
    check_rejected("{\"algo\":\"x\",\"epsilon\":\"1/4\",\"kappa\":\"1\"}\n");
    check_rejected("{\"algo\":\"x\",\"epsilon\":\"1/4\",\"kappa\":\"1\",\"n\":2,\"v\":1}\n");
    check_rejected("not json\n");
    check_rejected("[1,2,3]\n");
}
