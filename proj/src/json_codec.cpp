#include "json_codec.hpp"

#include <utility>
#include <variant>

namespace choreduel::codec {

json parse_line(const std::string& line) {
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("malformed JSON record: " + line.substr(0, 80));
    }
    return j;
}

std::int64_t get_int(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) {
        throw ParseError(std::string("missing or non-integer field \"") + key + "\"");
    }
    return it->get<std::int64_t>();
}

std::string get_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        throw ParseError(std::string("missing or non-string field \"") + key + "\"");
    }
    return it->get<std::string>();
}

const json& get_array(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_array()) {
        throw ParseError(std::string("missing or non-array field \"") + key + "\"");
    }
    return *it;
}

Rat canonical_rat(const std::string& text, const char* context) {
    Rat value;
    try {
        value = parse_rat(text);
    } catch (const ParseError& e) {
        throw ParseError(std::string(context) + ": " + e.what());
    }
    if (format_rat(value) != text) {
        throw ParseError(std::string(context) + ": non-canonical rational \"" + text + "\"");
    }
    return value;
}

Rat get_rat(const json& j, const char* key) {
    return canonical_rat(get_string(j, key), key);
}

void expect_size(const json& j, std::size_t expected_fields, const char* context) {
    if (j.size() != expected_fields) {
        throw ParseError(std::string(context) + ": unexpected extra field");
    }
}

json outcome_to_json(const Outcome& outcome) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            json j;
            if constexpr (std::is_same_v<T, Violation>) {
                j["type"] = "violation";
                j["agent"] = v.agent.value;
                j["assigned_cost"] = format_rat(v.assigned_cost);
                j["mms_upper"] = format_rat(v.mms_upper);
                j["ratio"] = format_rat(v.ratio);
                json bundles = json::array();
                for (const auto& bundle : v.witness.bundles) bundles.push_back(bundle);
                j["witness"] = std::move(bundles);
            } else if constexpr (std::is_same_v<T, BudgetExhausted>) {
                j["type"] = "budget-exhausted";
                j["chores_emitted"] = v.chores_emitted;
                if (v.best_certified_ratio) {
                    j["best_certified_ratio"] = format_rat(*v.best_certified_ratio);
                }
            } else if constexpr (std::is_same_v<T, ProtocolFailure>) {
                j["type"] = "protocol-failure";
                j["chores_emitted"] = v.chores_emitted;
                j["reason"] = v.reason;
            } else {
                static_assert(std::is_same_v<T, Anomaly>);
                j["type"] = "anomaly";
                j["reason"] = v.reason;
            }
            return j;
        },
        outcome);
}

Outcome outcome_from_json(const json& j, int n) {
    std::string type = get_string(j, "type");
    if (type == "violation") {
        Violation v;
        std::int64_t agent = get_int(j, "agent");
        if (agent < 1 || agent > n) {
            throw ParseError("violation agent out of range: " + std::to_string(agent));
        }
        v.agent = AgentId{static_cast<int>(agent)};
        v.assigned_cost = get_rat(j, "assigned_cost");
        v.mms_upper = get_rat(j, "mms_upper");
        v.ratio = get_rat(j, "ratio");
        const json& bundles = get_array(j, "witness");
        for (const json& bundle : bundles) {
            if (!bundle.is_array()) throw ParseError("witness bundle is not an array");
            std::vector<std::int64_t> indices;
            for (const json& entry : bundle) {
                if (!entry.is_number_integer()) {
                    throw ParseError("witness chore index is not an integer");
                }
                indices.push_back(entry.get<std::int64_t>());
            }
            v.witness.bundles.push_back(std::move(indices));
        }
        expect_size(j, 6, "violation record");
        return v;
    }
    if (type == "budget-exhausted") {
        BudgetExhausted b;
        b.chores_emitted = get_int(j, "chores_emitted");
        if (j.contains("best_certified_ratio")) {
            b.best_certified_ratio = get_rat(j, "best_certified_ratio");
            expect_size(j, 3, "budget-exhausted record");
        } else {
            expect_size(j, 2, "budget-exhausted record");
        }
        return b;
    }
    if (type == "protocol-failure") {
        ProtocolFailure p;
        p.chores_emitted = get_int(j, "chores_emitted");
        p.reason = get_string(j, "reason");
        expect_size(j, 3, "protocol-failure record");
        return p;
    }
    if (type == "anomaly") {
        Anomaly a;
        a.reason = get_string(j, "reason");
        expect_size(j, 2, "anomaly record");
        return a;
    }
    throw ParseError("unknown verdict type \"" + type + "\"");
}

}  // namespace choreduel::codec
