#include "choreduel/transcript_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "choreduel/errors.hpp"
#include "json_codec.hpp"

namespace choreduel {

namespace {

using codec::json;

json header_record(const Transcript& t) {
    json j;
    j["algo"] = t.algo_name;
    j["epsilon"] = format_rat(t.epsilon);
    j["kappa"] = format_rat(t.kappa);
    j["n"] = t.n;
    return j;
}

json chore_record(const Event& e, std::int64_t index) {
    json costs = json::array();
    for (const Rat& c : e.chore.costs) costs.push_back(format_rat(c));
    json j;
    j["assigned"] = e.assignee.value;
    j["costs"] = std::move(costs);
    j["index"] = index;
    return j;
}

}  // namespace

std::string transcript_to_jsonl(const Transcript& t) {
    std::ostringstream out;
    out << header_record(t).dump() << '\n';
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        out << chore_record(t.events[i], static_cast<std::int64_t>(i) + 1).dump() << '\n';
    }
    if (t.outcome) out << codec::outcome_to_json(*t.outcome).dump() << '\n';
    return out.str();
}

Transcript transcript_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Transcript t;
    bool saw_header = false;
    std::int64_t next_index = 1;

    while (std::getline(in, line)) {
        if (line.empty()) {
            // Only a final newline may leave an empty tail segment, and
            // getline never yields it; an explicit blank line is malformed.
            throw ParseError("blank line in transcript");
        }
        json j = codec::parse_line(line);
        if (!saw_header) {
            std::int64_t n = codec::get_int(j, "n");
            if (n < 1) throw ParseError("header n must be >= 1");
            t.n = static_cast<int>(n);
            t.algo_name = codec::get_string(j, "algo");
            t.epsilon = codec::get_rat(j, "epsilon");
            t.kappa = codec::get_rat(j, "kappa");
            codec::expect_size(j, 4, "header record");
            saw_header = true;
            continue;
        }
        if (t.outcome) throw ParseError("record after the verdict line");
        if (j.contains("type")) {
            t.outcome = codec::outcome_from_json(j, t.n);
            continue;
        }
        Event e;
        std::int64_t index = codec::get_int(j, "index");
        if (index != next_index) {
            throw ParseError("chore index " + std::to_string(index) + " where " +
                             std::to_string(next_index) + " was expected");
        }
        const json& costs = codec::get_array(j, "costs");
        if (static_cast<int>(costs.size()) != t.n) {
            throw ParseError("chore " + std::to_string(index) + " has " +
                             std::to_string(costs.size()) + " costs for n=" + std::to_string(t.n));
        }
        for (const json& c : costs) {
            if (!c.is_string()) throw ParseError("chore cost is not a string");
            e.chore.costs.push_back(codec::canonical_rat(c.get<std::string>(), "chore cost"));
        }
        std::int64_t assigned = codec::get_int(j, "assigned");
        if (assigned < 1 || assigned > t.n) {
            throw ParseError("assignee out of range: " + std::to_string(assigned));
        }
        e.assignee = AgentId{static_cast<int>(assigned)};
        codec::expect_size(j, 3, "chore record");
        t.events.push_back(std::move(e));
        ++next_index;
    }
    if (!saw_header) throw ParseError("empty transcript");
    return t;
}

void save_transcript(const std::filesystem::path& path, const Transcript& t) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << transcript_to_jsonl(t);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Transcript load_transcript(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return transcript_from_jsonl(buf.str());
}

}  // namespace choreduel
