#include "choreduel/report.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <variant>

namespace choreduel {

namespace {

std::string approx(const Rat& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", r.to_double());
    return buf;
}

std::string verdict_text(const Transcript& t) {
    if (!t.outcome) return "none";
    struct Visitor {
        std::string operator()(const Violation& v) const {
            return "violation(a_" + std::to_string(v.agent.value) + ")";
        }
        std::string operator()(const BudgetExhausted&) const { return "budget-exhausted"; }
        std::string operator()(const ProtocolFailure&) const { return "protocol-failure"; }
        std::string operator()(const Anomaly&) const { return "anomaly"; }
    };
    return std::visit(Visitor{}, *t.outcome);
}

const Rat* certified_ratio(const Transcript& t) {
    if (!t.outcome) return nullptr;
    if (const auto* v = std::get_if<Violation>(&*t.outcome)) return &v->ratio;
    if (const auto* b = std::get_if<BudgetExhausted>(&*t.outcome)) {
        return b->best_certified_ratio ? &*b->best_certified_ratio : nullptr;
    }
    return nullptr;
}

}  // namespace

void write_report(std::ostream& out, const std::vector<Transcript>& transcripts) {
    const std::vector<std::string> header = {"algo",  "n",      "eps",       "chores",
                                             "verdict", "ratio", "~ratio",    "threshold",
                                             "~threshold"};
    std::vector<std::vector<std::string>> rows;
    rows.push_back(header);

    for (const Transcript& t : transcripts) {
        std::vector<std::string> row;
        row.push_back(t.algo_name);
        row.push_back(std::to_string(t.n));
        row.push_back(format_rat(t.epsilon));
        row.push_back(std::to_string(t.events.size()));
        row.push_back(verdict_text(t));
        if (const Rat* ratio = certified_ratio(t)) {
            row.push_back(format_rat(*ratio));
            row.push_back(approx(*ratio));
        } else {
            row.push_back("-");
            row.push_back("-");
        }
        if (t.epsilon < Rat(1)) {
            Rat threshold = (Rat(1) - t.epsilon) * Rat(t.n);
            row.push_back(format_rat(threshold));
            row.push_back(approx(threshold));
        } else {
            row.push_back("-");
            row.push_back("-");
        }
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) out << std::string(widths[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    out << "(~ columns are display-only decimal approximations)\n";
}

}  // namespace choreduel
