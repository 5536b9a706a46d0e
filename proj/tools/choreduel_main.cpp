#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "choreduel/adversary.hpp"
#include "choreduel/duel.hpp"
#include "choreduel/errors.hpp"
#include "choreduel/external_policy.hpp"
#include "choreduel/mms.hpp"
#include "choreduel/policies.hpp"
#include "choreduel/report.hpp"
#include "choreduel/transcript_io.hpp"

namespace cd = choreduel;

namespace {

struct DuelOptions {
    int n = 2;
    std::string eps;
    std::string kappa = "1";
    std::int64_t budget = 10'000;
    std::string algo;
    std::string cmd;
    bool eager = false;
    std::string out = "transcript.jsonl";
    int timeout_ms = cd::kDefaultReplyTimeoutMs;
};

void add_duel_options(CLI::App& sub, DuelOptions& o, bool with_policy) {
    sub.add_option("--n", o.n, "number of agents")->required();
    sub.add_option("--eps", o.eps, "epsilon in (0,1), as p/q")->required();
    sub.add_option("--kappa", o.kappa, "bootstrap base cost, > 0")->capture_default_str();
    sub.add_option("--budget", o.budget, "max chores the adversary may emit")
        ->capture_default_str();
    if (with_policy) {
        auto* algo = sub.add_option("--algo", o.algo, "built-in policy name");
        auto* cmd = sub.add_option("--cmd", o.cmd, "external policy command line");
        algo->excludes(cmd);
        cmd->excludes(algo);
        sub.add_option("--timeout-ms", o.timeout_ms, "external reply timeout in ms")
            ->capture_default_str();
    }
    sub.add_flag("--eager", o.eager, "fire as soon as any witness bound is beaten");
    sub.add_option("--out", o.out, "transcript output path")->capture_default_str();
}

cd::AdversaryParams make_params(const DuelOptions& o) {
    cd::AdversaryParams p;
    p.n = o.n;
    p.epsilon = cd::parse_rat(o.eps);
    p.kappa = cd::parse_rat(o.kappa);
    p.budget = o.budget;
    p.eager_check = o.eager;
    return p;
}

std::string approx(const cd::Rat& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", r.to_double());
    return buf;
}

std::string exact_and_approx(const cd::Rat& r) {
    return cd::format_rat(r) + " (~" + approx(r) + ")";
}

void print_outcome(const cd::Adversary& adv, const cd::Outcome& outcome) {
    struct Visitor {
        const cd::Adversary& adv;

        void operator()(const cd::Violation& v) const {
            std::cout << "verdict: violation(a_" << v.agent.value << ") after "
                      << adv.transcript().events.size() << " chores\n"
                      << "assigned: " << cd::format_rat(v.assigned_cost)
                      << "  witness bound: " << cd::format_rat(v.mms_upper) << "\n"
                      << "ratio: " << exact_and_approx(v.ratio)
                      << "  threshold: " << exact_and_approx(adv.violation_threshold()) << "\n";
        }
        void operator()(const cd::BudgetExhausted& b) const {
            std::cout << "verdict: budget-exhausted after " << b.chores_emitted << " chores\n"
                      << "best certified ratio: "
                      << (b.best_certified_ratio ? exact_and_approx(*b.best_certified_ratio)
                                                 : std::string("-"))
                      << "  threshold: " << exact_and_approx(adv.violation_threshold()) << "\n";
        }
        void operator()(const cd::ProtocolFailure& p) const {
            std::cout << "verdict: protocol-failure after " << p.chores_emitted << " chores\n"
                      << "reason: " << p.reason << "\n";
        }
        void operator()(const cd::Anomaly& a) const {
            std::cout << "verdict: anomaly\nreason: " << a.reason << "\n";
        }
    };
    std::visit(Visitor{adv}, outcome);
}

int cmd_duel(const DuelOptions& o) {
    if (o.algo.empty() == o.cmd.empty()) {
        std::cerr << "error: exactly one of --algo or --cmd is required\n";
        return 1;
    }
    std::unique_ptr<cd::Policy> policy = o.algo.empty()
                                             ? cd::external_policy(o.cmd, o.timeout_ms)
                                             : cd::make_builtin_policy(o.algo);
    cd::Adversary adversary(make_params(o), policy->name());
    cd::Outcome outcome = cd::run_duel(adversary, *policy);
    cd::save_transcript(o.out, adversary.transcript());
    print_outcome(adversary, outcome);
    std::cout << "transcript: " << o.out << "\n";
    return cd::outcome_exit_code(outcome);
}

int cmd_verify(const std::string& path) {
    cd::Transcript t;
    try {
        t = cd::load_transcript(path);
    } catch (const cd::ParseError& e) {
        std::cout << "structural error: " << e.what() << "\n";
        return 4;
    }
    if (!t.outcome || !std::holds_alternative<cd::Violation>(*t.outcome)) {
        std::cout << "no violation verdict to verify\n";
        return 2;
    }
    cd::VerifyReport report = cd::verify_violation(t);
    switch (report.status) {
        case cd::VerifyStatus::valid: {
            const auto& v = std::get<cd::Violation>(*t.outcome);
            std::cout << "valid: agent a_" << v.agent.value << " pays ratio "
                      << exact_and_approx(v.ratio) << " >= threshold "
                      << exact_and_approx((cd::Rat(1) - t.epsilon) * cd::Rat(t.n)) << "\n";
            return 0;
        }
        case cd::VerifyStatus::invalid:
            std::cout << "invalid: " << report.detail << "\n";
            return 1;
        case cd::VerifyStatus::structural_error:
        default:
            std::cout << "structural error: " << report.detail << "\n";
            return 4;
    }
}

int cmd_mms(const std::string& costs_text, int k) {
    std::vector<cd::Rat> costs;
    std::size_t start = 0;
    while (start <= costs_text.size()) {
        std::size_t comma = costs_text.find(',', start);
        if (comma == std::string::npos) comma = costs_text.size();
        costs.push_back(cd::parse_rat(costs_text.substr(start, comma - start)));
        start = comma + 1;
    }
    cd::MmsResult result = cd::mms_exact(costs, k);
    std::cout << cd::format_rat(result.value) << "\n";
    std::cout << "partition:";
    for (const auto& bundle : result.partition.bundles) {
        std::cout << " [";
        for (std::size_t i = 0; i < bundle.size(); ++i) {
            if (i) std::cout << ',';
            std::cout << bundle[i];
        }
        std::cout << ']';
    }
    std::cout << "\n";
    return 0;
}

struct QuitSession {};

class HumanPolicy final : public cd::Policy {
public:
    const std::string& name() const override {
        static const std::string n = "human";
        return n;
    }

    void begin(int n, const cd::Rat&) override { n_ = n; }

    cd::AgentId decide(std::int64_t index, const cd::ChoreCosts& chore,
                       const cd::Transcript&) override {
        std::cout << "chore " << index << " costs:";
        for (const auto& c : chore.costs) std::cout << ' ' << cd::format_rat(c);
        std::cout << '\n';
        for (;;) {
            std::cout << "assign to [1.." << n_ << "] (q quits): " << std::flush;
            std::string line;
            if (!std::getline(std::cin, line)) throw QuitSession{};
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            std::size_t first = line.find_first_not_of(' ');
            if (first != std::string::npos && first > 0) line.erase(0, first);
            if (line == "q") throw QuitSession{};
            try {
                std::size_t pos = 0;
                int a = std::stoi(line, &pos);
                if (pos == line.size() && a >= 1 && a <= n_) return cd::AgentId{a};
            } catch (const std::exception&) {
            }
            std::cout << "enter a number in [1.." << n_ << "] or q\n";
        }
    }

private:
    int n_ = 1;
};

int cmd_play(const DuelOptions& o) {
    HumanPolicy human;
    cd::Adversary adversary(make_params(o), human.name());
    try {
        cd::Outcome outcome = cd::run_duel(adversary, human);
        cd::save_transcript(o.out, adversary.transcript());
        print_outcome(adversary, outcome);
        std::cout << "transcript: " << o.out << "\n";
        return cd::outcome_exit_code(outcome);
    } catch (const QuitSession&) {
        cd::save_transcript(o.out, adversary.transcript());
        std::cout << "\naborted without verdict\ntranscript: " << o.out << "\n";
        return 0;
    }
}

int cmd_report(const std::vector<std::string>& paths) {
    std::vector<cd::Transcript> transcripts;
    for (const std::string& path : paths) {
        try {
            transcripts.push_back(cd::load_transcript(path));
        } catch (const cd::ParseError& e) {
            std::cerr << path << ": " << e.what() << "\n";
            return 4;
        }
    }
    cd::write_report(std::cout, transcripts);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarial testbed for online chore assignment under maximin-share fairness"};
    app.require_subcommand(1);

    DuelOptions duel_opt;
    auto* duel = app.add_subcommand("duel", "run one adversary-vs-policy duel to a verdict");
    add_duel_options(*duel, duel_opt, /*with_policy=*/true);

    std::string verify_path;
    auto* verify = app.add_subcommand("verify", "recheck a transcript's violation certificate");
    verify->add_option("path", verify_path, "transcript file")->required();

    std::string costs_text;
    int k = 1;
    auto* mms = app.add_subcommand("mms", "exact maximin-share value of a cost list");
    mms->add_option("--costs", costs_text, "comma-separated rationals")->required();
    mms->add_option("--k", k, "number of bundles")->required();

    DuelOptions play_opt;
    auto* play = app.add_subcommand("play", "interactive duel: you type each assignment");
    add_duel_options(*play, play_opt, /*with_policy=*/false);

    std::vector<std::string> report_paths;
    auto* report = app.add_subcommand("report", "summary table over saved transcripts");
    report->add_option("paths", report_paths, "transcript files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (duel->parsed()) return cmd_duel(duel_opt);
        if (verify->parsed()) return cmd_verify(verify_path);
        if (mms->parsed()) return cmd_mms(costs_text, k);
        if (play->parsed()) return cmd_play(play_opt);
        if (report->parsed()) return cmd_report(report_paths);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
