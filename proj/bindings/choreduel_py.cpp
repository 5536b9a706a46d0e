#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "choreduel/adversary.hpp"
#include "choreduel/duel.hpp"
#include "choreduel/errors.hpp"
#include "choreduel/mms.hpp"
#include "choreduel/policies.hpp"
#include "choreduel/transcript_io.hpp"

namespace py = pybind11;
namespace cd = choreduel;

namespace {

std::vector<cd::Rat> parse_costs(const std::vector<std::string>& texts) {
    std::vector<cd::Rat> costs;
    costs.reserve(texts.size());
    for (const auto& t : texts) costs.push_back(cd::parse_rat(t));
    return costs;
}

std::vector<std::string> format_costs(const std::vector<cd::Rat>& costs) {
    std::vector<std::string> out;
    out.reserve(costs.size());
    for (const auto& c : costs) out.push_back(cd::format_rat(c));
    return out;
}

// Adapts a Python callable (index: int, costs: list[str]) -> int into a
// black-box policy. Non-integer or out-of-range replies end the duel with a
// protocol-failure verdict, exactly like a misbehaving external process.
class CallablePolicy final : public cd::Policy {
public:
    explicit CallablePolicy(py::function fn) : fn_(std::move(fn)) {}

    const std::string& name() const override {
        static const std::string n = "python-callable";
        return n;
    }

    cd::AgentId decide(std::int64_t index, const cd::ChoreCosts& chore,
                       const cd::Transcript&) override {
        py::object reply = fn_(index, format_costs(chore.costs));
        int agent = 0;
        try {
            agent = reply.cast<int>();
        } catch (const py::cast_error&) {
            throw cd::ProtocolError("policy callable returned a non-integer");
        }
        return cd::AgentId{agent};
    }

private:
    py::function fn_;
};

std::string outcome_type(const cd::Outcome& outcome) {
    struct Visitor {
        std::string operator()(const cd::Violation&) const { return "violation"; }
        std::string operator()(const cd::BudgetExhausted&) const { return "budget-exhausted"; }
        std::string operator()(const cd::ProtocolFailure&) const { return "protocol-failure"; }
        std::string operator()(const cd::Anomaly&) const { return "anomaly"; }
    };
    return std::visit(Visitor{}, outcome);
}

cd::Transcript run_duel_py(int n, const std::string& epsilon, py::object policy,
                           const std::string& kappa, std::int64_t budget, bool eager) {
    cd::AdversaryParams params;
    params.n = n;
    params.epsilon = cd::parse_rat(epsilon);
    params.kappa = cd::parse_rat(kappa);
    params.budget = budget;
    params.eager_check = eager;

    std::unique_ptr<cd::Policy> p;
    if (py::isinstance<py::str>(policy)) {
        p = cd::make_builtin_policy(policy.cast<std::string>());
    } else if (py::isinstance<py::function>(policy) || PyCallable_Check(policy.ptr())) {
        p = std::make_unique<CallablePolicy>(py::reinterpret_borrow<py::function>(policy));
    } else {
        throw py::type_error("policy must be a built-in name or a callable");
    }

    cd::Adversary adversary(params, p->name());
    cd::run_duel(adversary, *p);
    return adversary.transcript();
}

std::pair<std::string, std::string> verify_py(const cd::Transcript& t) {
    if (!t.outcome || !std::holds_alternative<cd::Violation>(*t.outcome)) {
        return {"no-violation", "transcript has no violation verdict"};
    }
    cd::VerifyReport report = cd::verify_violation(t);
    switch (report.status) {
        case cd::VerifyStatus::valid:
            return {"valid", report.detail};
        case cd::VerifyStatus::invalid:
            return {"invalid", report.detail};
        case cd::VerifyStatus::structural_error:
        default:
            return {"structural-error", report.detail};
    }
}

}  // namespace

PYBIND11_MODULE(choreduel, m) {
    m.doc() = "Adversarial testbed for online chore assignment: an adaptive cost-vector "
              "generator that defeats deterministic online algorithms and emits "
              "independently checkable maximin-share violation certificates.";

    py::register_exception<cd::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<cd::ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);
    py::register_exception<cd::ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);

    py::class_<cd::Transcript>(m, "Transcript")
        .def_property_readonly("n", [](const cd::Transcript& t) { return t.n; })
        .def_property_readonly("epsilon",
                               [](const cd::Transcript& t) { return cd::format_rat(t.epsilon); })
        .def_property_readonly("kappa",
                               [](const cd::Transcript& t) { return cd::format_rat(t.kappa); })
        .def_property_readonly("algo", [](const cd::Transcript& t) { return t.algo_name; })
        .def_property_readonly("num_chores",
                               [](const cd::Transcript& t) { return t.events.size(); })
        .def_property_readonly(
            "events",
            [](const cd::Transcript& t) {
                py::list events;
                for (const auto& e : t.events) {
                    events.append(py::make_tuple(format_costs(e.chore.costs), e.assignee.value));
                }
                return events;
            },
            "list of (costs: list[str], assignee: int), in arrival order")
        .def_property_readonly("outcome_type",
                               [](const cd::Transcript& t) -> py::object {
                                   if (!t.outcome) return py::none();
                                   return py::str(outcome_type(*t.outcome));
                               })
        .def_property_readonly(
            "violation_agent",
            [](const cd::Transcript& t) -> py::object {
                if (t.outcome) {
                    if (const auto* v = std::get_if<cd::Violation>(&*t.outcome)) {
                        return py::int_(v->agent.value);
                    }
                }
                return py::none();
            })
        .def_property_readonly(
            "certified_ratio",
            [](const cd::Transcript& t) -> py::object {
                if (t.outcome) {
                    if (const auto* v = std::get_if<cd::Violation>(&*t.outcome)) {
                        return py::str(cd::format_rat(v->ratio));
                    }
                    if (const auto* b = std::get_if<cd::BudgetExhausted>(&*t.outcome)) {
                        if (b->best_certified_ratio) {
                            return py::str(cd::format_rat(*b->best_certified_ratio));
                        }
                    }
                }
                return py::none();
            },
            "exact ratio as 'p/q' for a violation (best seen for budget-exhausted), else None")
        .def("to_jsonl", [](const cd::Transcript& t) { return cd::transcript_to_jsonl(t); })
        .def_static("from_jsonl",
                    [](const std::string& text) { return cd::transcript_from_jsonl(text); })
        .def("__repr__", [](const cd::Transcript& t) {
            std::string verdict = t.outcome ? outcome_type(*t.outcome) : "open";
            return "<Transcript algo='" + t.algo_name + "' n=" + std::to_string(t.n) +
                   " chores=" + std::to_string(t.events.size()) + " verdict=" + verdict + ">";
        });

    m.def("parse_rat",
          [](const std::string& text) { return cd::format_rat(cd::parse_rat(text)); },
          py::arg("text"), "parse a rational literal, returning its canonical 'p/q' form");

    m.def("mms_exact",
          [](const std::vector<std::string>& costs, int k) {
              cd::MmsResult r = cd::mms_exact(parse_costs(costs), k);
              return py::make_tuple(cd::format_rat(r.value), r.partition.bundles);
          },
          py::arg("costs"), py::arg("k"),
          "exact min-max k-partition value with a witnessing partition (1-based indices)");

    m.def("mms_bruteforce",
          [](const std::vector<std::string>& costs, int k) {
              return cd::format_rat(cd::mms_bruteforce(parse_costs(costs), k));
          },
          py::arg("costs"), py::arg("k"), "reference oracle: enumerate all k^m assignments");

    m.def("lpt_partition",
          [](const std::vector<std::string>& costs, int k) {
              return cd::lpt_partition(parse_costs(costs), k).bundles;
          },
          py::arg("costs"), py::arg("k"), "longest-processing-time greedy partition");

    m.def("ell_bound",
          [](int k, int n, const std::string& eps_prime) {
              return cd::ell_bound(k, n, cd::parse_rat(eps_prime));
          },
          py::arg("k"), py::arg("n"), py::arg("eps_prime"),
          "chore bound of the k-agent scenario: ell_1 = n, "
          "ell_k = ell_{k-1} * n * ceil((1+1/eps')^ell_{k-1})");

    m.def("schedule_cost",
          [](const std::string& w, const std::string& eps_prime, std::int64_t length,
             std::int64_t i) {
              return cd::format_rat(
                  cd::schedule_cost(cd::parse_rat(w), cd::parse_rat(eps_prime), length, i));
          },
          py::arg("w"), py::arg("eps_prime"), py::arg("length"), py::arg("i"),
          "position i of the exponential pattern schedule: w / (1+1/eps')^(L-i+1)");

    m.def("builtin_policies", [] { return cd::builtin_policy_names(); });

    m.def("run_duel", &run_duel_py, py::arg("n"), py::arg("epsilon"), py::arg("policy"),
          py::arg("kappa") = "1", py::arg("budget") = 10'000, py::arg("eager") = false,
          "play one duel; policy is a built-in name or a callable "
          "(index: int, costs: list[str]) -> int");

    m.def("verify_transcript", &verify_py, py::arg("transcript"),
          "recompute a violation certificate; returns (status, detail)");

    m.def("verify_jsonl",
          [](const std::string& text) { return verify_py(cd::transcript_from_jsonl(text)); },
          py::arg("text"), "parse then verify; ParseError on malformed input");

    m.def("save_transcript",
          [](const std::string& path, const cd::Transcript& t) { cd::save_transcript(path, t); },
          py::arg("path"), py::arg("transcript"));

    m.def("load_transcript",
          [](const std::string& path) { return cd::load_transcript(path); },
          py::arg("path"));
}
