#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "cbd/coupling.hpp"
#include "cbd/cyclic.hpp"
#include "cbd/dsl.hpp"
#include "cbd/errors.hpp"
#include "cbd/lambda.hpp"
#include "cbd/report.hpp"
#include "cbd/system.hpp"

namespace py = pybind11;

namespace {

// Exact values cross the boundary as fractions.Fraction (ints and "p/q"
// strings are accepted on the way in; Fraction always comes back out).
py::object to_fraction(const cbd::Rational& value) {
    return py::module_::import("fractions").attr("Fraction")(py::str(cbd::to_string(value)));
}

cbd::Rational to_rational(const py::handle& value) {
    std::string text = py::str(value);
    std::optional<cbd::Rational> parsed = cbd::parse_rational(text);
    if (!parsed)
        throw py::value_error("not an exact rational: '" + text +
                              "' (use Fraction, int, or 'p/q')");
    return *parsed;
}

py::object pmf_dict(const cbd::ContextPMF& pmf) {
    py::dict out;
    for (const auto& [outcome, probability] : pmf.entries) {
        if (probability == 0) continue;
        out[py::str(outcome.str())] = to_fraction(probability);
    }
    return out;
}

cbd::System build_system(const std::string& name, const std::vector<std::string>& contents,
                         const std::vector<std::pair<std::string, std::vector<std::string>>>&
                             contexts,
                         const py::dict& pmfs) {
    cbd::System system;
    system.name = name;
    for (const auto& label : contents) system.contents.push_back({label});
    for (const auto& [label, measured] : contexts) system.contexts.push_back({label, measured});
    for (const auto& [key, value] : pmfs) {
        cbd::ContextPMF pmf;
        for (const auto& [outcome, probability] : py::cast<py::dict>(value))
            pmf.entries[cbd::OutcomeTuple::from_string(py::cast<std::string>(py::str(outcome)))] =
                to_rational(probability);
        system.pmfs.emplace(py::cast<std::string>(py::str(key)), std::move(pmf));
    }
    cbd::ValidationReport report = cbd::validate(system);
    if (!report.ok()) throw cbd::Error(report.violations.front().message);
    return system;
}

std::uint64_t assignment_index(const cbd::System& system, const std::string& text) {
    std::uint64_t index = 0;
    std::size_t bits = 0;
    for (char c : text) {
        if (c == '|') continue;
        if (c != '+' && c != '-') throw cbd::Error("assignment must be over '+'/'-'/'|'");
        index = (index << 1) | (c == '-' ? 1u : 0u);
        ++bits;
    }
    std::size_t total = 0;
    for (const auto& context : system.contexts) total += context.measured.size();
    if (bits != total)
        throw cbd::Error("assignment has " + std::to_string(bits) + " signs, system has " +
                         std::to_string(total) + " measurements");
    return index;
}

cbd::Coupling coupling_from_dict(const cbd::System& system, const py::dict& atoms) {
    cbd::Coupling coupling;
    for (const auto& context : system.contexts)
        coupling.total_measurements += context.measured.size();
    for (const auto& [key, value] : atoms) {
        std::uint64_t index = assignment_index(system, py::cast<std::string>(py::str(key)));
        coupling.atoms[index] += to_rational(value);
    }
    return coupling;
}

py::object coupling_to_dict(const cbd::System& system, const cbd::Coupling& coupling) {
    py::dict out;
    for (const auto& [index, probability] : coupling.atoms) {
        if (probability == 0) continue;
        out[py::str(cbd::assignment_string(system, index))] = to_fraction(probability);
    }
    return out;
}

py::object decide_dict(const cbd::System& system) {
    cbd::AnalysisResult result = cbd::decide_contextuality(system);
    py::dict out;
    out["contextual"] = result.contextual;
    out["delta"] = to_fraction(result.delta);
    out["max_total"] = to_fraction(result.max_total);
    out["attained_total"] = to_fraction(result.attained_total);
    out["witness"] = result.witness ? coupling_to_dict(system, *result.witness) : py::none();
    return out;
}

py::object perfect_dict(const cbd::System& system) {
    cbd::PerfectCouplingResult result = cbd::check_perfect_coupling(system);
    py::dict out;
    out["feasible"] = result.feasible;
    out["witness"] = result.witness ? coupling_to_dict(system, *result.witness) : py::none();
    if (result.certificate) {
        py::list rows;
        for (std::size_t i = 0; i < result.certificate->coefficient.size(); ++i) {
            if (result.certificate->coefficient[i] == 0) continue;
            rows.append(py::make_tuple(result.certificate->row_label[i],
                                       to_fraction(result.certificate->coefficient[i])));
        }
        out["certificate"] = std::move(rows);
    } else {
        out["certificate"] = py::none();
    }
    return out;
}

py::object cyclic_dict(const cbd::System& system) {
    std::optional<cbd::CyclicProfile> profile = cbd::detect_cyclic(system);
    if (!profile) return py::none();
    py::dict out;
    out["rank"] = profile->rank;
    out["cycle"] = profile->cycle;
    py::list correlations;
    for (const auto& value : profile->correlations) correlations.append(to_fraction(value));
    out["correlations"] = std::move(correlations);
    bool consistent = cbd::is_consistently_connected(system).consistent;
    out["verdict"] = cbd::to_string(cbd::cyclic_criterion(*profile, consistent));
    out["s_odd"] = to_fraction(cbd::s_odd(profile->correlations));
    return out;
}

py::object lambda_dict(const cbd::LambdaModel& model) {
    py::dict out;
    out["contents"] = model.contents;
    py::list atoms;
    for (const auto& atom : model.atoms)
        atoms.append(py::make_tuple(atom.id, to_fraction(atom.probability)));
    out["atoms"] = std::move(atoms);
    py::dict responses;
    for (const auto& [content, table] : model.responses) {
        py::dict per_atom;
        for (const auto& [id, sign] : table) per_atom[py::str(id)] = static_cast<int>(sign);
        responses[py::str(content)] = std::move(per_atom);
    }
    out["responses"] = std::move(responses);
    return out;
}

cbd::LambdaModel lambda_from_dict(const py::dict& data) {
    cbd::LambdaModel model;
    model.contents = py::cast<std::vector<std::string>>(data["contents"]);
    for (const auto& item : py::cast<py::list>(data["atoms"])) {
        auto pair = py::cast<py::tuple>(item);
        model.atoms.push_back(
            {py::cast<std::string>(pair[0]), to_rational(pair[1])});
    }
    py::dict responses = py::cast<py::dict>(data["responses"]);
    for (const auto& [content, table] : responses) {
        auto& into = model.responses[py::cast<std::string>(py::str(content))];
        for (const auto& [id, sign] : py::cast<py::dict>(table))
            into[py::cast<std::string>(py::str(id))] =
                py::cast<int>(sign) > 0 ? cbd::Sign{+1} : cbd::Sign{-1};
    }
    return model;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact contextuality analysis for content-context systems of +/-1 variables";

    py::register_exception<cbd::Error>(m, "CbdError", PyExc_ValueError);

    py::class_<cbd::System>(m, "System")
        .def_property_readonly("name", [](const cbd::System& s) { return s.name; })
        .def_property_readonly("contents",
                               [](const cbd::System& s) {
                                   std::vector<std::string> labels;
                                   for (const auto& content : s.contents)
                                       labels.push_back(content.label);
                                   return labels;
                               })
        .def_property_readonly("contexts",
                               [](const cbd::System& s) {
                                   py::list out;
                                   for (const auto& context : s.contexts)
                                       out.append(py::make_tuple(context.label,
                                                                 context.measured));
                                   return out;
                               })
        .def("pmf",
             [](const cbd::System& s, const std::string& context) {
                 auto it = s.pmfs.find(context);
                 if (it == s.pmfs.end())
                     throw cbd::Error("unknown context '" + context + "'");
                 return pmf_dict(it->second);
             },
             py::arg("context"))
        .def("__eq__",
             [](const cbd::System& a, const cbd::System& b) { return a == b; })
        .def("__repr__", [](const cbd::System& s) {
            return "<System '" + s.name + "', " + std::to_string(s.contents.size()) +
                   " contents, " + std::to_string(s.contexts.size()) + " contexts>";
        });

    m.def("parse", [](const std::string& text) { return cbd::parse(text); }, py::arg("text"),
          "Parse a system document.");
    m.def("serialize", &cbd::serialize, py::arg("system"),
          "Canonical byte-stable document for a system.");
    m.def("build_system", &build_system, py::arg("name"), py::arg("contents"),
          py::arg("contexts"), py::arg("pmfs"),
          "Assemble and validate a system from plain python data.");
    m.def("validate",
          [](const cbd::System& system) {
              py::list out;
              for (const auto& violation : cbd::validate(system).violations)
                  out.append(violation.message);
              return out;
          },
          py::arg("system"), "Invariant violations as messages; empty means valid.");

    m.def("analyze",
          [](const cbd::System& system) {
              return py::module_::import("json").attr("loads")(
                  cbd::report_to_json(cbd::analyze_system(system)));
          },
          py::arg("system"),
          "Full report as a dict, identical in shape to the CLI --json output.");
    m.def("decide_contextuality", &decide_dict, py::arg("system"),
          "Contextuality verdict with exact Fractions and the witness coupling.");
    m.def("check_perfect_coupling", &perfect_dict, py::arg("system"),
          "Feasibility of an everywhere-agreeing coupling, witness or certificate.");
    m.def("reduce_coupling",
          [](const cbd::System& system, const py::dict& witness) {
              cbd::ReducedCoupling reduced =
                  cbd::reduce_coupling(system, coupling_from_dict(system, witness));
              py::dict pmf;
              for (const auto& [outcome, probability] : reduced.pmf) {
                  if (probability == 0) continue;
                  pmf[py::str(outcome.str())] = to_fraction(probability);
              }
              py::dict out;
              out["contents"] = reduced.contents;
              out["pmf"] = std::move(pmf);
              return out;
          },
          py::arg("system"), py::arg("witness"),
          "Collapse a perfect coupling to a single-indexed joint distribution.");

    m.def("detect_cyclic", &cyclic_dict, py::arg("system"),
          "Cyclic profile with criterion verdict, or None.");
    m.def("s_odd",
          [](const py::sequence& values) {
              std::vector<cbd::Rational> rationals;
              for (const auto& value : values) rationals.push_back(to_rational(value));
              return to_fraction(cbd::s_odd(rationals));
          },
          py::arg("values"),
          "Largest odd-minus-signs signed sum of the given rationals.");

    m.def("reconstruct_lambda",
          [](const cbd::System& system, const std::string& context) {
              return lambda_dict(cbd::reconstruct_lambda(system, context));
          },
          py::arg("system"), py::arg("context"),
          "Minimal hidden variable and response functions for one context.");
    m.def("verify_factorization",
          [](const py::dict& model, const py::dict& refined) -> py::object {
              auto h = cbd::verify_factorization(lambda_from_dict(model),
                                                 lambda_from_dict(refined));
              if (!h) return py::none();
              py::dict out;
              for (const auto& [from, to] : *h) out[py::str(from)] = to;
              return out;
          },
          py::arg("model"), py::arg("refined"),
          "Factorization map refined-atom -> model-atom, or None.");

    m.def("marginal",
          [](const cbd::System& system, const std::string& context,
             const std::vector<std::string>& subset) {
              return pmf_dict(cbd::marginal(system, context, subset));
          },
          py::arg("system"), py::arg("context"), py::arg("subset"));
    m.def("success_probability",
          [](const cbd::System& system, const std::string& content,
             const std::string& context) {
              return to_fraction(cbd::success_probability(system, content, context));
          },
          py::arg("system"), py::arg("content"), py::arg("context"));
    m.def("correlation",
          [](const cbd::System& system, const std::string& context, const std::string& a,
             const std::string& b) {
              return to_fraction(cbd::correlation(system, context, a, b));
          },
          py::arg("system"), py::arg("context"), py::arg("a"), py::arg("b"));
    m.def("connection_max_equality",
          [](const py::handle& p, const py::handle& q) {
              return to_fraction(cbd::connection_max_equality(to_rational(p), to_rational(q)));
          },
          py::arg("p"), py::arg("q"),
          "Largest Pr[X == Y] over couplings of binary marginals p, q: 1 - |p - q|.");
    m.def("is_consistently_connected",
          [](const cbd::System& system) {
              return cbd::is_consistently_connected(system).consistent;
          },
          py::arg("system"));

    m.def("ingest_trials",
          [](const std::string& csv_text, const std::string& format_text) {
              cbd::SystemFormat format = cbd::parse_format(format_text);
              return cbd::ingest_trials(format, cbd::parse_trials_csv(csv_text, format));
          },
          py::arg("csv_text"), py::arg("format_text"),
          "Build a system from a trial table and a format document.");
}
