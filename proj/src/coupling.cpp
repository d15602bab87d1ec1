#include "cbd/coupling.hpp"

#include <cstddef>
#include <utility>

#include "cbd/errors.hpp"

namespace cbd {

namespace {

struct Layout {
    std::size_t total = 0;
    std::vector<std::size_t> offset;  // first bit of each context
    std::vector<ConnectionPair> pairs;
};

// Sign of one site inside an assignment index: bit 0 is the most
// significant, so indices enumerate assignments lexicographically with
// +1 before -1 at every site.
int bit_at(std::uint64_t index, std::size_t total, std::size_t bit) {
    return static_cast<int>((index >> (total - 1 - bit)) & 1u);
}

Layout layout_of(const System& system, bool with_maxima) {
    Layout layout;
    layout.offset.reserve(system.contexts.size());
    for (const auto& context : system.contexts) {
        layout.offset.push_back(layout.total);
        layout.total += context.measured.size();
    }
    if (layout.total > kMaxTotalMeasurements) {
        throw SizeGuardError("system has " + std::to_string(layout.total) +
                             " measurements; the coupling LP is capped at " +
                             std::to_string(kMaxTotalMeasurements));
    }

    for (const auto& content : system.contents) {
        std::vector<Site> sites;
        for (std::size_t ci = 0; ci < system.contexts.size(); ++ci) {
            const auto& measured = system.contexts[ci].measured;
            for (std::size_t pos = 0; pos < measured.size(); ++pos) {
                if (measured[pos] == content.label)
                    sites.push_back({ci, pos, layout.offset[ci] + pos});
            }
        }
        for (std::size_t i = 0; i < sites.size(); ++i) {
            for (std::size_t j = i + 1; j < sites.size(); ++j) {
                ConnectionPair pair{content.label, sites[i], sites[j], Rational(1)};
                if (with_maxima) {
                    Rational p = success_probability(system, content.label,
                                                     system.contexts[sites[i].context].label);
                    Rational q = success_probability(system, content.label,
                                                     system.contexts[sites[j].context].label);
                    pair.max_equality = connection_max_equality(p, q);
                }
                layout.pairs.push_back(std::move(pair));
            }
        }
    }
    return layout;
}

void require_valid(const System& system) {
    ValidationReport report = validate(system);
    if (!report.ok())
        throw Error("system does not validate: " + report.violations.front().message);
}

bool pair_agrees(const ConnectionPair& pair, std::uint64_t index, std::size_t total) {
    return bit_at(index, total, pair.a.bit) == bit_at(index, total, pair.b.bit);
}

std::string pair_label(const System& system, const ConnectionPair& pair) {
    return pair.content + ":" + system.contexts[pair.a.context].label + "=" +
           system.contexts[pair.b.context].label;
}

CouplingLP build(const System& system, bool pin_pairs) {
    require_valid(system);
    Layout layout = layout_of(system, /*with_maxima=*/!pin_pairs);

    CouplingLP lp;
    lp.total_measurements = layout.total;
    lp.context_offset = layout.offset;
    lp.pairs = std::move(layout.pairs);

    const std::uint64_t num_vars = std::uint64_t{1} << layout.total;
    lp.problem.num_vars = num_vars;
    lp.problem.objective.assign(num_vars, Rational(0));

    for (std::size_t ci = 0; ci < system.contexts.size(); ++ci) {
        const auto& context = system.contexts[ci];
        const std::size_t arity = context.measured.size();
        const std::size_t shift = layout.total - lp.context_offset[ci] - arity;
        const std::uint64_t mask = (std::uint64_t{1} << arity) - 1;
        const ContextPMF& pmf = system.pmfs.at(context.label);

        const std::size_t base = lp.problem.rows.size();
        for (std::uint64_t t = 0; t < (std::uint64_t{1} << arity); ++t) {
            OutcomeTuple outcome = OutcomeTuple::from_index(t, arity);
            lp.problem.rows.emplace_back(num_vars, Rational(0));
            lp.problem.rhs.push_back(pmf.probability(outcome));
            lp.row_label.push_back(context.label + ":" + outcome.str());
        }
        for (std::uint64_t g = 0; g < num_vars; ++g) {
            lp.problem.rows[base + ((g >> shift) & mask)][g] = 1;
        }
    }

    for (const auto& pair : lp.pairs) {
        if (pin_pairs) {
            lp.problem.rows.emplace_back(num_vars, Rational(0));
            auto& row = lp.problem.rows.back();
            for (std::uint64_t g = 0; g < num_vars; ++g) {
                if (pair_agrees(pair, g, layout.total)) row[g] = 1;
            }
            lp.problem.rhs.push_back(Rational(1));
            lp.row_label.push_back(pair_label(system, pair));
        } else {
            for (std::uint64_t g = 0; g < num_vars; ++g) {
                if (pair_agrees(pair, g, layout.total)) lp.problem.objective[g] += 1;
            }
        }
    }
    return lp;
}

Coupling coupling_from_primal(std::size_t total, const std::vector<Rational>& primal) {
    Coupling coupling;
    coupling.total_measurements = total;
    for (std::uint64_t g = 0; g < primal.size(); ++g) {
        if (primal[g] != 0) coupling.atoms.emplace(g, primal[g]);
    }
    return coupling;
}

Coupling empty_point_mass() {
    Coupling coupling;
    coupling.total_measurements = 0;
    coupling.atoms.emplace(0, Rational(1));
    return coupling;
}

}  // namespace

CouplingLP build_lp(const System& system) { return build(system, /*pin_pairs=*/false); }

CouplingLP build_perfect_lp(const System& system) { return build(system, /*pin_pairs=*/true); }

AnalysisResult decide_contextuality(const System& system) {
    AnalysisResult result;
    if (system.contexts.empty()) {
        require_valid(system);
        result.contextual = false;
        result.delta = 0;
        result.max_total = 0;
        result.attained_total = 0;
        result.witness = empty_point_mass();
        return result;
    }

    CouplingLP lp = build_lp(system);
    lp::Solution solution = lp::solve(lp.problem);
    if (solution.status != lp::Status::Optimal)
        throw Error("internal: coupling polytope of a validated system must be nonempty");

    result.max_total = 0;
    for (const auto& pair : lp.pairs) result.max_total += pair.max_equality;
    result.attained_total = solution.optimum;
    result.delta = result.max_total - result.attained_total;
    if (result.delta < 0)
        throw Error("internal: attained agreement exceeds the pairwise maximum");
    result.contextual = result.delta > 0;
    if (!result.contextual)
        result.witness = coupling_from_primal(lp.total_measurements, solution.primal);
    return result;
}

PerfectCouplingResult check_perfect_coupling(const System& system) {
    PerfectCouplingResult result;
    if (system.contexts.empty()) {
        require_valid(system);
        result.feasible = true;
        result.witness = empty_point_mass();
        return result;
    }

    CouplingLP lp = build_perfect_lp(system);
    lp::Solution solution = lp::solve(lp.problem);
    switch (solution.status) {
        case lp::Status::Optimal:
            result.feasible = true;
            result.witness = coupling_from_primal(lp.total_measurements, solution.primal);
            break;
        case lp::Status::Infeasible: {
            FarkasCertificate certificate{lp.row_label, solution.farkas};
            if (!verify_certificate(lp, certificate))
                throw Error("internal: infeasibility certificate failed verification");
            result.feasible = false;
            result.certificate = std::move(certificate);
            break;
        }
        case lp::Status::Unbounded:
            throw Error("internal: feasibility LP reported unbounded");
    }
    return result;
}

bool verify_certificate(const CouplingLP& lp, const FarkasCertificate& certificate) {
    return certificate.row_label == lp.row_label &&
           lp::verify_farkas(lp.problem, certificate.coefficient);
}

ReducedCoupling reduce_coupling(const System& system, const Coupling& witness) {
    require_valid(system);
    Layout layout = layout_of(system, /*with_maxima=*/false);
    if (witness.total_measurements != layout.total)
        throw ReductionError("coupling covers " + std::to_string(witness.total_measurements) +
                             " measurements, system has " + std::to_string(layout.total));

    Rational mass = 0;
    for (const auto& [index, probability] : witness.atoms) {
        if (probability < 0) throw ReductionError("coupling has a negative atom");
        if (layout.total < 64 && index >= (std::uint64_t{1} << layout.total))
            throw ReductionError("coupling atom index out of range");
        mass += probability;
    }
    if (mass != 1) throw ReductionError("coupling mass is " + to_string(mass) + ", expected 1");

    for (std::size_t ci = 0; ci < system.contexts.size(); ++ci) {
        const auto& context = system.contexts[ci];
        std::vector<std::size_t> bits(context.measured.size());
        for (std::size_t pos = 0; pos < bits.size(); ++pos) bits[pos] = layout.offset[ci] + pos;
        ContextPMF projected;
        for (const auto& [index, probability] : witness.atoms) {
            if (probability == 0) continue;
            std::vector<Sign> values(bits.size());
            for (std::size_t k = 0; k < bits.size(); ++k)
                values[k] = bit_at(index, layout.total, bits[k]) ? Sign{-1} : Sign{+1};
            projected.entries[OutcomeTuple(std::move(values))] += probability;
        }
        if (!(projected == system.pmfs.at(context.label)))
            throw ReductionError("coupling does not reproduce context '" + context.label + "'");
    }

    for (const auto& pair : layout.pairs) {
        Rational agreement = 0;
        for (const auto& [index, probability] : witness.atoms) {
            if (pair_agrees(pair, index, layout.total)) agreement += probability;
        }
        if (agreement != 1)
            throw ReductionError("connection pair " + pair_label(system, pair) +
                                 " agrees with probability " + to_string(agreement) +
                                 ", not 1; reduction is undefined");
    }

    ReducedCoupling reduced;
    std::vector<std::size_t> representative;  // first site bit per measured content
    for (const auto& content : system.contents) {
        bool found = false;
        for (std::size_t ci = 0; ci < system.contexts.size() && !found; ++ci) {
            const auto& measured = system.contexts[ci].measured;
            for (std::size_t pos = 0; pos < measured.size(); ++pos) {
                if (measured[pos] == content.label) {
                    representative.push_back(layout.offset[ci] + pos);
                    found = true;
                    break;
                }
            }
        }
        if (found) reduced.contents.push_back(content.label);
    }

    for (const auto& [index, probability] : witness.atoms) {
        if (probability == 0) continue;
        std::vector<Sign> values(representative.size());
        for (std::size_t k = 0; k < representative.size(); ++k)
            values[k] = bit_at(index, layout.total, representative[k]) ? Sign{-1} : Sign{+1};
        reduced.pmf[OutcomeTuple(std::move(values))] += probability;
    }
    return reduced;
}

ContextPMF coupling_marginal(const Coupling& coupling, const std::vector<std::size_t>& bits) {
    ContextPMF pmf;
    for (const auto& [index, probability] : coupling.atoms) {
        if (probability == 0) continue;
        std::vector<Sign> values(bits.size());
        for (std::size_t k = 0; k < bits.size(); ++k) {
            if (bits[k] >= coupling.total_measurements)
                throw Error("marginal bit position out of range");
            values[k] = bit_at(index, coupling.total_measurements, bits[k]) ? Sign{-1} : Sign{+1};
        }
        pmf.entries[OutcomeTuple(std::move(values))] += probability;
    }
    return pmf;
}

std::string assignment_string(const System& system, std::uint64_t index) {
    std::size_t total = 0;
    for (const auto& context : system.contexts) total += context.measured.size();
    std::string text;
    std::size_t bit = 0;
    for (std::size_t ci = 0; ci < system.contexts.size(); ++ci) {
        if (ci > 0) text += '|';
        for (std::size_t pos = 0; pos < system.contexts[ci].measured.size(); ++pos, ++bit)
            text += bit_at(index, total, bit) ? '-' : '+';
    }
    return text;
}

}  // namespace cbd
