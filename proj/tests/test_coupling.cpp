#include <algorithm>

#include "doctest.h"

#include "cbd/coupling.hpp"
#include "cbd/cyclic.hpp"
#include "cbd/errors.hpp"
#include "cbd/lp.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cbd;
using testing::Rng;
using testing::make_specker;

namespace {

// Bit positions of one context's sites inside the global assignment order.
std::vector<std::size_t> context_bits(const CouplingLP& lp, const System& system,
                                      std::size_t ci) {
    std::vector<std::size_t> bits(system.contexts[ci].measured.size());
    for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = lp.context_offset[ci] + k;
    return bits;
}

void check_is_coupling(const System& system, const Coupling& coupling) {
    CouplingLP lp = build_lp(system);
    Rational mass = 0;
    for (const auto& [index, probability] : coupling.atoms) {
        CHECK(probability >= 0);
        mass += probability;
    }
    CHECK(mass == 1);
    for (std::size_t ci = 0; ci < system.contexts.size(); ++ci) {
        ContextPMF projected = coupling_marginal(coupling, context_bits(lp, system, ci));
        CHECK(projected == system.pmfs.at(system.contexts[ci].label));
    }
}

}  // namespace

TEST_CASE("coupling LP dimensions") {
    System specker = make_specker();
    CouplingLP lp = build_lp(specker);
    CHECK(lp.total_measurements == 6);
    CHECK(lp.problem.num_vars == 64);
    CHECK(lp.problem.rows.size() == 12);  // 3 contexts x 4 outcomes
    CHECK(lp.pairs.size() == 3);
    CHECK(lp.row_label[0] == "c1:++");
    CHECK(lp.row_label[11] == "c3:--");

    // single context, no connections
    System single;
    single.contents = {{"a"}, {"b"}};
    single.contexts = {{"c", {"a", "b"}}};
    single.pmfs["c"] = testing::correlated_pair_pmf(Rational(0));
    CouplingLP small = build_lp(single);
    CHECK(small.problem.num_vars == 4);
    CHECK(small.problem.rows.size() == 4);
    CHECK(small.pairs.empty());
    for (const auto& c : small.problem.objective) CHECK(c == 0);

    Rng rng(3001);
    CouplingLP rank4 = build_lp(testing::random_cyclic_system(rng, 4));
    CHECK(rank4.problem.num_vars == 256);
}

TEST_CASE("size guard refuses 21 measurements") {
    System big;
    big.contents = {{"q"}};
    for (int k = 0; k < 21; ++k) {
        std::string label = "c" + std::to_string(k);
        big.contexts.push_back({label, {"q"}});
        ContextPMF pmf;
        pmf.entries[OutcomeTuple::from_string("+")] = 1;
        big.pmfs[label] = pmf;
    }
    CHECK_THROWS_AS(build_lp(big), SizeGuardError);
    CHECK_THROWS_AS(decide_contextuality(big), SizeGuardError);
}

TEST_CASE("build_lp rejects invalid systems") {
    System broken = make_specker();
    broken.pmfs["c1"].entries[OutcomeTuple::from_string("++")] = Rational(1, 4);
    CHECK_THROWS_AS(build_lp(broken), Error);
}

TEST_CASE("the running example maximizes agreement at 2 of 3") {
    System specker = make_specker();
    CouplingLP lp = build_lp(specker);
    lp::Solution solution = lp::solve(lp.problem);
    REQUIRE(solution.status == lp::Status::Optimal);
    CHECK(solution.optimum == 2);
    CHECK(lp::verify_optimal(lp.problem, solution));

    // independent vertex-enumeration oracle agrees
    std::optional<Rational> oracle = testing::vertex_coupling_max(lp.problem);
    REQUIRE(oracle.has_value());
    CHECK(*oracle == 2);

    AnalysisResult analysis = decide_contextuality(specker);
    CHECK(analysis.contextual);
    CHECK(analysis.max_total == 3);
    CHECK(analysis.attained_total == 2);
    CHECK(analysis.delta == 1);
    CHECK(!analysis.witness.has_value());
}

TEST_CASE("independent uniform rank-3 system is noncontextual") {
    System system;
    system.contents = {{"a"}, {"b"}, {"c"}};
    system.contexts = {{"c1", {"a", "b"}}, {"c2", {"b", "c"}}, {"c3", {"a", "c"}}};
    for (const auto& context : system.contexts)
        system.pmfs[context.label] = testing::correlated_pair_pmf(Rational(0));

    AnalysisResult analysis = decide_contextuality(system);
    CHECK(!analysis.contextual);
    CHECK(analysis.delta == 0);
    CHECK(analysis.max_total == 3);
    CHECK(analysis.attained_total == 3);
    REQUIRE(analysis.witness.has_value());
    check_is_coupling(system, *analysis.witness);

    // witness agreement really attains every pairwise maximum
    CouplingLP lp = build_lp(system);
    for (const auto& pair : lp.pairs) {
        Rational agreement = 0;
        for (const auto& [index, probability] : analysis.witness->atoms) {
            int a = static_cast<int>((index >> (lp.total_measurements - 1 - pair.a.bit)) & 1);
            int b = static_cast<int>((index >> (lp.total_measurements - 1 - pair.b.bit)) & 1);
            if (a == b) agreement += probability;
        }
        CHECK(agreement == pair.max_equality);
    }
}

TEST_CASE("a single-context system is its own witness") {
    System single;
    single.contents = {{"a"}, {"b"}};
    single.contexts = {{"c", {"a", "b"}}};
    ContextPMF pmf;
    pmf.entries[OutcomeTuple::from_string("++")] = Rational(2, 3);
    pmf.entries[OutcomeTuple::from_string("-+")] = Rational(1, 3);
    single.pmfs["c"] = pmf;

    AnalysisResult analysis = decide_contextuality(single);
    CHECK(!analysis.contextual);
    CHECK(analysis.delta == 0);
    CHECK(analysis.max_total == 0);
    REQUIRE(analysis.witness.has_value());
    REQUIRE(analysis.witness->atoms.size() == 2);
    CHECK(analysis.witness->atoms.at(0) == Rational(2, 3));   // ++
    CHECK(analysis.witness->atoms.at(0b10) == Rational(1, 3));  // -+
}

TEST_CASE("zero-context system couples trivially") {
    System empty;
    empty.contents = {{"q"}};
    AnalysisResult analysis = decide_contextuality(empty);
    CHECK(!analysis.contextual);
    CHECK(analysis.max_total == 0);
    REQUIRE(analysis.witness.has_value());
    CHECK(analysis.witness->atoms.at(0) == 1);
    CHECK(check_perfect_coupling(empty).feasible);
}

TEST_CASE("verdict and delta are invariant under relabeling and column order") {
    System specker = make_specker();
    AnalysisResult base = decide_contextuality(specker);

    // rename everything
    System renamed = specker;
    renamed.contents = {{"alpha"}, {"beta"}, {"gamma"}};
    renamed.contexts = {{"Z", {"beta", "alpha"}}, {"Y", {"beta", "gamma"}},
                        {"X", {"alpha", "gamma"}}};
    renamed.pmfs.clear();
    ContextPMF equal = testing::correlated_pair_pmf(Rational(1));
    ContextPMF unequal = testing::correlated_pair_pmf(Rational(-1));
    renamed.pmfs["Z"] = equal;    // swapped column order keeps a symmetric PMF
    renamed.pmfs["Y"] = equal;
    renamed.pmfs["X"] = unequal;
    AnalysisResult moved = decide_contextuality(renamed);
    CHECK(moved.contextual == base.contextual);
    CHECK(moved.delta == base.delta);
    CHECK(moved.max_total == base.max_total);

    // permute a context's measured order in a nonsymmetric system
    System tilted;
    tilted.contents = {{"a"}, {"b"}};
    tilted.contexts = {{"u", {"a", "b"}}, {"v", {"a"}}};
    ContextPMF pmf;
    pmf.entries[OutcomeTuple::from_string("++")] = Rational(3, 5);
    pmf.entries[OutcomeTuple::from_string("-+")] = Rational(1, 5);
    pmf.entries[OutcomeTuple::from_string("--")] = Rational(1, 5);
    tilted.pmfs["u"] = pmf;
    ContextPMF solo;
    solo.entries[OutcomeTuple::from_string("+")] = Rational(1, 2);
    solo.entries[OutcomeTuple::from_string("-")] = Rational(1, 2);
    tilted.pmfs["v"] = solo;

    System flipped = tilted;
    flipped.contexts[0].measured = {"b", "a"};
    ContextPMF swapped;
    for (const auto& [outcome, probability] : pmf.entries) {
        OutcomeTuple reversed({outcome.values[1], outcome.values[0]});
        swapped.entries[reversed] = probability;
    }
    flipped.pmfs["u"] = swapped;

    AnalysisResult left = decide_contextuality(tilted);
    AnalysisResult right = decide_contextuality(flipped);
    CHECK(left.contextual == right.contextual);
    CHECK(left.delta == right.delta);
}

TEST_CASE("perfect coupling: reductio on the running example") {
    System specker = make_specker();
    PerfectCouplingResult result = check_perfect_coupling(specker);
    CHECK(!result.feasible);
    CHECK(!result.witness.has_value());
    REQUIRE(result.certificate.has_value());
    CHECK(verify_certificate(build_perfect_lp(specker), *result.certificate));

    // tampered certificate fails re-verification
    FarkasCertificate tampered = *result.certificate;
    tampered.coefficient[0] += 1;
    bool still_valid = verify_certificate(build_perfect_lp(specker), tampered);
    CHECK(!still_valid);
}

TEST_CASE("perfect coupling exists for the independent system") {
    System system;
    system.contents = {{"a"}, {"b"}, {"c"}};
    system.contexts = {{"c1", {"a", "b"}}, {"c2", {"b", "c"}}, {"c3", {"a", "c"}}};
    for (const auto& context : system.contexts)
        system.pmfs[context.label] = testing::correlated_pair_pmf(Rational(0));
    PerfectCouplingResult result = check_perfect_coupling(system);
    CHECK(result.feasible);
    REQUIRE(result.witness.has_value());
    check_is_coupling(system, *result.witness);

    AnalysisResult analysis = decide_contextuality(system);
    CHECK(!analysis.contextual);  // feasible perfect coupling forces this
    ReducedCoupling reduced = reduce_coupling(system, *result.witness);
    CHECK(reduced.contents == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("deterministic marginals 1 and 0 admit no perfect coupling") {
    System clash = testing::two_context_pair_system(Rational(1), Rational(0));
    PerfectCouplingResult result = check_perfect_coupling(clash);
    CHECK(!result.feasible);
    REQUIRE(result.certificate.has_value());
    CHECK(verify_certificate(build_perfect_lp(clash), *result.certificate));
}

TEST_CASE("attained total equals the pair bound for a lone skewed connection") {
    Rng rng(3002);
    for (int trial = 0; trial < 40; ++trial) {
        Rational p = rng.unit_rational(9);
        Rational q = rng.unit_rational(9);
        System system = testing::two_context_pair_system(p, q);
        AnalysisResult analysis = decide_contextuality(system);
        Rational bound = connection_max_equality(p, q);
        CHECK(analysis.max_total == bound);
        CHECK(analysis.attained_total == bound);  // one pair: always attainable
        CHECK(!analysis.contextual);
    }
}

TEST_CASE("reduction collapses an everywhere-agreeing coupling") {
    // glue each content's two sites, make the three glued signs independent
    System system;
    system.contents = {{"a"}, {"b"}, {"c"}};
    system.contexts = {{"c1", {"a", "b"}}, {"c2", {"b", "c"}}, {"c3", {"a", "c"}}};
    for (const auto& context : system.contexts)
        system.pmfs[context.label] = testing::correlated_pair_pmf(Rational(0));

    Coupling glued;
    glued.total_measurements = 6;
    for (std::uint64_t s = 0; s < 8; ++s) {
        // bits: a b | b c | a c
        std::uint64_t a = (s >> 2) & 1, b = (s >> 1) & 1, c = s & 1;
        std::uint64_t index = (a << 5) | (b << 4) | (b << 3) | (c << 2) | (a << 1) | c;
        glued.atoms[index] = Rational(1, 8);
    }
    ReducedCoupling reduced = reduce_coupling(system, glued);
    CHECK(reduced.contents == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(reduced.pmf.size() == 8);
    for (const auto& [outcome, probability] : reduced.pmf) CHECK(probability == Rational(1, 8));

    // point-mass system reduces to a point mass
    System point;
    point.contents = {{"a"}, {"b"}, {"c"}};
    point.contexts = system.contexts;
    ContextPMF sure;
    sure.entries[OutcomeTuple::from_string("++")] = 1;
    for (const auto& context : point.contexts) point.pmfs[context.label] = sure;
    AnalysisResult analysis = decide_contextuality(point);
    REQUIRE(analysis.witness.has_value());
    ReducedCoupling collapsed = reduce_coupling(point, *analysis.witness);
    REQUIRE(collapsed.pmf.size() == 1);
    CHECK(collapsed.pmf.begin()->first == OutcomeTuple::from_string("+++"));
    CHECK(collapsed.pmf.begin()->second == 1);
}

TEST_CASE("reduction rejects couplings that are not perfect") {
    System specker = make_specker();
    CouplingLP lp = build_lp(specker);
    lp::Solution solution = lp::solve(lp.problem);
    REQUIRE(solution.status == lp::Status::Optimal);
    Coupling best;
    best.total_measurements = lp.total_measurements;
    for (std::uint64_t g = 0; g < solution.primal.size(); ++g)
        if (solution.primal[g] != 0) best.atoms[g] = solution.primal[g];

    CHECK_THROWS_AS(reduce_coupling(specker, best), ReductionError);
    try {
        reduce_coupling(specker, best);
    } catch (const ReductionError& e) {
        CHECK(std::string(e.what()).find("agrees with probability") != std::string::npos);
    }

    // a coupling of the wrong width
    Coupling narrow;
    narrow.total_measurements = 2;
    narrow.atoms[0] = 1;
    CHECK_THROWS_AS(reduce_coupling(specker, narrow), ReductionError);

    // right width, wrong marginals
    Coupling wrong;
    wrong.total_measurements = 6;
    wrong.atoms[0] = 1;
    CHECK_THROWS_AS(reduce_coupling(specker, wrong), ReductionError);
}

TEST_CASE("random cyclic systems: invariants of the analysis") {
    Rng rng(3003);
    for (int trial = 0; trial < 60; ++trial) {
        System system = testing::random_cyclic_system(rng, 3);
        AnalysisResult analysis = decide_contextuality(system);
        CHECK(analysis.attained_total <= analysis.max_total);
        CHECK(analysis.delta >= 0);
        CHECK(analysis.contextual == (analysis.delta > 0));

        if (analysis.witness) {
            check_is_coupling(system, *analysis.witness);
        } else {
            PerfectCouplingResult perfect = check_perfect_coupling(system);
            CHECK(!perfect.feasible);  // consistently connected: the notions coincide
            REQUIRE(perfect.certificate.has_value());
            CHECK(verify_certificate(build_perfect_lp(system), *perfect.certificate));
        }
    }
}

TEST_CASE("random general systems: feasible points marginalize to the rows") {
    Rng rng(3004);
    for (int trial = 0; trial < 40; ++trial) {
        System system = testing::random_system(rng);
        AnalysisResult analysis = decide_contextuality(system);
        CHECK(analysis.attained_total <= analysis.max_total);
        CHECK(analysis.delta >= 0);
        if (analysis.witness) check_is_coupling(system, *analysis.witness);

        PerfectCouplingResult perfect = check_perfect_coupling(system);
        if (perfect.feasible) {
            check_is_coupling(system, *perfect.witness);
            CHECK(!analysis.contextual);
            ReducedCoupling reduced = reduce_coupling(system, *perfect.witness);
            Rational mass = 0;
            for (const auto& [outcome, probability] : reduced.pmf) mass += probability;
            CHECK(mass == 1);
        } else {
            REQUIRE(perfect.certificate.has_value());
            CHECK(verify_certificate(build_perfect_lp(system), *perfect.certificate));
        }
    }
}

TEST_CASE("assignment strings group by context") {
    System specker = make_specker();
    CHECK(assignment_string(specker, 0) == "++|++|++");
    CHECK(assignment_string(specker, 63) == "--|--|--");
    CHECK(assignment_string(specker, 0b100110) == "-+|+-|-+");
}
