#include <numbers>

#include "doctest.h"

#include "hdistlab/multipliers.hpp"
#include "hdistlab/sequences.hpp"

using namespace hdistlab;

TEST_SUITE("sequences") {

TEST_CASE("profiles and bumps") {
    const Grid g({64});
    ProfileSpec flat;
    flat.amplitude = 2.5;
    const Field c = flat.materialize(g);
    for (const cplx& v : c.values) CHECK(v == cplx(2.5));

    ProfileSpec bump;
    bump.center = {0.5};
    bump.radius = 0.2;
    const Field b = bump.materialize(g);
    CHECK(std::abs(b.values[32]) == doctest::Approx(1.0));  // normalized peak
    CHECK(std::abs(b.values[0]) == 0.0);                    // outside the support
    for (const cplx& v : b.values) CHECK(v.imag() == 0.0);
}

TEST_CASE("oscillation members, limits, and bounds") {
    const Grid g({64, 64});
    ProfileSpec prof;
    prof.center = {0.5, 0.5};
    prof.radius = 0.3;
    const SequenceFamily fam =
        oscillation_family(g, prof, {1, 0}, OscillationPhase::Cosine, 2.0);
    CHECK(fam.components == 1);

    const Field lim = fam.weak_limit(g).at(0);
    CHECK(lp_norm(lim, 2.0) == doctest::Approx(0.0));

    for (double r : {4.0, 8.0, 16.0}) {
        const auto mem = fam.generate(r);
        REQUIRE(mem.size() == 1);
        CHECK(lp_norm(mem[0], 2.0) <= fam.uniform_bound * (1.0 + 1e-12));
    }
}

TEST_CASE("oscillation rejects non-lattice and out-of-band modes") {
    const Grid g({16, 16});
    ProfileSpec prof;
    const SequenceFamily fam =
        oscillation_family(g, prof, {1, 1}, OscillationPhase::Cosine, 2.0);
    CHECK_THROWS_AS(fam.generate(2.5), std::domain_error);   // 2.5 * 1 off lattice
    CHECK_THROWS_AS(fam.generate(64.0), std::domain_error);  // past the band edge
    CHECK_NOTHROW(fam.generate(4.0));
}

TEST_CASE("concentration keeps its normalization along the schedule") {
    const Grid g({256});
    ProfileSpec prof;
    prof.center = {0.5};
    prof.radius = 0.25;
    const SequenceFamily fam = concentration_family(g, prof, {0.5}, 2.0);
    const double base = lp_norm(fam.generate(1.0)[0], 2.0);
    for (double r : {2.0, 4.0, 8.0}) {
        const double n = lp_norm(fam.generate(r)[0], 2.0);
        CHECK(n == doctest::Approx(base).epsilon(0.05));
    }
}

TEST_CASE("plateau family carries mass exactly two") {
    const SequenceFamily fam = counterexample_family(0.3);
    for (double r : {8.0, 16.0, 32.0}) {
        const Field u = fam.generate(r)[0];
        CHECK(pair(u, u).real() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(lp_norm(u, std::numeric_limits<double>::infinity()) ==
              doctest::Approx(r));
        // every truncation at l <= r wipes the plateau entirely
        CHECK(lp_norm(truncate(u, r), 2.0) == 0.0);
        CHECK(lp_norm(truncate(u, 2.0), 2.0) == 0.0);
    }
    CHECK(!fam.has_dominating());
    CHECK_THROWS_AS(fam.generate(4.0), std::domain_error);  // below r_min
    CHECK_THROWS_AS(counterexample_family(0.3, 8.0, Grid({16})).generate(8.0),
                    std::domain_error);  // fixed grid cannot resolve the plateau
    CHECK_THROWS_AS(counterexample_family(1.5), std::invalid_argument);
}

TEST_CASE("div-curl pair is constrained exactly and multiplies pointwise") {
    const Grid g({64, 64});
    ExperimentSetup setup = divcurl_pair(g, {1, 1}, {1, -1});
    REQUIRE(setup.constraint.has_value());
    CHECK(setup.u.components == 4);

    const auto mem = setup.u.generate(8.0);
    for (const Field& row : setup.constraint->residual(mem))
        CHECK(lp_norm(row, 2.0) < 1e-10);

    // q(W, W) recovers u . v sample by sample
    const Field q = setup.Q.evaluate(mem, mem);
    for (std::int64_t i = 0; i < g.total(); ++i) {
        const cplx want = mem[0].values[i] * mem[2].values[i] +
                          mem[1].values[i] * mem[3].values[i];
        CHECK(std::abs(q.values[i] - want) < 1e-13);
    }

    CHECK_THROWS_AS(divcurl_pair(g, {1, 1}, {1, 1}), std::invalid_argument);
}

TEST_CASE("parabolic pair solves its constraint to rounding") {
    ParabolicSpec spec;
    spec.seed_mode = {1, 1};
    spec.r_max = 8.0;
    ExperimentSetup setup = parabolic_pair(spec);
    REQUIRE(setup.constraint.has_value());
    CHECK(setup.constraint->orders.dim() == 2);
    CHECK(setup.constraint->orders[0] == doctest::Approx(1.0));
    CHECK(setup.constraint->orders[1] == doctest::Approx(2.0));

    for (double r : {2.0, 4.0, 8.0}) {
        const auto mem = setup.u.generate(r);
        for (const Field& row : setup.constraint->residual(mem))
            CHECK(lp_norm(row, 2.0) < 1e-10);
        CHECK(parabolic_dropped_energy(spec, r) < 1e-14);
    }
}

TEST_CASE("parabolic forcing leaves a residual that decays at the declared rate") {
    ParabolicSpec spec;
    spec.seed_mode = {1, 1};
    spec.r_max = 8.0;
    spec.forcing.gamma = 1.0;
    spec.forcing.amplitude = 0.5;
    spec.forcing.center = {0.5, 0.5};
    ExperimentSetup setup = parabolic_pair(spec);

    std::vector<double> norms;
    for (double r : {2.0, 4.0, 8.0}) {
        const auto mem = setup.u.generate(r);
        double n = 0.0;
        for (const Field& row : setup.constraint->residual(mem))
            n = std::max(n, lp_norm(row, 2.0));
        norms.push_back(n);
    }
    CHECK(norms[0] > 1e-6);
    CHECK(norms[1] < 0.7 * norms[0]);
    CHECK(norms[2] < 0.7 * norms[1]);
}

TEST_CASE("shifting a family moves members and limit together") {
    const Grid g({64});
    ProfileSpec prof;
    prof.center = {0.5};
    prof.radius = 0.3;
    const SequenceFamily fam = concentration_family(g, prof, {0.5}, 2.0);
    const SequenceFamily shifted = shift_family(fam, cplx(0.25, 0.0));

    const Field m0 = fam.generate(2.0)[0];
    const Field m1 = shifted.generate(2.0)[0];
    const Field l0 = fam.weak_limit(g).at(0);
    const Field l1 = shifted.weak_limit(g).at(0);
    for (std::int64_t i = 0; i < g.total(); ++i) {
        CHECK(std::abs(m1.values[i] - m0.values[i] - cplx(0.25)) < 1e-14);
        CHECK(std::abs(l1.values[i] - l0.values[i] - cplx(0.25)) < 1e-14);
    }
}

}  // TEST_SUITE
