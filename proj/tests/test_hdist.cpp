#include <numbers>

#include "doctest.h"

#include "hdistlab/hdist.hpp"
#include "hdistlab/registry.hpp"

using namespace hdistlab;

TEST_SUITE("hdist") {

TEST_CASE("extrapolation is exact on first-order ladders") {
    const std::vector<double> r = {8.0, 16.0, 32.0};
    std::vector<cplx> v;
    const cplx V(3.0, -1.0), c(5.0, 2.0);
    for (double ri : r) v.push_back(V + c / ri);
    const Ladder lad = richardson(r, v);
    CHECK(std::abs(lad.value - V) < 1e-12);
    CHECK(lad.converged);
    CHECK(lad.error < 1e-12);
}

TEST_CASE("diverging ladders are flagged") {
    const std::vector<double> r = {8.0, 16.0, 32.0, 64.0};
    const std::vector<cplx> v = {cplx(1.0), cplx(1.1), cplx(1.4), cplx(2.3)};
    const Ladder lad = richardson(r, v);
    CHECK(!lad.converged);
    CHECK(lad.error >= 0.9);  // at least the largest raw jump
}

TEST_CASE("level combination keeps the last level and adds the drift") {
    Ladder a;
    a.value = cplx(1.0);
    a.error = 0.01;
    a.converged = true;
    Ladder b = a;
    b.value = cplx(1.5);
    b.error = 0.02;
    const LevelCombined c = combine_levels({a, b});
    CHECK(c.value == cplx(1.5));
    CHECK(c.error == doctest::Approx(0.02 + 0.5));
}

TEST_CASE("cosine oscillation splits its mass over the two lobes") {
    const Grid g({128, 128});
    ProfileSpec prof;
    prof.center = {0.5, 0.5};
    prof.radius = 0.3;
    const SequenceFamily fam =
        oscillation_family(g, prof, {1, 0}, OscillationPhase::Cosine, 2.0);

    const TestFunction phi = gaussian_test({0.5, 0.5}, 0.1);
    EstimateOptions opts;
    opts.alpha = MultiOrder::isotropic(2);
    opts.schedule = {4, 8, 16, 32};
    opts.levels = {2.0};
    opts.jobs = 2;

    const Field aF = prof.materialize(g);
    const Field phiF = phi.materialize(g);
    const double mass = pair(multiply(aF, aF), phiF).real();

    const Symbol odd = symbol_from_label("riesz:0", 2);
    const Symbol window = symbol_from_label("direction-indicator:0:0.3", 2);
    const HDistEstimate est =
        estimate_hdistribution(fam, fam, {phi}, {odd, window}, opts);

    // psi = one is appended automatically; the two lobes contribute 1/4 each
    const HDistEntry* total = est.find(0, 0, phi.label, "one");
    REQUIRE(total != nullptr);
    CHECK(std::abs(total->combined.value - 0.5 * mass) < 0.02 * mass);

    // odd symbol: the lobes at +-k cancel
    const HDistEntry* cancelled = est.find(0, 0, phi.label, odd.label);
    REQUIRE(cancelled != nullptr);
    CHECK(std::abs(cancelled->combined.value) < 0.02 * mass);

    // window around the first axis sees both lobes of k = (1, 0)
    const HDistEntry* seen = est.find(0, 0, phi.label, window.label);
    REQUIRE(seen != nullptr);
    CHECK(std::abs(seen->combined.value - 0.5 * mass) < 0.02 * mass);
}

TEST_CASE("recentring by the declared weak limit removes constant shifts") {
    const Grid g({256});
    ProfileSpec prof;
    prof.center = {0.5};
    prof.radius = 0.3;
    const SequenceFamily fam = concentration_family(g, prof, {0.5}, 2.0);
    const SequenceFamily shifted = shift_family(fam, cplx(0.7, 0.0));

    const TestFunction phi = gaussian_test({0.5}, 0.1);
    EstimateOptions opts;
    opts.alpha = MultiOrder::isotropic(1);
    opts.schedule = {2, 4, 8};
    opts.levels = {4.0, 8.0};
    opts.jobs = 1;

    const HDistEstimate base =
        estimate_hdistribution(fam, fam, {phi}, {one_symbol()}, opts);
    const HDistEstimate moved =
        estimate_hdistribution(shifted, shifted, {phi}, {one_symbol()}, opts);
    REQUIRE(base.entries.size() == moved.entries.size());
    for (std::size_t i = 0; i < base.entries.size(); ++i)
        CHECK(std::abs(base.entries[i].combined.value -
                       moved.entries[i].combined.value) < 1e-11);
}

TEST_CASE("levels above the sup bound share the identity evaluation") {
    const Grid g({64, 64});
    ProfileSpec prof;
    prof.center = {0.5, 0.5};
    prof.radius = 0.3;
    const SequenceFamily fam =
        oscillation_family(g, prof, {1, 0}, OscillationPhase::Cosine, 2.0);
    EstimateOptions opts;
    opts.alpha = MultiOrder::isotropic(2);
    opts.schedule = {4, 8, 16};
    opts.levels = {0.5, 4.0, 1000.0};  // the last two are both past sup|member|
    opts.jobs = 1;
    const HDistEstimate est = estimate_hdistribution(
        fam, fam, {gaussian_test({0.5, 0.5}, 0.1)}, {one_symbol()}, opts);
    for (const HDistEntry& e : est.entries) {
        REQUIRE(e.per_level.size() == 3);
        CHECK(e.per_level[1].value == e.per_level[2].value);
        CHECK(std::abs(e.per_level[0].value - e.per_level[1].value) > 0.0);
    }
}

TEST_CASE("localization telescopes through the adjoint factors") {
    ParabolicSpec spec;
    spec.seed_mode = {1, 1};
    spec.r_max = 8.0;
    ExperimentSetup setup = parabolic_pair(spec);

    LocalizationOptions lopts;
    const LocalizationResult res = localization_residual(
        setup, gaussian_test({0.5, 0.5}, 0.1), one_symbol(), 0, {2.0, 4.0, 8.0}, lopts);
    CHECK(res.hypothesis_ok);
    CHECK(res.max_rel_gap < 1e-10);
    for (double n : res.residual_norms) CHECK(n < 1e-8);
}

TEST_CASE("localization flags an undecaying forcing") {
    ParabolicSpec spec;
    spec.seed_mode = {1, 1};
    spec.r_max = 8.0;
    spec.forcing.gamma = 0.0;
    spec.forcing.amplitude = 0.5;
    spec.forcing.center = {0.5, 0.5};
    ExperimentSetup setup = parabolic_pair(spec);

    LocalizationOptions enforce;
    CHECK_THROWS_AS(localization_residual(setup, gaussian_test({0.5, 0.5}, 0.1),
                                          one_symbol(), 0, {2.0, 4.0, 8.0}, enforce),
                    std::runtime_error);

    LocalizationOptions tolerate;
    tolerate.enforce_hypothesis = false;
    const LocalizationResult res = localization_residual(
        setup, gaussian_test({0.5, 0.5}, 0.1), one_symbol(), 0, {2.0, 4.0, 8.0},
        tolerate);
    CHECK(!res.hypothesis_ok);
}

TEST_CASE("wave cone of the div-curl system") {
    const Grid g({64, 64});
    ExperimentSetup setup = divcurl_pair(g, {1, 1}, {1, -1});
    const std::vector<double> x = {0.25, 0.25};
    for (const std::vector<double>& xi :
         {std::vector<double>{1.0, 0.0}, {0.3, -0.7}, {2.0, 5.0}}) {
        const WaveConeSample s = wavecone_membership(*setup.constraint, x, xi);
        CHECK(s.kernel_dim == 2);
        // each basis vector annihilates every symbol row
        const auto M = setup.constraint->symbol_matrix(x, xi);
        for (const auto& b : s.basis) {
            for (int row = 0; row < setup.constraint->rows; ++row) {
                cplx acc(0.0);
                for (int j = 0; j < setup.constraint->components; ++j)
                    acc += M[row][j] * b[j];
                CHECK(std::abs(acc) < 1e-10);
            }
        }
    }
}

TEST_CASE("cone consistency separates the three verdicts") {
    const Grid g({64, 64});
    ExperimentSetup setup = divcurl_pair(g, {1, 1}, {1, -1});

    const ConsistencyResult null_case =
        consistency_check(*setup.constraint, setup.Q, 48);
    CHECK(null_case.verdict == "null");
    CHECK(null_case.kernel_dim_min == 2);
    CHECK(null_case.kernel_dim_max == 2);

    const ConsistencyResult pos =
        consistency_check(*setup.constraint, QuadraticForm::identity(4), 48);
    CHECK(pos.verdict == "consistent");
    CHECK(pos.min_eigenvalue >= -1e-10);

    std::vector<double> neg_entries(16, 0.0);
    for (int i = 0; i < 4; ++i) neg_entries[i * 4 + i] = -1.0;
    const ConsistencyResult neg =
        consistency_check(*setup.constraint, QuadraticForm::constant(4, neg_entries), 48);
    CHECK(neg.verdict == "inconsistent");
    CHECK(neg.min_eigenvalue < -1e-10);
}

TEST_CASE("strong consistency reads the three verdict bands") {
    HDistEstimate est;
    est.schedule = {8, 16};
    est.levels = {2};
    auto add = [&est](double value, double err) {
        HDistEntry e;
        e.j = 0;
        e.m = 0;
        e.phi = "phi";
        e.psi = "one";
        e.combined.value = cplx(value, 0.0);
        e.combined.error = err;
        e.combined.converged = true;
        est.entries = {e};
    };
    const QuadraticForm Q = QuadraticForm::identity(1);

    add(1.0, 1e-3);
    const StrongConsistencyResult pos = strong_consistency_check(est, Q);
    CHECK(pos.rows.at(0).verdict == ">= 0 within error");
    CHECK(pos.nonnegative);
    CHECK(!pos.all_zero);

    add(1e-14, 1e-3);
    const StrongConsistencyResult zero = strong_consistency_check(est, Q);
    CHECK(zero.rows.at(0).verdict == "= 0 within error");
    CHECK(zero.all_zero);

    add(-1.0, 1e-3);
    const StrongConsistencyResult neg = strong_consistency_check(est, Q);
    CHECK(neg.rows.at(0).verdict == "negative beyond error");
    CHECK(!neg.nonnegative);
}

}  // TEST_SUITE
