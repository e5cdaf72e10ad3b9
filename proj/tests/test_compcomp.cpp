#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "hdistlab/acceptance.hpp"
#include "hdistlab/registry.hpp"
#include "hdistlab/report_io.hpp"

using namespace hdistlab;

TEST_SUITE("compcomp") {

TEST_CASE("verdict gate truth table") {
    // constraint failure trumps everything
    CHECK(decide_verdict(false, true, true, true, true, true, true) == "inconclusive");
    // missing domination + silent pairings + surviving defect
    CHECK(decide_verdict(true, false, true, true, false, true, true) ==
          "counterexample-reproduced");
    // negligible defect
    CHECK(decide_verdict(true, true, false, true, true, false, false) ==
          "confirms-equality");
    // sign-definite surviving defect with a nonnegative strong check
    CHECK(decide_verdict(true, true, false, true, false, true, true) ==
          "confirms-inequality");
    // surviving defect but the strong check went negative
    CHECK(decide_verdict(true, true, false, false, false, true, true) == "inconclusive");
    // surviving defect of indefinite sign
    CHECK(decide_verdict(true, true, false, true, false, true, false) == "inconclusive");
    // defect inside the band but not negligible either
    CHECK(decide_verdict(true, true, false, true, false, false, false) == "inconclusive");

    std::vector<std::string> reasons;
    decide_verdict(true, false, true, true, false, true, true, &reasons);
    CHECK(!reasons.empty());
}

TEST_CASE("exit codes follow the verdict") {
    CHECK(exit_code_for("confirms-equality") == 0);
    CHECK(exit_code_for("confirms-inequality") == 0);
    CHECK(exit_code_for("counterexample-reproduced") == 0);
    CHECK(exit_code_for("inconclusive") == 2);
}

namespace {
ExperimentConfig plateau_config() {
    ExperimentConfig cfg;
    cfg.name = "plateau-small";
    cfg.alpha = MultiOrder({1.0});
    cfg.schedule = {8, 16, 32};
    cfg.levels = {2, 4};
    cfg.phis = {gaussian_test({0.3}, 0.05)};
    cfg.psis = {one_symbol()};
    cfg.jobs = 2;
    return cfg;
}

ExperimentSetup plateau_setup() {
    ExperimentSetup setup;
    setup.u = counterexample_family(0.3);
    setup.v = setup.u;
    setup.Q = QuadraticForm::identity(1);
    return setup;
}
}  // namespace

TEST_CASE("the plateau run lands on the counterexample verdict") {
    const ExperimentReport rep = run_compcomp(plateau_setup(), plateau_config());
    CHECK(rep.verdict == "counterexample-reproduced");
    CHECK(rep.exit_code == 0);
    CHECK(!rep.domination_ok);
    CHECK(rep.constraint_ok);
    CHECK(rep.strong.all_zero);
    REQUIRE(rep.defects.size() == 1);
    CHECK(rep.defects[0].value.real() == doctest::Approx(2.0).epsilon(0.02));
    for (const auto& e : rep.estimate.entries)
        CHECK(std::abs(e.combined.value) < 1e-12);
}

TEST_CASE("term split on the plateau: everything lives in the tail") {
    const OptimalVariantReport rep =
        run_optimal_variant(plateau_setup(), plateau_config());
    REQUIRE(!rep.rows.empty());
    for (const auto& row : rep.rows) {
        CHECK(row.sum_gap < 1e-10 * std::max(std::abs(row.raw_defect), 1.0));
        CHECK(std::abs(row.tail - row.raw_defect) < 1e-10);
        CHECK(std::abs(row.hdist) < 1e-12);
        CHECK(std::abs(row.bias) < 1e-12);
        CHECK(std::abs(row.weak_drift) < 1e-12);
        CHECK(!row.tail_vanishing);
    }
    CHECK(!rep.domination_ok);
}

TEST_CASE("term split on a bounded oscillation: the tail vanishes") {
    const Grid g({64, 64});
    ProfileSpec prof;
    prof.center = {0.5, 0.5};
    prof.radius = 0.3;
    ExperimentSetup setup;
    setup.u = oscillation_family(g, prof, {1, 0}, OscillationPhase::Cosine, 2.0);
    setup.v = setup.u;
    setup.Q = QuadraticForm::identity(1);

    ExperimentConfig cfg;
    cfg.name = "oscillation-split";
    cfg.alpha = MultiOrder::isotropic(2);
    cfg.schedule = {4, 8, 16};
    cfg.levels = {2};
    cfg.phis = {gaussian_test({0.5, 0.5}, 0.1)};
    cfg.psis = {one_symbol()};
    cfg.jobs = 2;

    const OptimalVariantReport rep = run_optimal_variant(setup, cfg);
    REQUIRE(!rep.rows.empty());
    for (const auto& row : rep.rows) {
        CHECK(row.tail_vanishing);
        CHECK(std::abs(row.tail) < 1e-12);
        CHECK(row.sum_gap < 1e-10);
    }
}

TEST_CASE("commutator pairing cancels for even symbols and not for odd ones") {
    ParabolicSpec spec;
    spec.seed_mode = {1, 1};
    spec.r_max = 8.0;
    ExperimentSetup setup = parabolic_pair(spec);
    const Field u1 = setup.u.generate(8.0)[0];
    const Field phi = gaussian_test({0.5, 0.5}, 0.08).materialize(u1.grid);
    const MultiOrder alpha = setup.constraint->orders;

    const CommutatorPairing even =
        commutator_pairing(u1, phi, symbol_from_label("monomial:0,2", 2), alpha);
    CHECK(std::abs(even.value) < 1e-10 * even.scale);

    const CommutatorPairing odd =
        commutator_pairing(u1, phi, symbol_from_label("riesz:0", 2), alpha);
    CHECK(std::abs(odd.value) > 1e-6 * odd.scale);
}

TEST_CASE("a broken projection fails the invariant battery") {
    const ProjectionFn good = [](std::span<const double> xi, const MultiOrder& a) {
        return project_to_P(xi, a);
    };
    const ProjectionFn flipped = [](std::span<const double> xi, const MultiOrder& a) {
        auto eta = project_to_P(xi, a);
        eta[0] = -eta[0];  // breaks oddness and the power identity
        return eta;
    };
    CHECK(projection_invariant_holds(good, MultiOrder({1.0, 2.0}), 500, 3, 1e-12));
    CHECK(!projection_invariant_holds(flipped, MultiOrder({1.0, 2.0}), 500, 3, 1e-12));
}

TEST_CASE("symbol labels parse with the right parity") {
    CHECK(symbol_from_label("one", 2).parity == Parity::Even);
    CHECK(symbol_from_label("riesz:1", 3).parity == Parity::Odd);
    CHECK(symbol_from_label("monomial:2,1", 2).parity == Parity::Odd);
    CHECK(symbol_from_label("monomial:2,2", 2).parity == Parity::Even);
    CHECK(symbol_from_label("parabolic-xi0", 2).parity == Parity::Odd);
    CHECK(symbol_from_label("parabolic-xixj:0:1", 2).parity == Parity::Even);
    CHECK(symbol_from_label("abs:0", 1).smooth_claim == false);
    const Symbol w = symbol_from_label("direction-indicator:0:0.5", 2);
    CHECK(w.parity == Parity::Even);
    CHECK(w.eval(std::vector<double>{1.0, 0.0}).real() == doctest::Approx(1.0));
    CHECK(w.eval(std::vector<double>{0.0, 1.0}).real() == doctest::Approx(0.0));

    CHECK_THROWS_AS(symbol_from_label("riesz:2", 2), std::invalid_argument);
    CHECK_THROWS_AS(symbol_from_label("monomial:1", 2), std::invalid_argument);
    CHECK_THROWS_AS(symbol_from_label("direction-indicator:0:1.5", 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(symbol_from_label("nope", 2), std::invalid_argument);
}

TEST_CASE("configs load with defaults and reject bad input") {
    nlohmann::json cfg = {
        {"schema", "hdistlab-config-v1"},
        {"experiment", "counterexample"},
        {"family", {{"x0", 0.3}}},
        {"schedule", {8, 16, 32}},
    };
    const LoadedExperiment exp = load_experiment(cfg);
    CHECK(exp.mode == "standard");
    CHECK(exp.config.levels == std::vector<double>{2, 4, 8});
    CHECK(exp.config.alpha.dim() == 1);
    REQUIRE(exp.config.phis.size() == 1);
    REQUIRE(exp.config.psis.size() == 1);
    CHECK(exp.config.psis[0].label == "one");
    CHECK(!exp.setup.constraint.has_value());

    nlohmann::json bad_schema = cfg;
    bad_schema["schema"] = "something-else";
    CHECK_THROWS_AS(load_experiment(bad_schema), std::invalid_argument);

    nlohmann::json bad_kind = cfg;
    bad_kind["experiment"] = "unknown";
    CHECK_THROWS_AS(load_experiment(bad_kind), std::invalid_argument);

    nlohmann::json bad_mode = cfg;
    bad_mode["mode"] = "fast";
    CHECK_THROWS_AS(load_experiment(bad_mode), std::invalid_argument);

    CHECK_THROWS_AS(load_experiment_file("/nonexistent/prayer.json"),
                    std::invalid_argument);
}

TEST_CASE("parabolic config picks the anisotropic orders from its constraint") {
    nlohmann::json cfg = {
        {"schema", "hdistlab-config-v1"},
        {"experiment", "parabolic"},
        {"family", {{"seed_mode", {1, 1}}, {"r_max", 4.0}}},
        {"schedule", {2, 4}},
    };
    const LoadedExperiment exp = load_experiment(cfg);
    REQUIRE(exp.setup.constraint.has_value());
    CHECK(exp.config.alpha.dim() == 2);
    CHECK(exp.config.alpha[0] == doctest::Approx(1.0));
    CHECK(exp.config.alpha[1] == doctest::Approx(2.0));
}

TEST_CASE("report serialization round trip") {
    const ExperimentReport rep = run_compcomp(plateau_setup(), plateau_config());
    const nlohmann::json j = report_to_json(rep);
    CHECK(j.at("schema") == "hdistlab-report-v1");
    CHECK(j.at("verdict") == "counterexample-reproduced");
    CHECK(j.at("estimate").at("entries").size() == rep.estimate.entries.size());

    const std::string text = render_report_text(rep);
    CHECK(text.find("counterexample-reproduced") != std::string::npos);
    CHECK(text.find("plateau-small") != std::string::npos);

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hdistlab-report-test";
    fs::remove_all(dir);
    write_run_outputs(dir.string(), j, &rep.estimate);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "ladders" / "entry_j0_m0.csv"));
    std::ifstream csv(dir / "ladders" / "entry_j0_m0.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "r,l,phi,psi,re,im,err");
    fs::remove_all(dir);
}

}  // TEST_SUITE
