#include <cmath>
#include <numbers>

#include "doctest.h"

#include "hdistlab/registry.hpp"
#include "hdistlab/symbols.hpp"

using namespace hdistlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("symbols") {

TEST_CASE("multi-order admissibility") {
    CHECK_NOTHROW(MultiOrder({1.0, 2.0}));
    CHECK_NOTHROW(MultiOrder({3.0, 7.0, 5.0}));
    CHECK_NOTHROW(MultiOrder({2.5, 2.5}));  // >= d is allowed without integrality
    CHECK_THROWS_AS(MultiOrder(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(MultiOrder({-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MultiOrder({1.5, 1.0}), std::invalid_argument);  // < d and fractional
    CHECK(MultiOrder::isotropic(3).is_isotropic());
    CHECK(!MultiOrder({1.0, 2.0}).is_isotropic());
}

TEST_CASE("gauge values") {
    const MultiOrder iso({1.0, 1.0});
    // 0.36 + 0.64 = 1 and 9 + 16 = 25
    CHECK(rho(std::vector<double>{0.6, 0.8}, iso) == doctest::Approx(1.0));
    CHECK(rho(std::vector<double>{3.0, 4.0}, iso) == doctest::Approx(5.0));

    const MultiOrder par({1.0, 2.0});
    // |2|^2 + |1|^4 = 5
    CHECK(rho(std::vector<double>{2.0, 1.0}, par) == doctest::Approx(std::sqrt(5.0)));
    CHECK(rho(std::vector<double>{0.0, 0.0}, par) == doctest::Approx(0.0));
}

TEST_CASE("projection onto the manifold") {
    const MultiOrder iso({1.0, 1.0});
    const auto eta = project_to_P(std::vector<double>{6.0, 8.0}, iso);
    CHECK(eta[0] == doctest::Approx(0.6));
    CHECK(eta[1] == doctest::Approx(0.8));

    // (1,1) with orders (1,2): s = 2, eta = (2^-1/2, 2^-1/4)
    const MultiOrder par({1.0, 2.0});
    const auto ep = project_to_P(std::vector<double>{1.0, 1.0}, par);
    CHECK(ep[0] == doctest::Approx(std::pow(2.0, -0.5)));
    CHECK(ep[1] == doctest::Approx(std::pow(2.0, -0.25)));
    CHECK(rho(ep, par) == doctest::Approx(1.0));

    CHECK_THROWS_AS(project_to_P(std::vector<double>{0.0, 0.0}, par),
                    std::invalid_argument);
}

TEST_CASE("split weight values") {
    CHECK(hoermander_weight(std::vector<double>{1.0, 0.0}, 1) ==
          doctest::Approx(std::sqrt(1.0 + 4.0 * kPi * kPi)));
    CHECK(hoermander_weight(std::vector<double>{0.0, 1.0}, 1) ==
          doctest::Approx(std::sqrt(1.0 + 16.0 * std::pow(kPi, 4))));
    CHECK(hoermander_weight(std::vector<double>{0.0, 0.0}, 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(hoermander_weight(std::vector<double>{1.0}, 2),
                    std::invalid_argument);
}

TEST_CASE("radial cutoff plateaus") {
    const MultiOrder iso({1.0, 1.0});
    CHECK(cutoff_theta(std::vector<double>{0.5, 0.0}, 1.0, 4.0, iso) == 1.0);
    CHECK(cutoff_theta(std::vector<double>{5.0, 0.0}, 1.0, 4.0, iso) == 0.0);
    const double mid = cutoff_theta(std::vector<double>{2.0, 0.0}, 1.0, 4.0, iso);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    CHECK_THROWS_AS(cutoff_theta(std::vector<double>{1.0, 0.0}, 4.0, 1.0, iso),
                    std::invalid_argument);
}

TEST_CASE("parity tags are enforced by sampling") {
    const MultiOrder iso({1.0, 1.0});
    const Symbol odd = symbol_from_label("riesz:0", 2);
    CHECK(parity_violation(odd, iso, 200) < 1e-14);

    Symbol mislabeled = odd;
    mislabeled.parity = Parity::Even;
    CHECK(parity_violation(mislabeled, iso, 200) > 0.1);

    const Symbol even = symbol_from_label("monomial:2,0", 2);
    CHECK(parity_violation(even, iso, 200) < 1e-14);
}

TEST_CASE("even-odd split reassembles the symbol") {
    const Symbol s = symbol_from_label("monomial:1,2", 2);  // odd overall
    const auto [e, o] = even_odd_split(s);
    const MultiOrder iso({1.0, 1.0});
    CHECK(parity_violation(e, iso, 100) < 1e-14);
    CHECK(parity_violation(o, iso, 100) < 1e-14);
    const std::vector<double> eta = project_to_P(std::vector<double>{0.3, -0.7}, iso);
    CHECK(std::abs(e.eval(eta) + o.eval(eta) - s.eval(eta)) < 1e-15);
}

TEST_CASE("multiplier diagnostic flags the raw coordinate but not its projection") {
    Symbol coord;
    coord.label = "xi0";
    coord.parity = Parity::Odd;
    coord.eval = [](std::span<const double> xi) { return cplx(xi[0]); };
    const MultiOrder iso({1.0, 1.0});

    const MarcinkiewiczResult raw = marcinkiewicz_estimate(coord, iso);
    CHECK(raw.unbounded_suspect);

    const MarcinkiewiczResult proj =
        marcinkiewicz_estimate(coord, iso, 5, 32, 11, true);
    CHECK(!proj.unbounded_suspect);
    CHECK(proj.estimate < 50.0);
    CHECK(proj.skipped == 0);
}

TEST_CASE("weight table") {
    const auto sob = AnisotropicWeight::sobolev(MultiOrder({1.0, 2.0}));
    CHECK(sob.value(std::vector<double>{0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(sob.value(std::vector<double>{1.0, 0.0}) ==
          doctest::Approx(std::sqrt(1.0 + 4.0 * kPi * kPi)));
    CHECK(sob.value(std::vector<double>{0.0, 1.0}) ==
          doctest::Approx(std::sqrt(1.0 + std::pow(2.0 * kPi, 4))));

    const auto par = AnisotropicWeight::parabolic();
    CHECK(par.value(std::vector<double>{3.0, 2.0}) == doctest::Approx(5.0));

    const auto gauge = AnisotropicWeight::rho_gauge(MultiOrder({1.0, 1.0}));
    CHECK(gauge.value(std::vector<double>{3.0, 4.0}) == doctest::Approx(5.0));

    const auto hor = AnisotropicWeight::hoermander(1);
    CHECK(hor.value(std::vector<double>{1.0, 0.0}) ==
          doctest::Approx(std::sqrt(1.0 + 4.0 * kPi * kPi)));
}

}  // TEST_SUITE
