#include <numbers>

#include "doctest.h"

#include "hdistlab/multipliers.hpp"
#include "hdistlab/registry.hpp"

using namespace hdistlab;

namespace {
constexpr double kPi = std::numbers::pi;

Field pure_mode(const Grid& g, const std::vector<int>& k) {
    return sample(g, [&](std::span<const double> x) {
        double phase = 0.0;
        for (std::size_t a = 0; a < k.size(); ++a) phase += k[a] * x[a];
        return std::polar(1.0, 2.0 * kPi * phase);
    });
}
}  // namespace

TEST_SUITE("multipliers") {

TEST_CASE("multiplier scales a pure mode by its symbol value") {
    const Grid g({16, 16});
    const MultiplierOp op = make_multiplier(g, [](std::span<const double> xi) {
        return cplx(xi[0] - 2.0 * xi[1], 0.5);
    });
    const std::vector<int> k = {3, -5};
    const Field out = op.apply(pure_mode(g, k));
    const cplx want = cplx(3.0 + 10.0, 0.5) * pure_mode(g, k).values[7];
    CHECK(std::abs(out.values[7] - want) < 1e-12);
}

TEST_CASE("projected symbol ops zero the origin and the unpaired rows") {
    const Grid g({8, 8});
    const MultiOrder iso({1.0, 1.0});
    const MultiplierOp op = projected_symbol_op(g, one_symbol(), iso);
    std::vector<int> multi(2);
    for (std::int64_t i = 0; i < g.total(); ++i) {
        g.unflatten(i, multi);
        if (i == 0 || g.is_nyquist(0, multi[0]) || g.is_nyquist(1, multi[1]))
            CHECK(op.symbol[i] == cplx(0.0));
        else
            CHECK(std::abs(op.symbol[i] - 1.0) < 1e-15);
    }
    const MultiplierOp op2 = projected_symbol_op(g, one_symbol(), iso, cplx(7.0));
    CHECK(op2.symbol[0] == cplx(7.0));
}

TEST_CASE("parity against realness on a full-band field") {
    const Grid g({32, 32});
    const MultiOrder alpha({1.0, 2.0});
    const Field f = random_field(g, 3, true);
    const double nf = lp_norm(f, 2.0);

    const Field ev = apply_projected_symbol(g, symbol_from_label("monomial:2,0", 2),
                                            alpha, f);
    const Field od = apply_projected_symbol(g, symbol_from_label("riesz:1", 2), alpha, f);
    for (std::int64_t i = 0; i < g.total(); ++i) {
        CHECK(std::abs(ev.values[i].imag()) <= 1e-10 * nf);
        CHECK(std::abs(od.values[i].real()) <= 1e-10 * nf);
    }
}

TEST_CASE("fractional power of the derivative factor") {
    CHECK(power_2pi_i(0.0, 1.5) == cplx(0.0));
    CHECK(std::abs(power_2pi_i(3.0, 1.0) - cplx(0.0, 2.0 * kPi * 3.0)) < 1e-12);
    CHECK(std::abs(power_2pi_i(3.0, 2.0) - cplx(-std::pow(2.0 * kPi * 3.0, 2), 0.0)) <
          1e-9);
    const cplx half = power_2pi_i(-2.0, 0.5);
    const double mag = std::sqrt(4.0 * kPi);
    CHECK(std::abs(half - std::polar(mag, -kPi / 4.0)) < 1e-12);
}

TEST_CASE("fractional derivative matches the closed form on a mode") {
    const Grid g({32});
    const std::vector<int> k = {5};
    const Field mode = pure_mode(g, k);
    for (double a : {1.0, 2.0, 1.5}) {
        const Field out = fractional_derivative(mode, 0, a);
        const cplx factor = power_2pi_i(5.0, a);
        double worst = 0.0;
        for (int i = 0; i < 32; ++i)
            worst = std::max(worst, std::abs(out.values[i] - factor * mode.values[i]));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("integer order agrees with repeated spectral differentiation") {
    const Grid g({32, 8});
    const Field f = random_field(g, 21);
    const Field twice = fractional_derivative(fractional_derivative(f, 0, 1.0), 0, 1.0);
    const Field second = fractional_derivative(f, 0, 2.0);
    double scale = lp_norm(f, 2.0);
    for (std::int64_t i = 0; i < g.total(); ++i)
        CHECK(std::abs(twice.values[i] - second.values[i]) < 1e-7 * scale * g.size(0) *
                                                                 g.size(0));
}

TEST_CASE("adjoint derivative factor conjugates the symbol table") {
    const Grid g({16, 16});
    const MultiOrder alpha({1.0, 2.0});
    const std::vector<double> beta = {1.0, 0.0};
    const MultiplierOp fwd =
        smoothing_derivative_op(g, one_symbol(), alpha, beta);
    const MultiplierOp adj =
        smoothing_derivative_op(g, one_symbol(), alpha, beta, {}, true);
    for (std::int64_t i = 0; i < g.total(); ++i)
        CHECK(std::abs(adj.symbol[i] - std::conj(fwd.symbol[i])) < 1e-15);
}

TEST_CASE("smoothing op vanishes near the origin and stays bounded") {
    const Grid g({32, 32});
    const MultiOrder iso({1.0, 1.0});
    const MultiplierOp op = smoothing_op(g, one_symbol(), iso);
    CHECK(op.symbol[0] == cplx(0.0));
    // rho <= inner = 1 falls inside theta's plateau; (0,1) and (1,0) sit on it
    std::vector<int> at = {1, 0};
    CHECK(std::abs(op.symbol[g.flat_index(at)]) == 0.0);
    double sup = 0.0;
    for (const cplx& v : op.symbol) sup = std::max(sup, std::abs(v));
    CHECK(sup > 0.0);
    CHECK(sup <= 1.0);  // (1 - theta)/rho with rho >= 1 wherever theta < 1
}

TEST_CASE("weighted norm inverts the weight it was built with") {
    const Grid g({32, 32});
    const auto w = AnisotropicWeight::sobolev(MultiOrder({1.0, 2.0}));
    const Field f = random_field(g, 31);
    const MultiplierOp weight_op = make_multiplier(
        g, [&](std::span<const double> xi) { return cplx(w.value(xi)); });
    const Field g_field = weight_op.apply(f);
    CHECK(anisotropic_norm(g_field, 2.0, w, true) ==
          doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-10));
    CHECK(anisotropic_norm(f, 2.0, w) ==
          doctest::Approx(lp_norm(g_field, 2.0)).epsilon(1e-10));
}

TEST_CASE("truncation keeps strictly small samples") {
    const Grid g({16});
    Field f(g);
    for (int i = 0; i < 16; ++i) f.values[i] = cplx(i * 0.25, 0.0);
    const Field t = truncate(f, 1.0);
    for (int i = 0; i < 16; ++i) {
        if (i * 0.25 < 1.0)
            CHECK(t.values[i] == f.values[i]);
        else
            CHECK(t.values[i] == cplx(0.0));
    }
}

}  // TEST_SUITE
