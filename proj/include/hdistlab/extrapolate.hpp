#pragma once

// Richardson extrapolation of pairing ladders.  Values are assumed to behave
// like v(r) = V + c/r + ... along the schedule; the extrapolant is the
// Neville polynomial in h = 1/r through the last (up to) three points,
// evaluated at h = 0.  The error bar is at least the magnitude of the last
// two successive extrapolants' difference; ladders whose raw successive
// differences stop shrinking are marked unconverged and get the max
// difference as the bar.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "hdistlab/spectral_core.hpp"

namespace hdistlab {

struct Ladder {
    std::vector<double> abscissa;      // r values, strictly increasing
    std::vector<cplx> raw;             // pairing values along the schedule
    std::vector<cplx> extrapolants;    // prefix extrapolants (index i uses points 0..i)
    cplx value{0.0};
    double error = 0.0;
    bool converged = true;
};

inline cplx neville_at_zero(std::span<const double> h, std::span<const cplx> v) {
    std::vector<cplx> t(v.begin(), v.end());
    const int n = static_cast<int>(t.size());
    for (int m = 1; m < n; ++m)
        for (int i = 0; i < n - m; ++i)
            t[i] = (h[i + m] * t[i] - h[i] * t[i + 1]) / (h[i + m] - h[i]);
    return t[0];
}

inline Ladder richardson(const std::vector<double>& r, const std::vector<cplx>& v) {
    if (r.size() != v.size() || r.empty())
        throw std::invalid_argument("richardson: bad ladder");
    Ladder lad;
    lad.abscissa = r;
    lad.raw = v;
    const int n = static_cast<int>(v.size());
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) h[i] = 1.0 / r[i];

    lad.extrapolants.resize(n);
    for (int i = 0; i < n; ++i) {
        const int window = std::min(3, i + 1);
        const int start = i + 1 - window;
        lad.extrapolants[i] = neville_at_zero(
            std::span<const double>(h).subspan(start, window),
            std::span<const cplx>(v).subspan(start, window));
    }
    lad.value = lad.extrapolants.back();

    double scale = 0.0;
    for (const auto& x : v) scale = std::max(scale, std::abs(x));
    const double floor = 1e-12 * std::max(scale, 1e-300);

    double max_diff = 0.0;
    bool shrinking = true;
    double prev = -1.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double d = std::abs(v[i + 1] - v[i]);
        max_diff = std::max(max_diff, d);
        if (prev >= 0.0 && d > std::max(1.25 * prev, floor)) shrinking = false;
        prev = d;
    }
    lad.converged = shrinking;

    double bar = n >= 2 ? std::abs(lad.extrapolants[n - 1] - lad.extrapolants[n - 2])
                        : std::abs(lad.value);
    if (!lad.converged) bar = std::max(bar, max_diff);
    lad.error = bar;
    return lad;
}

// combine a truncation-level ladder: final value is the last entry, the bar
// adds the last inter-level difference on top of that entry's own bar
struct LevelCombined {
    cplx value{0.0};
    double error = 0.0;
    bool converged = true;
};

inline LevelCombined combine_levels(const std::vector<Ladder>& per_level) {
    if (per_level.empty()) throw std::invalid_argument("combine_levels: empty");
    LevelCombined out;
    const Ladder& last = per_level.back();
    out.value = last.value;
    out.error = last.error;
    out.converged = last.converged;
    if (per_level.size() >= 2) {
        const Ladder& prev = per_level[per_level.size() - 2];
        out.error += std::abs(last.value - prev.value);
    }
    return out;
}

}  // namespace hdistlab
