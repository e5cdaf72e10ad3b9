#pragma once

// Pseudo-spectral base layer on the unit torus [0,1)^d.
//
// Conventions, used by every module above this one:
//   - samples live at x_j = j/N_k on a uniform grid, row-major storage
//   - forward transform: c(xi) = cellvol * sum_x f(x) e^{-2 pi i x.xi},
//     so a pure mode e^{2 pi i k.x} has coefficient 1 at xi = k
//   - inverse transform: f(x) = sum_xi c(xi) e^{+2 pi i x.xi}
//   - frequencies are integers in {-N_k/2, ..., N_k/2 - 1}, stored in
//     standard FFT order (0, 1, ..., N/2-1, -N/2, ..., -1) per axis
//   - pair(f,g) = cellvol * sum_x f conj(g); Plancherel holds exactly:
//     pair(f,g) = sum_xi fhat conj(ghat)

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hdistlab {

using cplx = std::complex<double>;

class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<int> sizes);

    int dim() const { return static_cast<int>(sizes_.size()); }
    const std::vector<int>& sizes() const { return sizes_; }
    int size(int axis) const { return sizes_[axis]; }
    std::int64_t total() const { return total_; }
    double cell_volume() const { return cell_volume_; }

    // integer frequency carried by storage index `idx` along `axis`
    int freq(int axis, int idx) const {
        const int n = sizes_[axis];
        return idx < n / 2 ? idx : idx - n;
    }
    // true when the index sits on the unpaired -N/2 row of the axis
    bool is_nyquist(int axis, int idx) const { return idx == sizes_[axis] / 2; }

    std::int64_t flat_index(std::span<const int> multi) const;
    void unflatten(std::int64_t flat, std::span<int> multi) const;

    // frequency vector (as doubles) for a flat storage index
    void freq_at(std::int64_t flat, std::span<double> out) const;
    bool any_nyquist(std::int64_t flat) const;

    bool operator==(const Grid& o) const { return sizes_ == o.sizes_; }

private:
    std::vector<int> sizes_;
    std::int64_t total_ = 0;
    double cell_volume_ = 0.0;
};

struct Field {
    Grid grid;
    std::vector<cplx> values;  // physical samples, row-major

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.total(), cplx(0.0)) {}
    Field(const Grid& g, std::vector<cplx> v);

    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
};

using Spectrum = std::vector<cplx>;  // same layout as Field::values, FFT order

Spectrum forward_transform(const Field& f);
Field inverse_transform(const Grid& grid, const Spectrum& coeffs);

// (cellvol * sum |f|^p)^(1/p); p = infinity gives max |f|.  Rejects p < 1.
double lp_norm(const Field& f, double p);

// cellvol * sum f conj(g); grids must match.
cplx pair(const Field& f, const Field& g);

// pointwise product, grids must match
Field multiply(const Field& f, const Field& g);
Field& add_scaled(Field& acc, const Field& f, cplx scale);

// sample a callable c(x) over the grid, x in [0,1)^d
template <typename Fn>
Field sample(const Grid& grid, Fn&& fn) {
    Field out(grid);
    std::vector<int> multi(grid.dim());
    std::vector<double> x(grid.dim());
    for (std::int64_t i = 0; i < grid.total(); ++i) {
        grid.unflatten(i, multi);
        for (int a = 0; a < grid.dim(); ++a)
            x[a] = static_cast<double>(multi[a]) / grid.size(a);
        out.values[i] = fn(std::span<const double>(x));
    }
    return out;
}

// deterministic pseudo-random field, entries uniform in [-1,1] (+i[-1,1] unless real_only)
Field random_field(const Grid& grid, std::uint64_t seed, bool real_only = false);

}  // namespace hdistlab
