#include "hdistlab/spectral_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

namespace hdistlab {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW's planner is not thread-safe; executing a plan on fresh buffers is.
// Plans are cached per (shape, direction) and created with FFTW_UNALIGNED so
// they run on whatever storage std::vector hands us, out-of-place only.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    void execute(const std::vector<int>& sizes, int sign, const cplx* in, cplx* out) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_pair(sizes, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<cplx> a(total(sizes)), b(total(sizes));
                plan = fftw_plan_dft(static_cast<int>(sizes.size()), sizes.data(),
                                     reinterpret_cast<fftw_complex*>(a.data()),
                                     reinterpret_cast<fftw_complex*>(b.data()),
                                     sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
                if (!plan) throw std::runtime_error("fftw plan creation failed");
                plans_.emplace(std::move(key), plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan,
                         reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

private:
    static std::int64_t total(const std::vector<int>& sizes) {
        std::int64_t t = 1;
        for (int n : sizes) t *= n;
        return t;
    }

    std::mutex mu_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

}  // namespace

Grid::Grid(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty() || sizes_.size() > 4)
        throw std::invalid_argument("grid dimension must be 1..4");
    total_ = 1;
    for (int n : sizes_) {
        if (n < 4 || !power_of_two(n))
            throw std::invalid_argument("grid sizes must be powers of two >= 4");
        total_ *= n;
    }
    cell_volume_ = 1.0 / static_cast<double>(total_);
}

std::int64_t Grid::flat_index(std::span<const int> multi) const {
    std::int64_t idx = 0;
    for (int a = 0; a < dim(); ++a) idx = idx * sizes_[a] + multi[a];
    return idx;
}

void Grid::unflatten(std::int64_t flat, std::span<int> multi) const {
    for (int a = dim() - 1; a >= 0; --a) {
        multi[a] = static_cast<int>(flat % sizes_[a]);
        flat /= sizes_[a];
    }
}

void Grid::freq_at(std::int64_t flat, std::span<double> out) const {
    for (int a = dim() - 1; a >= 0; --a) {
        const int idx = static_cast<int>(flat % sizes_[a]);
        out[a] = static_cast<double>(freq(a, idx));
        flat /= sizes_[a];
    }
}

bool Grid::any_nyquist(std::int64_t flat) const {
    for (int a = dim() - 1; a >= 0; --a) {
        if (static_cast<int>(flat % sizes_[a]) == sizes_[a] / 2) return true;
        flat /= sizes_[a];
    }
    return false;
}

Field::Field(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (static_cast<std::int64_t>(values.size()) != g.total())
        throw std::invalid_argument("field size does not match grid");
}

Spectrum forward_transform(const Field& f) {
    Spectrum out(f.values.size());
    PlanCache::instance().execute(f.grid.sizes(), FFTW_FORWARD, f.values.data(), out.data());
    const double w = f.grid.cell_volume();
    for (auto& c : out) c *= w;
    return out;
}

Field inverse_transform(const Grid& grid, const Spectrum& coeffs) {
    if (static_cast<std::int64_t>(coeffs.size()) != grid.total())
        throw std::invalid_argument("coefficient count does not match grid");
    Field out(grid);
    PlanCache::instance().execute(grid.sizes(), FFTW_BACKWARD, coeffs.data(), out.values.data());
    return out;
}

double lp_norm(const Field& f, double p) {
    if (std::isinf(p) && p > 0) {
        double m = 0.0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0) || std::isnan(p))
        throw std::invalid_argument("lp_norm requires p >= 1");
    double s = 0.0;
    if (p == 2.0) {
        for (const auto& v : f.values) s += std::norm(v);
    } else if (p == 1.0) {
        for (const auto& v : f.values) s += std::abs(v);
    } else {
        for (const auto& v : f.values) s += std::pow(std::abs(v), p);
    }
    return std::pow(f.grid.cell_volume() * s, 1.0 / p);
}

cplx pair(const Field& f, const Field& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("pair: grids differ");
    cplx s(0.0);
    for (std::int64_t i = 0; i < f.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return s * f.grid.cell_volume();
}

Field multiply(const Field& f, const Field& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("multiply: grids differ");
    Field out(f.grid);
    for (std::int64_t i = 0; i < f.size(); ++i) out.values[i] = f.values[i] * g.values[i];
    return out;
}

Field& add_scaled(Field& acc, const Field& f, cplx scale) {
    if (!(acc.grid == f.grid)) throw std::invalid_argument("add_scaled: grids differ");
    for (std::int64_t i = 0; i < acc.size(); ++i) acc.values[i] += scale * f.values[i];
    return acc;
}

Field random_field(const Grid& grid, std::uint64_t seed, bool real_only) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field out(grid);
    for (auto& v : out.values) {
        const double re = u(rng);
        const double im = real_only ? 0.0 : u(rng);
        v = cplx(re, im);
    }
    return out;
}

}  // namespace hdistlab
