#include "hfdae/hf_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hfdae/errors.hpp"

namespace hfdae {

Grid::Grid(double t_start, double t_end, std::size_t m)
    : t_start_(t_start), t_end_(t_end), m_(m), h_(0.0) {
    if (m == 0) {
        throw DomainError("grid needs at least one subinterval");
    }
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
        throw DomainError("grid span must be finite with t_end > t_start");
    }
    h_ = (t_end - t_start) / static_cast<double>(m);
}

double Grid::node(std::size_t j) const {
    if (j > m_) {
        throw DomainError("node index " + std::to_string(j) + " beyond m = " + std::to_string(m_));
    }
    if (j == m_) {
        return t_end_;
    }
    return t_start_ + static_cast<double>(j) * h_;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(m_ + 1);
    for (std::size_t j = 0; j <= m_; ++j) {
        out[j] = node(j);
    }
    return out;
}

HfSeries HfSeries::from_samples(const Grid& grid, std::span<const double> samples) {
    const std::size_t m = grid.m();
    if (samples.size() != m + 1) {
        throw ShapeError("expected " + std::to_string(m + 1) + " node samples, got " +
                         std::to_string(samples.size()));
    }
    std::vector<double> cs(samples.begin(), samples.end() - 1);
    std::vector<double> ds(m);
    for (std::size_t i = 0; i < m; ++i) {
        ds[i] = samples[i + 1] - samples[i];
    }
    return HfSeries(grid, std::move(cs), std::move(ds), samples[m]);
}

HfSeries HfSeries::from_coefficients(const Grid& grid, std::vector<double> cs,
                                     std::vector<double> ds) {
    if (cs.size() != grid.m() || ds.size() != grid.m()) {
        throw ShapeError("coefficient vectors must have length m = " + std::to_string(grid.m()));
    }
    const double tail = cs.back() + ds.back();
    return HfSeries(grid, std::move(cs), std::move(ds), tail);
}

double HfSeries::node_value(std::size_t j) const {
    if (j < cs_.size()) {
        return cs_[j];
    }
    if (j == cs_.size()) {
        return tail_;
    }
    throw DomainError("node index " + std::to_string(j) + " beyond m = " +
                      std::to_string(cs_.size()));
}

std::vector<double> HfSeries::node_values() const {
    std::vector<double> out(cs_);
    out.push_back(tail_);
    return out;
}

HfSeries expand_samples(std::span<const double> samples, const Grid& grid) {
    return HfSeries::from_samples(grid, samples);
}

HfSeries expand_function(const ScalarFn& f, const Grid& grid) {
    std::vector<double> samples(grid.m() + 1);
    for (std::size_t j = 0; j <= grid.m(); ++j) {
        samples[j] = f(grid.node(j));
        if (!std::isfinite(samples[j])) {
            throw SamplingError("non-finite sample at node " + std::to_string(j) +
                                " (t = " + std::to_string(grid.node(j)) + ")");
        }
    }
    return HfSeries::from_samples(grid, samples);
}

HfSeries expand_composite(const CompositeFn& n, std::span<const HfSeries> args) {
    if (args.empty()) {
        throw ShapeError("expand_composite needs at least one argument series");
    }
    const Grid& grid = args.front().grid();
    for (const auto& a : args) {
        if (!(a.grid() == grid)) {
            throw GridMismatchError("argument series live on different grids");
        }
    }
    std::vector<double> samples(grid.m() + 1);
    std::vector<double> point(args.size());
    for (std::size_t j = 0; j <= grid.m(); ++j) {
        for (std::size_t k = 0; k < args.size(); ++k) {
            point[k] = args[k].node_value(j);
        }
        samples[j] = n(grid.node(j), point);
        if (!std::isfinite(samples[j])) {
            throw SamplingError("non-finite composite sample at node " + std::to_string(j));
        }
    }
    return HfSeries::from_samples(grid, samples);
}

namespace {

// Cell containing t, with the right end point folded into the last cell.
std::size_t cell_of(const Grid& grid, double t) {
    const double x = (t - grid.t_start()) / grid.h();
    auto j = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(x))), grid.m() - 1);
    // Snap to the cell whose left node compares exactly, so nodes evaluate exactly.
    if (j + 1 < grid.m() && grid.node(j + 1) <= t) {
        ++j;
    } else if (j > 0 && grid.node(j) > t) {
        --j;
    }
    return j;
}

bool in_span(const Grid& grid, double t) {
    return t >= grid.t_start() && t <= grid.t_end();
}

}  // namespace

double evaluate(const HfSeries& series, double t) {
    const Grid& grid = series.grid();
    if (!in_span(grid, t)) {
        throw DomainError("t = " + std::to_string(t) + " outside [" +
                          std::to_string(grid.t_start()) + ", " + std::to_string(grid.t_end()) + "]");
    }
    if (t == grid.t_end()) {
        return series.tail();
    }
    const std::size_t j = cell_of(grid, t);
    const double frac = (t - grid.node(j)) / grid.h();
    return series.cs()[j] + series.ds()[j] * frac;
}

double sample_hold(const Grid& grid, std::size_t i, double t) {
    const double lo = grid.t_start() + static_cast<double>(i) * grid.h();
    return (t >= lo && t < lo + grid.h()) ? 1.0 : 0.0;
}

double triangular(const Grid& grid, std::size_t i, double t) {
    const double lo = grid.t_start() + static_cast<double>(i) * grid.h();
    return (t >= lo && t < lo + grid.h()) ? (t - lo) / grid.h() : 0.0;
}

BasisInnerProducts basis_inner_products(const Grid& grid) {
    // Two-point Gauss-Legendre on each cell integrates the (at most quadratic)
    // products exactly.
    static constexpr std::array<double, 2> kAbscissa = {-0.57735026918962576451,
                                                       0.57735026918962576451};
    const std::size_t m = grid.m();
    BasisInnerProducts out;
    out.m = m;
    out.ss.assign(m * m, 0.0);
    out.tt.assign(m * m, 0.0);
    out.st.assign(m * m, 0.0);

    std::vector<double> s(m);
    std::vector<double> tr(m);
    const double half = 0.5 * grid.h();
    for (std::size_t cell = 0; cell < m; ++cell) {
        const double mid = grid.t_start() + (static_cast<double>(cell) + 0.5) * grid.h();
        for (double x : kAbscissa) {
            const double t = mid + half * x;
            for (std::size_t i = 0; i < m; ++i) {
                s[i] = sample_hold(grid, i, t);
                tr[i] = triangular(grid, i, t);
            }
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    out.ss[i * m + j] += half * s[i] * s[j];
                    out.tt[i * m + j] += half * tr[i] * tr[j];
                    out.st[i * m + j] += half * s[i] * tr[j];
                }
            }
        }
    }
    return out;
}

}  // namespace hfdae
