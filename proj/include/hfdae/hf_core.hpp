#pragma once

// Hybrid-function basis on a uniform grid.
//
// On cell i = [ih, (i+1)h) the basis pairs a sample-and-hold function S_i
// (constant 1) with a right-handed triangular function T_i (rising 0 -> 1).
// A function is represented by c_i = f(ih) and d_i = c_{i+1} - c_i, which is
// exactly its piecewise-linear interpolant through the nodes.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hfdae {

class Grid {
public:
    Grid(double t_start, double t_end, std::size_t m);

    /// Grid on [0, t_end].
    static Grid over(double t_end, std::size_t m) { return Grid(0.0, t_end, m); }

    double t_start() const noexcept { return t_start_; }
    double t_end() const noexcept { return t_end_; }
    std::size_t m() const noexcept { return m_; }
    double h() const noexcept { return h_; }

    /// t_start + j*h, with node(m) returned as t_end exactly.
    double node(std::size_t j) const;
    std::vector<double> nodes() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double t_start_;
    double t_end_;
    std::size_t m_;
    double h_;
};

class HfSeries {
public:
    /// From m+1 node samples.
    static HfSeries from_samples(const Grid& grid, std::span<const double> samples);

    /// From S- and T-coefficient vectors of length m; tail = cs[m-1] + ds[m-1].
    static HfSeries from_coefficients(const Grid& grid, std::vector<double> cs,
                                      std::vector<double> ds);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> cs() const noexcept { return cs_; }
    std::span<const double> ds() const noexcept { return ds_; }
    double tail() const noexcept { return tail_; }

    /// Value at node j in [0, m].
    double node_value(std::size_t j) const;
    std::vector<double> node_values() const;

private:
    HfSeries(Grid grid, std::vector<double> cs, std::vector<double> ds, double tail)
        : grid_(grid), cs_(std::move(cs)), ds_(std::move(ds)), tail_(tail) {}

    Grid grid_;
    std::vector<double> cs_;
    std::vector<double> ds_;
    double tail_;
};

using ScalarFn = std::function<double(double)>;
using CompositeFn = std::function<double(double, std::span<const double>)>;

HfSeries expand_samples(std::span<const double> samples, const Grid& grid);

/// Samples f at every node. Throws SamplingError naming the node on a
/// non-finite value.
HfSeries expand_function(const ScalarFn& f, const Grid& grid);

/// Samples N(t, x_1(t), ..., x_k(t)) at every node from the node values of
/// the argument series.
HfSeries expand_composite(const CompositeFn& n, std::span<const HfSeries> args);

/// Piecewise-linear reconstruction. The right end point returns tail.
double evaluate(const HfSeries& series, double t);

/// Value of the i-th sample-and-hold function at t.
double sample_hold(const Grid& grid, std::size_t i, double t);

/// Value of the i-th right-handed triangular function at t.
double triangular(const Grid& grid, std::size_t i, double t);

/// Pairwise integrals over the grid span, each stored row-major as m x m.
struct BasisInnerProducts {
    std::size_t m = 0;
    std::vector<double> ss;
    std::vector<double> tt;
    std::vector<double> st;

    double ss_at(std::size_t i, std::size_t j) const { return ss[i * m + j]; }
    double tt_at(std::size_t i, std::size_t j) const { return tt[i * m + j]; }
    double st_at(std::size_t i, std::size_t j) const { return st[i * m + j]; }
};

/// Integrates all basis products numerically with a per-cell Gauss rule that
/// is exact for the quadratic pieces involved. O(m^3); intended for checks.
BasisInnerProducts basis_inner_products(const Grid& grid);

}  // namespace hfdae
