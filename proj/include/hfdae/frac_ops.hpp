#pragma once

// Operational matrices for Riemann-Liouville fractional integration in the
// hybrid-function basis.
//
// For order alpha the integral of the basis is again a hybrid-function
// expansion whose coefficient maps are upper-triangular Toeplitz:
//
//   J^a S = P_ss S + P_st T,      J^a T = P_ts S + P_tt T
//
//   P_ss = h^a/G(a+1) [[0, s_1, s_2, ...]]   s_k = k^a - (k-1)^a
//   P_st = h^a/G(a+1) [[1, x_1, x_2, ...]]   x_k = (k+1)^a - 2k^a + (k-1)^a
//   P_ts = h^a/G(a+2) [[0, p_1, p_2, ...]]   p_k = k^(a+1) - (k-1)^a (k+a)
//   P_tt = h^a/G(a+2) [[1, q_1, q_2, ...]]   q_k = (k+1)^(a+1) - (k+1+a)k^a
//                                                  - k^(a+1) + (k+a)(k-1)^a
//
// and a series (C_S, C_T) integrates to (C_S P_ss + C_T P_ts, C_S P_st + C_T P_tt).
// Only first rows are stored.

#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <vector>

#include "hfdae/hf_core.hpp"

namespace hfdae {

/// Gamma function for x > 0.
double gamma_fn(double x);

/// Upper-triangular Toeplitz matrix; entry (i, j) = row[j - i] for j >= i.
class UpperToeplitz {
public:
    UpperToeplitz() = default;
    explicit UpperToeplitz(std::vector<double> row) : row_(std::move(row)) {}

    std::size_t size() const noexcept { return row_.size(); }
    std::span<const double> row() const noexcept { return row_; }
    double operator()(std::size_t i, std::size_t j) const { return j >= i ? row_[j - i] : 0.0; }

private:
    std::vector<double> row_;
};

/// Row vector times matrix: out[j] = sum_{i <= j} coeffs[i] * row[j - i].
std::vector<double> toeplitz_apply(std::span<const double> coeffs, const UpperToeplitz& mat);

// Unscaled kernel weights, valid for k >= 0 (k = 0 gives the leading entry
// of the corresponding row).
double ss_weight(double alpha, std::size_t k);
double st_weight(double alpha, std::size_t k);
double ts_weight(double alpha, std::size_t k);
double tt_weight(double alpha, std::size_t k);

/// h^alpha / Gamma(alpha + 1), the scale of P_ss and P_st.
double s_scale(double alpha, double h);
/// h^alpha / Gamma(alpha + 2), the scale of P_ts and P_tt.
double t_scale(double alpha, double h);

struct OpMatrixSet {
    double alpha = 1.0;
    Grid grid = Grid::over(1.0, 1);
    UpperToeplitz p_ss;
    UpperToeplitz p_st;
    UpperToeplitz p_ts;
    UpperToeplitz p_tt;
};

/// Throws DomainError unless 0 < alpha <= 1.
void check_order(double alpha);

OpMatrixSet build_op_matrices(double alpha, const Grid& grid);

/// Fractional integral of order alpha of the reconstruction of `series`.
/// Node values are exact for the piecewise-linear reconstruction.
HfSeries frac_integrate(const HfSeries& series, double alpha);
HfSeries frac_integrate(const HfSeries& series, const OpMatrixSet& ops);

/// Memoizes matrix sets per (alpha, t_start, t_end, m). Readers share the
/// lock; a miss builds outside the lock and inserts under the exclusive one.
class OpMatrixCache {
public:
    std::shared_ptr<const OpMatrixSet> get(double alpha, const Grid& grid);
    std::size_t size() const;

private:
    using Key = std::tuple<double, double, double, std::size_t>;
    mutable std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<const OpMatrixSet>> entries_;
};

}  // namespace hfdae
