#include "hfdae/frac_ops.hpp"

#include <cmath>
#include <mutex>
#include <string>

#include "hfdae/errors.hpp"

namespace hfdae {

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("gamma_fn requires a finite positive argument, got " + std::to_string(x));
    }
    return std::tgamma(x);
}

std::vector<double> toeplitz_apply(std::span<const double> coeffs, const UpperToeplitz& mat) {
    const std::size_t m = mat.size();
    if (coeffs.size() != m) {
        throw ShapeError("toeplitz_apply: coefficient length " + std::to_string(coeffs.size()) +
                         " does not match matrix order " + std::to_string(m));
    }
    const auto row = mat.row();
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double c = coeffs[i];
        if (c == 0.0) {
            continue;
        }
        for (std::size_t j = i; j < m; ++j) {
            out[j] += c * row[j - i];
        }
    }
    return out;
}

namespace {

double pw(double base, double e) { return base == 0.0 ? 0.0 : std::pow(base, e); }

}  // namespace

double ss_weight(double alpha, std::size_t k) {
    if (k == 0) {
        return 0.0;
    }
    const double kk = static_cast<double>(k);
    return pw(kk, alpha) - pw(kk - 1.0, alpha);
}

double st_weight(double alpha, std::size_t k) {
    if (k == 0) {
        return 1.0;
    }
    const double kk = static_cast<double>(k);
    return pw(kk + 1.0, alpha) - 2.0 * pw(kk, alpha) + pw(kk - 1.0, alpha);
}

double ts_weight(double alpha, std::size_t k) {
    if (k == 0) {
        return 0.0;
    }
    const double kk = static_cast<double>(k);
    return pw(kk, alpha + 1.0) - pw(kk - 1.0, alpha) * (kk + alpha);
}

double tt_weight(double alpha, std::size_t k) {
    if (k == 0) {
        return 1.0;
    }
    const double kk = static_cast<double>(k);
    return pw(kk + 1.0, alpha + 1.0) - (kk + 1.0 + alpha) * pw(kk, alpha) - pw(kk, alpha + 1.0) +
           (kk + alpha) * pw(kk - 1.0, alpha);
}

double s_scale(double alpha, double h) { return std::pow(h, alpha) / gamma_fn(alpha + 1.0); }

double t_scale(double alpha, double h) { return std::pow(h, alpha) / gamma_fn(alpha + 2.0); }

void check_order(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("fractional order must lie in (0, 1], got " + std::to_string(alpha));
    }
}

OpMatrixSet build_op_matrices(double alpha, const Grid& grid) {
    check_order(alpha);
    const std::size_t m = grid.m();
    const double a = s_scale(alpha, grid.h());
    const double b = t_scale(alpha, grid.h());
    std::vector<double> ss(m), st(m), ts(m), tt(m);
    for (std::size_t k = 0; k < m; ++k) {
        ss[k] = a * ss_weight(alpha, k);
        st[k] = a * st_weight(alpha, k);
        ts[k] = b * ts_weight(alpha, k);
        tt[k] = b * tt_weight(alpha, k);
    }
    return OpMatrixSet{alpha, grid, UpperToeplitz(std::move(ss)), UpperToeplitz(std::move(st)),
                       UpperToeplitz(std::move(ts)), UpperToeplitz(std::move(tt))};
}

HfSeries frac_integrate(const HfSeries& series, const OpMatrixSet& ops) {
    if (!(series.grid() == ops.grid)) {
        throw GridMismatchError("operational matrices were built for a different grid");
    }
    auto cs = toeplitz_apply(series.cs(), ops.p_ss);
    auto ds = toeplitz_apply(series.cs(), ops.p_st);
    const auto cs_t = toeplitz_apply(series.ds(), ops.p_ts);
    const auto ds_t = toeplitz_apply(series.ds(), ops.p_tt);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        cs[i] += cs_t[i];
        ds[i] += ds_t[i];
    }
    return HfSeries::from_coefficients(series.grid(), std::move(cs), std::move(ds));
}

HfSeries frac_integrate(const HfSeries& series, double alpha) {
    return frac_integrate(series, build_op_matrices(alpha, series.grid()));
}

std::shared_ptr<const OpMatrixSet> OpMatrixCache::get(double alpha, const Grid& grid) {
    const Key key{alpha, grid.t_start(), grid.t_end(), grid.m()};
    {
        std::shared_lock lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) {
            return it->second;
        }
    }
    auto built = std::make_shared<const OpMatrixSet>(build_op_matrices(alpha, grid));
    std::unique_lock lock(mutex_);
    // A concurrent builder may have won; both results are identical.
    auto [it, inserted] = entries_.emplace(key, std::move(built));
    return it->second;
}

std::size_t OpMatrixCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

}  // namespace hfdae
