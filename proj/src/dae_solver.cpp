#include "hfdae/dae_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hfdae/errors.hpp"
#include "hfdae/frac_ops.hpp"

namespace hfdae {

namespace {

double inf_norm(std::span<const double> v) {
    double out = 0.0;
    for (double x : v) {
        out = std::max(out, std::abs(x));
    }
    return out;
}

std::size_t first_non_finite(std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            return i;
        }
    }
    return v.size();
}

bool clamp_to(std::span<double> y, std::span<const double> lower) {
    bool active = false;
    for (std::size_t i = 0; i < lower.size() && i < y.size(); ++i) {
        if (y[i] < lower[i]) {
            y[i] = lower[i];
            active = true;
        }
    }
    return active;
}

}  // namespace

const char* to_string(NewtonStatus status) {
    switch (status) {
        case NewtonStatus::converged: return "converged";
        case NewtonStatus::relaxed: return "relaxed";
        case NewtonStatus::max_iterations: return "max-iterations";
        case NewtonStatus::singular_jacobian: return "singular-jacobian";
        case NewtonStatus::damping_floor: return "damping-floor";
    }
    return "unknown";
}

void validate(const FdaeProblem& problem, double consistency_tol) {
    const std::size_t n = problem.n();
    if (problem.n_diff() + problem.constraints.size() != n) {
        throw ShapeError("problem '" + problem.name + "': " + std::to_string(problem.n_diff()) +
                         " differential + " + std::to_string(problem.constraints.size()) +
                         " algebraic equations for " + std::to_string(n) + " unknowns");
    }
    if (problem.orders.size() != problem.n_diff()) {
        throw ShapeError("problem '" + problem.name + "': one order per differential equation");
    }
    for (double a : problem.orders) {
        check_order(a);
    }
    if (!problem.differential_unknowns.empty()) {
        if (problem.differential_unknowns.size() != problem.n_diff()) {
            throw ShapeError("problem '" + problem.name +
                             "': differential_unknowns must be empty or one per equation");
        }
        std::vector<bool> seen(n, false);
        for (std::size_t u : problem.differential_unknowns) {
            if (u >= n || seen[u]) {
                throw ShapeError("problem '" + problem.name +
                                 "': differential_unknowns must be distinct indices below n");
            }
            seen[u] = true;
        }
    }
    if (!problem.lower_bounds.empty() && problem.lower_bounds.size() != n) {
        throw ShapeError("problem '" + problem.name + "': lower_bounds must be empty or length n");
    }
    if (!(problem.t_end > 0.0)) {
        throw DomainError("problem '" + problem.name + "': t_end must be positive");
    }
    for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
        const double g = problem.constraints[k](0.0, problem.y0);
        if (!(std::abs(g) <= consistency_tol)) {
            throw DomainError("problem '" + problem.name + "': inconsistent initial values, constraint " +
                              std::to_string(k) + " = " + std::to_string(g) + " at t = 0");
        }
    }
}

NewtonResult newton_solve_node(const ResidualFn& residual, std::span<const double> guess,
                               const SolverConfig& config, std::span<const double> lower_bounds) {
    const std::size_t n = guess.size();
    NewtonResult result;
    result.y.assign(guess.begin(), guess.end());
    result.projection_active = clamp_to(result.y, lower_bounds);

    std::vector<double> r(n), trial(n), r_trial(n), probe(n), r_plus(n), r_minus(n);
    if (!residual(result.y, r)) {
        const std::size_t bad = first_non_finite(r);
        throw EvaluationError("non-finite residual at initial guess, equation " + std::to_string(bad),
                              0, bad);
    }
    double norm = inf_norm(r);

    Eigen::MatrixXd jac(n, n);
    Eigen::VectorXd rhs(n);
    while (norm > config.newton_tol) {
        if (result.iterations >= config.newton_max_iter) {
            result.status = NewtonStatus::max_iterations;
            result.residual_norm = norm;
            return result;
        }
        // Central differences; one-sided where the backward probe leaves the
        // admissible region.
        for (std::size_t k = 0; k < n; ++k) {
            const double step = config.jacobian_eps * (1.0 + std::abs(result.y[k]));
            probe = result.y;
            probe[k] = result.y[k] + step;
            const bool plus_ok = residual(probe, r_plus);
            probe[k] = result.y[k] - step;
            const bool below = k < lower_bounds.size() && probe[k] < lower_bounds[k];
            const bool minus_ok = !below && residual(probe, r_minus);
            for (std::size_t i = 0; i < n; ++i) {
                if (plus_ok && minus_ok) {
                    jac(i, k) = (r_plus[i] - r_minus[i]) / (2.0 * step);
                } else if (plus_ok) {
                    jac(i, k) = (r_plus[i] - r[i]) / step;
                } else if (minus_ok) {
                    jac(i, k) = (r[i] - r_minus[i]) / step;
                } else {
                    jac(i, k) = std::numeric_limits<double>::quiet_NaN();
                }
            }
        }
        const double scale = jac.cwiseAbs().maxCoeff();
        if (!std::isfinite(scale) || scale == 0.0) {
            result.status = NewtonStatus::singular_jacobian;
            result.residual_norm = norm;
            return result;
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (min_pivot < 1e-14 * scale) {
            result.status = NewtonStatus::singular_jacobian;
            result.residual_norm = norm;
            return result;
        }
        for (std::size_t i = 0; i < n; ++i) {
            rhs(static_cast<Eigen::Index>(i)) = -r[i];
        }
        const Eigen::VectorXd dx = lu.solve(rhs);

        ++result.iterations;
        bool accepted = false;
        for (double lambda = config.damping; lambda >= config.damping_floor; lambda *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = result.y[i] + lambda * dx(static_cast<Eigen::Index>(i));
            }
            const bool projected = clamp_to(trial, lower_bounds);
            if (!residual(trial, r_trial)) {
                continue;
            }
            const double trial_norm = inf_norm(r_trial);
            if (trial_norm < norm) {
                result.y = trial;
                r = r_trial;
                norm = trial_norm;
                result.projection_active = result.projection_active || projected;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            result.residual_norm = norm;
            result.status = norm <= config.newton_tol * config.relaxed_factor
                                ? NewtonStatus::relaxed
                                : NewtonStatus::damping_floor;
            return result;
        }
    }
    result.residual_norm = norm;
    result.status = NewtonStatus::converged;
    return result;
}

IntegralResidualMap::IntegralResidualMap(const FdaeProblem& problem, const Grid& grid)
    : problem_(&problem), grid_(grid) {
    const std::size_t m = grid.m();
    ws_.resize(problem.n_diff());
    wt_.resize(problem.n_diff());
    for (std::size_t eq = 0; eq < problem.n_diff(); ++eq) {
        const double a = problem.orders[eq];
        check_order(a);
        const double sa = s_scale(a, grid.h());
        const double ta = t_scale(a, grid.h());
        ws_[eq].resize(m + 1);
        wt_[eq].resize(m + 1);
        for (std::size_t k = 0; k <= m; ++k) {
            ws_[eq][k] = sa * ss_weight(a, k);
            wt_[eq][k] = ta * ts_weight(a, k);
        }
    }
    f_hist_.assign(problem.n_diff(), {});
    history_.assign(problem.n_diff(), 0.0);
}

std::vector<double> IntegralResidualMap::residual_at(std::span<const double> trajectory,
                                                     std::size_t j) const {
    const FdaeProblem& p = *problem_;
    const std::size_t n = p.n();
    if (j == 0 || j > grid_.m()) {
        throw DomainError("residual_at: node index must lie in [1, m]");
    }
    if (trajectory.size() < (j + 1) * n) {
        throw ShapeError("residual_at: trajectory shorter than node " + std::to_string(j));
    }
    auto at_node = [&](std::size_t k) { return trajectory.subspan(k * n, n); };

    std::vector<double> out(n);
    const auto yj = at_node(j);
    std::vector<double> f(j + 1);
    for (std::size_t eq = 0; eq < p.n_diff(); ++eq) {
        for (std::size_t k = 0; k <= j; ++k) {
            f[k] = p.rhs[eq](grid_.node(k), at_node(k));
        }
        double integral = 0.0;
        for (std::size_t k = 0; k < j; ++k) {
            integral += f[k] * weight_s(eq, j - k) + (f[k + 1] - f[k]) * weight_t(eq, j - k);
        }
        const std::size_t u = p.unknown_of(eq);
        out[eq] = yj[u] - p.y0[u] - integral;
    }
    for (std::size_t c = 0; c < p.constraints.size(); ++c) {
        out[p.n_diff() + c] = p.constraints[c](grid_.node(j), yj);
    }
    return out;
}

void IntegralResidualMap::begin_node(std::size_t j) {
    if (j == 0 || j != current_) {
        throw DomainError("begin_node: expected node " + std::to_string(current_) + ", got " +
                          std::to_string(j));
    }
    for (std::size_t eq = 0; eq < problem_->n_diff(); ++eq) {
        const auto& f = f_hist_[eq];
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < j; ++k) {
            acc += f[k] * weight_s(eq, j - k) + (f[k + 1] - f[k]) * weight_t(eq, j - k);
        }
        // Last cell: its T-coefficient f_j - f_{j-1} couples to the unknowns;
        // only the -f_{j-1} part is history.
        acc += f[j - 1] * weight_s(eq, 1) - f[j - 1] * weight_t(eq, 1);
        history_[eq] = acc;
    }
}

bool IntegralResidualMap::node_residual(std::span<const double> y, std::span<double> out) const {
    const FdaeProblem& p = *problem_;
    const double t = grid_.node(current_);
    for (std::size_t eq = 0; eq < p.n_diff(); ++eq) {
        const double fj = p.rhs[eq](t, y);
        const std::size_t u = p.unknown_of(eq);
        out[eq] = y[u] - p.y0[u] - history_[eq] - weight_t(eq, 1) * fj;
    }
    for (std::size_t c = 0; c < p.constraints.size(); ++c) {
        out[p.n_diff() + c] = p.constraints[c](t, y);
    }
    return first_non_finite(out) == out.size();
}

void IntegralResidualMap::commit(std::span<const double> y) {
    if (current_ > grid_.m()) {
        throw DomainError("commit: all nodes already committed");
    }
    const double t = grid_.node(current_);
    for (std::size_t eq = 0; eq < problem_->n_diff(); ++eq) {
        const double f = problem_->rhs[eq](t, y);
        if (!std::isfinite(f)) {
            throw EvaluationError("non-finite right-hand side " + std::to_string(eq) + " at node " +
                                      std::to_string(current_),
                                  current_, eq);
        }
        f_hist_[eq].push_back(f);
    }
    ++current_;
}

std::vector<double> SolutionGrid::unknown(std::size_t i) const {
    const std::size_t stride = grid.m() + 1;
    return {y.begin() + static_cast<std::ptrdiff_t>(i * stride),
            y.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride)};
}

std::vector<double> SolutionGrid::node(std::size_t j) const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = at(i, j);
    }
    return out;
}

std::size_t SolutionGrid::relaxed_nodes() const {
    return static_cast<std::size_t>(
        std::count(node_status.begin(), node_status.end(), NewtonStatus::relaxed));
}

SolutionGrid solve(const FdaeProblem& problem, const SolverConfig& config) {
    validate(problem);
    if (config.m == 0) {
        throw DomainError("solver needs m >= 1");
    }
    const Grid grid = Grid::over(problem.t_end, config.m);
    const std::size_t m = grid.m();
    const std::size_t n = problem.n();

    SolutionGrid sol;
    sol.grid = grid;
    sol.n = n;
    sol.y.assign(n * (m + 1), std::numeric_limits<double>::quiet_NaN());
    sol.newton_iters.assign(m + 1, 0);
    sol.residuals.assign(m + 1, std::numeric_limits<double>::quiet_NaN());
    sol.node_status.assign(m + 1, NewtonStatus::converged);
    sol.projection_active.assign(m + 1, false);

    double g0 = 0.0;
    for (const auto& g : problem.constraints) {
        g0 = std::max(g0, std::abs(g(0.0, problem.y0)));
    }
    for (std::size_t i = 0; i < n; ++i) {
        sol.at(i, 0) = problem.y0[i];
    }
    sol.residuals[0] = g0;

    IntegralResidualMap map(problem, grid);
    map.commit(problem.y0);

    std::vector<double> guess(problem.y0);
    const ResidualFn residual = [&map](std::span<const double> y, std::span<double> out) {
        return map.node_residual(y, out);
    };
    for (std::size_t j = 1; j <= m; ++j) {
        map.begin_node(j);
        NewtonResult step;
        try {
            step = newton_solve_node(residual, guess, config, problem.lower_bounds);
        } catch (const EvaluationError& e) {
            throw EvaluationError("node " + std::to_string(j) + ": " + e.what(), j, e.equation());
        }
        sol.newton_iters[j] = step.iterations;
        sol.residuals[j] = step.residual_norm;
        sol.node_status[j] = step.status;
        sol.projection_active[j] = step.projection_active;
        if (!step.ok()) {
            sol.status = SolveStatus::node_failure;
            sol.failed_node = j;
            return sol;
        }
        for (std::size_t i = 0; i < n; ++i) {
            sol.at(i, j) = step.y[i];
        }
        map.commit(step.y);
        guess = step.y;
    }
    return sol;
}

std::vector<double> error_report(const SolutionGrid& solution,
                                 std::span<const std::function<double(double)>> exact) {
    if (exact.size() != solution.n) {
        throw ShapeError("error_report: need one exact function per unknown");
    }
    std::vector<double> out(solution.n, 0.0);
    for (std::size_t i = 0; i < solution.n; ++i) {
        for (std::size_t j = 0; j <= solution.grid.m(); ++j) {
            const double e = std::abs(solution.at(i, j) - exact[i](solution.grid.node(j)));
            out[i] = std::max(out[i], e);
        }
    }
    return out;
}

std::vector<double> constraint_residuals(const FdaeProblem& problem, const SolutionGrid& solution) {
    std::vector<double> out(problem.constraints.size(), 0.0);
    for (std::size_t j = 0; j <= solution.grid.m(); ++j) {
        const auto y = solution.node(j);
        for (std::size_t c = 0; c < out.size(); ++c) {
            out[c] = std::max(out[c], std::abs(problem.constraints[c](solution.grid.node(j), y)));
        }
    }
    return out;
}

std::vector<double> t_equation_defects(const FdaeProblem& problem, const SolutionGrid& solution) {
    const Grid& grid = solution.grid;
    const std::size_t m = grid.m();
    std::vector<double> out(problem.n_diff(), 0.0);
    std::vector<double> f(m + 1);
    for (std::size_t eq = 0; eq < problem.n_diff(); ++eq) {
        const OpMatrixSet ops = build_op_matrices(problem.orders[eq], grid);
        for (std::size_t j = 0; j <= m; ++j) {
            f[j] = problem.rhs[eq](grid.node(j), solution.node(j));
        }
        const HfSeries fs = HfSeries::from_samples(grid, f);
        auto predicted = toeplitz_apply(fs.cs(), ops.p_st);
        const auto from_t = toeplitz_apply(fs.ds(), ops.p_tt);
        for (std::size_t i = 0; i < m; ++i) {
            predicted[i] += from_t[i];
            const std::size_t u = problem.unknown_of(eq);
            const double actual = solution.at(u, i + 1) - solution.at(u, i);
            out[eq] = std::max(out[eq], std::abs(actual - predicted[i]));
        }
    }
    return out;
}

}  // namespace hfdae
