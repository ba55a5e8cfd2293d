#pragma once

// Semi-explicit fractional DAE solver.
//
//   D^{a_i} y_i = f_i(t, y),  i < n_diff      (Caputo, 0 < a_i <= 1)
//   0           = g_k(t, y),  k < n - n_diff
//
// Each differential equation is used in integral form y_i = y_i(0) + J^{a_i} f_i,
// with J^{a_i} f_i replaced by its hybrid-function estimate. Because the
// operational matrices are upper-triangular Toeplitz, the coefficient
// equations at node j involve unknowns at nodes <= j only, so the grid is
// solved node by node with a damped Newton iteration at each node.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hfdae/hf_core.hpp"

namespace hfdae {

/// f(t, y) or g(t, y) with y the full vector of unknowns.
using StateFn = std::function<double(double, std::span<const double>)>;

struct FdaeProblem {
    std::string name;
    /// Caputo order of each differential equation.
    std::vector<double> orders;
    std::vector<StateFn> rhs;
    /// Unknown whose derivative rhs[e] defines; empty means unknown e.
    std::vector<std::size_t> differential_unknowns;
    /// Algebraic equations; they determine the remaining unknowns.
    std::vector<StateFn> constraints;
    std::vector<double> y0;
    double t_end = 1.0;
    /// Optional per-unknown lower bounds enforced on Newton iterates.
    std::vector<double> lower_bounds;
    std::vector<std::string> unknown_names;

    std::size_t n() const noexcept { return y0.size(); }
    std::size_t n_diff() const noexcept { return rhs.size(); }
    std::size_t unknown_of(std::size_t eq) const {
        return differential_unknowns.empty() ? eq : differential_unknowns[eq];
    }
};

/// Throws if sizes or orders are inconsistent, or if a constraint exceeds
/// `consistency_tol` at t = 0.
void validate(const FdaeProblem& problem, double consistency_tol = 1e-12);

struct SolverConfig {
    std::size_t m = 100;
    double newton_tol = 1e-12;
    std::size_t newton_max_iter = 50;
    /// Initial step fraction of each Newton step; halved while the residual
    /// norm does not decrease.
    double damping = 1.0;
    double damping_floor = 1.0 / 64.0;
    /// Central-difference step is jacobian_eps * (1 + |y_k|).
    double jacobian_eps = 1.4901161193847656e-08;
    /// A node that stalls at the damping floor is accepted when its residual
    /// is within newton_tol * relaxed_factor; it is flagged as relaxed.
    double relaxed_factor = 100.0;
};

enum class NewtonStatus { converged, relaxed, max_iterations, singular_jacobian, damping_floor };

const char* to_string(NewtonStatus status);

struct NewtonResult {
    std::vector<double> y;
    std::size_t iterations = 0;
    double residual_norm = 0.0;
    NewtonStatus status = NewtonStatus::converged;
    bool projection_active = false;

    bool ok() const noexcept {
        return status == NewtonStatus::converged || status == NewtonStatus::relaxed;
    }
};

/// Residual callback: writes F(y) into `out` and returns false if any entry
/// is not finite.
using ResidualFn = std::function<bool(std::span<const double> y, std::span<double> out)>;

/// Damped Newton with a finite-difference Jacobian and partially pivoted LU.
/// Trial iterates are clamped to `lower_bounds` when given. Throws
/// EvaluationError (node 0, first non-finite equation) if the residual at
/// `guess` is not finite.
NewtonResult newton_solve_node(const ResidualFn& residual, std::span<const double> guess,
                               const SolverConfig& config,
                               std::span<const double> lower_bounds = {});

/// Residuals of the discretised integral form at one node.
///
/// For differential unknown i the residual at node j >= 1 is
///   y_i(t_j) - y_i(0) - [C_S P_ss + C_T P_ts]_j
/// where C_S, C_T are the coefficients of f_i sampled along the trajectory
/// (the node-m row uses the tail of the integrated series). Constraint rows
/// are g_k(t_j, y(t_j)).
class IntegralResidualMap {
public:
    IntegralResidualMap(const FdaeProblem& problem, const Grid& grid);

    const FdaeProblem& problem() const noexcept { return *problem_; }
    const Grid& grid() const noexcept { return grid_; }

    /// Residual vector at node j >= 1 of a full trajectory laid out as
    /// trajectory[k * n + i] for node k, unknown i. Only nodes <= j are read.
    std::vector<double> residual_at(std::span<const double> trajectory, std::size_t j) const;

    // Marching interface used by solve().

    /// Prepares the history term of node j from committed nodes 0..j-1.
    void begin_node(std::size_t j);
    /// Residual at the current node for trial values y; false on a
    /// non-finite entry.
    bool node_residual(std::span<const double> y, std::span<double> out) const;
    /// Records accepted node values (the next node to be prepared is the
    /// number of committed nodes).
    void commit(std::span<const double> y);

private:
    double weight_s(std::size_t eq, std::size_t k) const { return ws_[eq][k]; }
    double weight_t(std::size_t eq, std::size_t k) const { return wt_[eq][k]; }

    const FdaeProblem* problem_;
    Grid grid_;
    // Scaled kernel weights per differential equation, indices 0..m.
    std::vector<std::vector<double>> ws_;
    std::vector<std::vector<double>> wt_;

    // Marching state.
    std::size_t current_ = 0;
    std::vector<std::vector<double>> f_hist_;  // f_hist_[eq][k]
    std::vector<double> history_;              // per differential equation
};

enum class SolveStatus { converged, node_failure };

struct SolutionGrid {
    Grid grid = Grid::over(1.0, 1);
    std::size_t n = 0;
    /// Node values, y[i * (m+1) + j].
    std::vector<double> y;
    std::vector<std::size_t> newton_iters;
    std::vector<double> residuals;
    std::vector<NewtonStatus> node_status;
    std::vector<bool> projection_active;
    SolveStatus status = SolveStatus::converged;
    /// First failing node when status == node_failure.
    std::size_t failed_node = 0;

    double at(std::size_t i, std::size_t j) const { return y[i * (grid.m() + 1) + j]; }
    double& at(std::size_t i, std::size_t j) { return y[i * (grid.m() + 1) + j]; }
    std::vector<double> unknown(std::size_t i) const;
    std::vector<double> node(std::size_t j) const;
    bool converged() const noexcept { return status == SolveStatus::converged; }
    std::size_t relaxed_nodes() const;
};

/// Marches nodes 1..m. Never returns silently wrong values: a node that fails
/// to converge stops the march and sets status = node_failure.
SolutionGrid solve(const FdaeProblem& problem, const SolverConfig& config);

/// Max absolute node error per unknown.
std::vector<double> error_report(const SolutionGrid& solution,
                                 std::span<const std::function<double(double)>> exact);

/// Max over nodes of |g_k(t_j, y_j)| per constraint.
std::vector<double> constraint_residuals(const FdaeProblem& problem, const SolutionGrid& solution);

/// Defect of the T-coefficient equations d_i = [C_S P_st + C_T P_tt]_i for
/// every differential unknown, evaluated directly from the solved trajectory
/// with full Toeplitz products. Returns the max over cells per equation.
std::vector<double> t_equation_defects(const FdaeProblem& problem, const SolutionGrid& solution);

}  // namespace hfdae
