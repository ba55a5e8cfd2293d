#pragma once

// Reference computations that share no code path with the hybrid-function
// operators: closed-form integrals of monomials, direct quadrature of the
// Riemann-Liouville integral and a backward-Euler DAE integrator.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hfdae/dae_solver.hpp"
#include "hfdae/problems.hpp"

namespace hfdae::oracles {

/// J^alpha t^p = Gamma(p+1)/Gamma(p+alpha+1) t^(p+alpha).
double rl_integral_power(double p, double alpha, double t);

struct QuadratureSpec {
    /// Starting panel count; doubled until two estimates agree within tol.
    std::size_t panels = 1;
    double tol = 1e-12;
    std::size_t max_panels = std::size_t{1} << 17;
};

/// J^alpha f(t) by the substitution u = (t - tau)^alpha, which turns the
/// integral into (1/Gamma(alpha+1)) * int_0^{t^alpha} f(t - u^{1/alpha}) du,
/// followed by composite 20-point Gauss-Legendre. Throws OracleError if the
/// panel cap is reached before the estimates settle.
double rl_integral_quadrature(const std::function<double(double)>& f, double alpha, double t,
                              const QuadratureSpec& spec = {});

/// Backward Euler on a problem whose orders are all 1; constraints are
/// enforced at every node with the same Newton kernel as the HF solver.
SolutionGrid implicit_euler_dae(const FdaeProblem& problem, std::size_t m,
                                const SolverConfig& config = {});

using ExactSolution = std::vector<std::function<double(double)>>;

/// Closed-form solutions where they are known: ex1 and ex2 at alpha = 0.5,
/// ex3 and ex4 at alpha = 1. Empty otherwise.
std::optional<ExactSolution> exact_solution(ProblemId id, double alpha);

}  // namespace hfdae::oracles
