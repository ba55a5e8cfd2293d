#include "hfdae/oracles.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "hfdae/errors.hpp"
#include "hfdae/frac_ops.hpp"

namespace hfdae::oracles {

double rl_integral_power(double p, double alpha, double t) {
    if (p < 0.0 || t < 0.0 || !(alpha > 0.0)) {
        throw DomainError("rl_integral_power needs p >= 0, alpha > 0, t >= 0");
    }
    if (t == 0.0) {
        return 0.0;
    }
    return std::exp(std::lgamma(p + 1.0) - std::lgamma(p + alpha + 1.0)) * std::pow(t, p + alpha);
}

double rl_integral_quadrature(const std::function<double(double)>& f, double alpha, double t,
                              const QuadratureSpec& spec) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("rl_integral_quadrature needs 0 < alpha <= 1");
    }
    if (t < 0.0) {
        throw DomainError("rl_integral_quadrature needs t >= 0");
    }
    if (spec.panels == 0 || !(spec.tol > 0.0)) {
        throw DomainError("quadrature spec needs panels >= 1 and tol > 0");
    }
    if (t == 0.0) {
        return 0.0;
    }
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const double upper = std::pow(t, alpha);
    const double inv_alpha = 1.0 / alpha;
    auto integrand = [&](double u) {
        // Clamp so rounding never pushes tau below 0.
        const double tau = std::max(0.0, t - std::pow(u, inv_alpha));
        return f(tau);
    };
    auto composite = [&](std::size_t panels) {
        const double width = upper / static_cast<double>(panels);
        double sum = 0.0;
        for (std::size_t k = 0; k < panels; ++k) {
            const double a = width * static_cast<double>(k);
            const double b = k + 1 == panels ? upper : a + width;
            sum += Rule::integrate(integrand, a, b);
        }
        return sum;
    };

    const double scale = 1.0 / std::tgamma(alpha + 1.0);
    std::size_t panels = spec.panels;
    double previous = scale * composite(panels);
    while (panels < spec.max_panels) {
        panels *= 2;
        const double current = scale * composite(panels);
        if (!std::isfinite(current)) {
            break;
        }
        if (std::abs(current - previous) < spec.tol) {
            return current;
        }
        previous = current;
    }
    throw OracleError("rl_integral_quadrature did not settle within " +
                      std::to_string(spec.max_panels) + " panels (t = " + std::to_string(t) +
                      ", alpha = " + std::to_string(alpha) + ")");
}

SolutionGrid implicit_euler_dae(const FdaeProblem& problem, std::size_t m,
                                const SolverConfig& config) {
    validate(problem);
    for (double a : problem.orders) {
        if (a != 1.0) {
            throw DomainError("implicit_euler_dae requires every order to be 1");
        }
    }
    const Grid grid = Grid::over(problem.t_end, m);
    const std::size_t n = problem.n();
    const double h = grid.h();

    SolutionGrid sol;
    sol.grid = grid;
    sol.n = n;
    sol.y.assign(n * (m + 1), std::numeric_limits<double>::quiet_NaN());
    sol.newton_iters.assign(m + 1, 0);
    sol.residuals.assign(m + 1, 0.0);
    sol.node_status.assign(m + 1, NewtonStatus::converged);
    sol.projection_active.assign(m + 1, false);
    for (std::size_t i = 0; i < n; ++i) {
        sol.at(i, 0) = problem.y0[i];
    }

    std::vector<double> prev(problem.y0);
    double t = 0.0;
    const ResidualFn residual = [&](std::span<const double> y, std::span<double> out) {
        for (std::size_t e = 0; e < problem.n_diff(); ++e) {
            const std::size_t u = problem.unknown_of(e);
            out[e] = y[u] - prev[u] - h * problem.rhs[e](t, y);
        }
        for (std::size_t c = 0; c < problem.constraints.size(); ++c) {
            out[problem.n_diff() + c] = problem.constraints[c](t, y);
        }
        for (double v : out) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
        return true;
    };

    for (std::size_t j = 1; j <= m; ++j) {
        t = grid.node(j);
        NewtonResult step;
        try {
            step = newton_solve_node(residual, prev, config, problem.lower_bounds);
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
        prev = step.y;
    }
    return sol;
}

std::optional<ExactSolution> exact_solution(ProblemId id, double alpha) {
    switch (id) {
        case ProblemId::ex1:
            if (alpha != 0.5) {
                return std::nullopt;
            }
            return ExactSolution{
                [](double t) { return std::pow(t, 2.5); },
                [](double t) { return t * t; },
                [](double t) { return std::sin(t); },
            };
        case ProblemId::ex2:
            if (alpha != 0.5) {
                return std::nullopt;
            }
            return ExactSolution{
                [](double t) { return t * t * t; },
                [](double t) { return 2.0 * t + std::pow(t, 4); },
                [](double t) { return std::exp(t) + t * std::sin(t); },
            };
        case ProblemId::ex3:
            if (alpha != 1.0) {
                return std::nullopt;
            }
            return ExactSolution{
                [](double t) { return std::exp(t); },
                [](double t) { return std::exp(2.0 * t); },
                [](double t) { return std::exp(-t); },
            };
        case ProblemId::ex4:
            if (alpha != 1.0) {
                return std::nullopt;
            }
            return ExactSolution{
                [](double t) { return t * t; },
                [](double t) { return std::pow(t, 4); },
                [](double t) { return 2.0 * t * t * t + t + 1.0; },
            };
        case ProblemId::ex5_akzo:
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace hfdae::oracles
