#include "hfdae/problems.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hfdae/errors.hpp"
#include "hfdae/frac_ops.hpp"

namespace hfdae {

namespace {

using Y = std::span<const double>;

FdaeProblem linear_ex1(double alpha) {
    const double g35_half = gamma_fn(3.5) / 2.0;
    const double two_over_g25 = 2.0 / gamma_fn(2.5);
    FdaeProblem p;
    p.name = "ex1";
    p.orders = {alpha, alpha};
    p.rhs = {
        [=](double t, Y y) {
            return -2.0 * y[0] + g35_half * y[1] - y[2] + 2.0 * std::pow(t, 2.5) + std::sin(t);
        },
        [=](double t, Y y) {
            return -y[1] - y[2] + two_over_g25 * std::pow(t, 1.5) + t * t + std::sin(t);
        },
    };
    p.constraints = {
        [](double t, Y y) {
            return 2.0 * std::pow(t, 2.5) + t * t - std::sin(t) - (2.0 * y[0] + y[1] - y[2]);
        },
    };
    p.y0 = {0.0, 0.0, 0.0};
    p.unknown_names = {"x1", "x2", "x3"};
    return p;
}

FdaeProblem nonlinear_ex2(double alpha) {
    const double c1 = 6.0 / gamma_fn(3.5);
    const double c2 = gamma_fn(5.0) / gamma_fn(4.5);
    const double c3 = 2.0 / gamma_fn(1.5);
    FdaeProblem p;
    p.name = "ex2";
    p.orders = {alpha, alpha};
    p.rhs = {
        // The forcing carries -t sin t; with -sin t the stated closed form
        // does not satisfy the equation.
        [=](double t, Y y) {
            return -y[0] * y[1] + y[2] + c1 * std::pow(t, 2.5) + 2.0 * std::pow(t, 4) +
                   std::pow(t, 7) - std::exp(t) - t * std::sin(t);
        },
        [=](double t, Y y) {
            const double forcing = 4.0 * t + 2.0 * std::pow(t, 4) + std::pow(t, 3) * std::exp(t) +
                                   std::pow(t, 4) * std::sin(t);
            return c2 * std::sqrt(t) * y[0] - 2.0 * y[1] - y[0] * y[2] + c3 * std::sqrt(t) + forcing;
        },
    };
    p.constraints = {
        [](double t, Y y) {
            return std::exp(t) + t * std::sin(t) - 2.0 * t * t * t -
                   (y[0] * y[0] - y[1] * t * t + y[2]);
        },
    };
    p.y0 = {0.0, 0.0, 1.0};
    p.unknown_names = {"x1", "x2", "x3"};
    return p;
}

// Unknowns (x, y, z); x and z are differential, y algebraic.
FdaeProblem nonlinear_ex3(double alpha) {
    FdaeProblem p;
    p.name = "ex3";
    p.orders = {alpha, alpha};
    p.rhs = {
        [](double, Y y) { return 1.0 + y[0] - y[2] * y[0]; },
        [](double, Y y) { return y[1] - y[0] * y[0] - y[2]; },
    };
    p.differential_unknowns = {0, 2};
    p.constraints = {
        [](double, Y y) { return y[1] - y[0] * y[0]; },
    };
    p.y0 = {1.0, 1.0, 1.0};
    p.unknown_names = {"x", "y", "z"};
    return p;
}

// Unknowns (x, y, z); x and y are differential, z algebraic.
FdaeProblem linear_ex4(double alpha) {
    FdaeProblem p;
    p.name = "ex4";
    p.orders = {alpha, alpha};
    p.rhs = {
        [](double t, Y y) { return t * t * y[0] - y[1] + 2.0 * t; },
        [](double t, Y y) { return 2.0 * y[2] - 2.0 * (t + 1.0); },
    };
    p.constraints = {
        [](double t, Y y) { return y[2] - y[1] - 2.0 * t * y[0] + std::pow(t, 4) - t - 1.0; },
    };
    p.y0 = {0.0, 0.0, 1.0};
    p.unknown_names = {"x", "y", "z"};
    return p;
}

}  // namespace

std::string_view to_string(ProblemId id) {
    switch (id) {
        case ProblemId::ex1: return "ex1";
        case ProblemId::ex2: return "ex2";
        case ProblemId::ex3: return "ex3";
        case ProblemId::ex4: return "ex4";
        case ProblemId::ex5_akzo: return "ex5_akzo";
    }
    return "?";
}

ProblemId parse_problem_id(std::string_view name) {
    for (ProblemId id : kAllProblems) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw CatalogError("unknown problem '" + std::string(name) +
                       "' (expected ex1, ex2, ex3, ex4 or ex5_akzo)");
}

FdaeProblem build_akzo(double alpha, const AkzoParams& k) {
    // The CO2 inflow drives y2 towards the saturation level p(CO2)/H.
    const double saturation = k.p_co2 / k.henry;
    FdaeProblem p;
    p.name = "ex5_akzo";
    p.orders.assign(5, alpha);

    struct Rates {
        double r1, r2, r3, r4, r5, inflow;
    };
    auto rates = [=](Y y) {
        const double sq = std::sqrt(y[1]);
        return Rates{k.k1 * std::pow(y[0], 4) * sq,
                     k.k2 * y[2] * y[3],
                     k.k2 / k.k_eq * y[0] * y[4],
                     k.k3 * y[0] * y[3] * y[3],
                     k.k4 * y[5] * y[5] * sq,
                     k.kla * (saturation - y[1])};
    };
    p.rhs = {
        [=](double, Y y) {
            const auto r = rates(y);
            return -2.0 * r.r1 + r.r2 - r.r3 - r.r4;
        },
        [=](double, Y y) {
            const auto r = rates(y);
            return -0.5 * r.r1 - r.r4 - 0.5 * r.r5 + r.inflow;
        },
        [=](double, Y y) {
            const auto r = rates(y);
            return r.r1 - r.r2 + r.r3;
        },
        [=](double, Y y) {
            const auto r = rates(y);
            return -r.r2 + r.r3 - 2.0 * r.r4;
        },
        [=](double, Y y) {
            const auto r = rates(y);
            return r.r2 - r.r3 + r.r5;
        },
    };
    p.constraints = {
        [=](double, Y y) { return k.ks * y[0] * y[3] - y[5]; },
    };
    p.y0 = {0.444, 0.00123, 0.0, 0.007, 0.0, k.ks * 0.444 * 0.007};
    constexpr double kFree = -std::numeric_limits<double>::infinity();
    p.lower_bounds = {kFree, 1e-12, kFree, kFree, kFree, kFree};
    p.unknown_names = {"y1", "y2", "y3", "y4", "y5", "y6"};
    return p;
}

FdaeProblem build_problem(ProblemId id, double alpha) {
    check_order(alpha);
    switch (id) {
        case ProblemId::ex1: return linear_ex1(alpha);
        case ProblemId::ex2: return nonlinear_ex2(alpha);
        case ProblemId::ex3: return nonlinear_ex3(alpha);
        case ProblemId::ex4: return linear_ex4(alpha);
        case ProblemId::ex5_akzo: return build_akzo(alpha);
    }
    throw CatalogError("unknown problem id");
}

}  // namespace hfdae
