#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hfdae/dae_solver.hpp"

namespace hfdae {

enum class ProblemId { ex1, ex2, ex3, ex4, ex5_akzo };

inline constexpr std::array<ProblemId, 5> kAllProblems = {
    ProblemId::ex1, ProblemId::ex2, ProblemId::ex3, ProblemId::ex4, ProblemId::ex5_akzo};

std::string_view to_string(ProblemId id);

/// Throws CatalogError for unknown names.
ProblemId parse_problem_id(std::string_view name);

/// Rate constants of the fractional Akzo Nobel reaction system.
struct AkzoParams {
    double k1 = 18.7;
    double k2 = 0.58;
    double k3 = 0.09;
    double k4 = 0.42;
    double ks = 115.83;
    double k_eq = 34.4;
    double kla = 3.3;
    double henry = 737.0;
    double p_co2 = 0.9;
};

/// Builds one of the catalog problems with every differential equation of
/// order alpha. ex1 and ex2 carry forcing terms constructed for alpha = 0.5;
/// other orders are accepted but the closed-form solutions then do not apply.
FdaeProblem build_problem(ProblemId id, double alpha);

FdaeProblem build_akzo(double alpha, const AkzoParams& params = {});

}  // namespace hfdae
