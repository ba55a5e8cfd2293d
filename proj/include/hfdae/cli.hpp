#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hfdae/dae_solver.hpp"
#include "hfdae/problems.hpp"

namespace hfdae::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunRecord {
    ProblemId problem = ProblemId::ex1;
    double alpha = 1.0;
    std::size_t m = 0;
    /// Present iff a closed-form solution exists for (problem, alpha).
    std::optional<std::vector<double>> max_errors;
    double wall_seconds = 0.0;
    SolveStatus status = SolveStatus::converged;
    std::size_t failed_node = 0;
    std::size_t total_newton_iters = 0;
    std::size_t max_newton_iters = 0;
    std::size_t relaxed_nodes = 0;
    std::size_t projected_nodes = 0;
};

/// Builds, solves and scores one catalog problem.
RunRecord run_problem(ProblemId id, double alpha, std::size_t m, SolutionGrid* solution = nullptr);

/// Node table as comma-separated text: header t,y1..yn[,err1..errn], one row
/// per node, every value with 17 significant digits.
void write_solution_csv(std::ostream& out, const SolutionGrid& solution,
                        const std::vector<std::function<double(double)>>* exact = nullptr);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);

/// Fitted order log(e_i / e_{i+1}) / log(m_{i+1} / m_i).
double fitted_order(double e_coarse, double e_fine, std::size_t m_coarse, std::size_t m_fine);

int cmd_solve(ProblemId id, double alpha, std::size_t m, const std::string& out_path,
              std::ostream& out, std::ostream& diag);
int cmd_table(ProblemId id, double alpha, const std::vector<std::size_t>& m_list, std::ostream& out,
              std::ostream& diag);
int cmd_convergence(ProblemId id, double alpha, const std::vector<std::size_t>& m_list,
                    std::ostream& out, std::ostream& diag);
int cmd_matrices(double alpha, std::size_t m, const std::string& which, double t_end,
                 std::ostream& out, std::ostream& diag);

/// Parses argv and dispatches to the commands above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& diag);

}  // namespace hfdae::cli
