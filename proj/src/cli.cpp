#include "hfdae/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "hfdae/errors.hpp"
#include "hfdae/frac_ops.hpp"
#include "hfdae/oracles.hpp"

namespace hfdae::cli {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::vector<RunRecord> run_many(ProblemId id, double alpha, const std::vector<std::size_t>& m_list) {
    std::vector<std::future<RunRecord>> jobs;
    jobs.reserve(m_list.size());
    for (std::size_t m : m_list) {
        jobs.push_back(std::async(std::launch::async, [=] { return run_problem(id, alpha, m); }));
    }
    std::vector<RunRecord> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) {
        out.push_back(j.get());
    }
    std::sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) { return a.m < b.m; });
    return out;
}

bool check_exact(ProblemId id, double alpha, std::ostream& diag) {
    if (!oracles::exact_solution(id, alpha)) {
        diag << "error: no closed-form solution for " << to_string(id) << " at alpha = " << alpha
             << " (ex1/ex2 need alpha = 0.5, ex3/ex4 need alpha = 1, ex5_akzo has none)\n";
        return false;
    }
    return true;
}

void report_failure(const RunRecord& r, std::ostream& diag) {
    diag << "solver failure: " << to_string(r.problem) << " alpha=" << r.alpha << " m=" << r.m
         << " failed at node " << r.failed_node << "\n";
}

}  // namespace

RunRecord run_problem(ProblemId id, double alpha, std::size_t m, SolutionGrid* solution) {
    const FdaeProblem problem = build_problem(id, alpha);
    SolverConfig config;
    config.m = m;
    const auto start = std::chrono::steady_clock::now();
    SolutionGrid sol = solve(problem, config);
    const auto stop = std::chrono::steady_clock::now();

    RunRecord r;
    r.problem = id;
    r.alpha = alpha;
    r.m = m;
    r.wall_seconds = std::chrono::duration<double>(stop - start).count();
    r.status = sol.status;
    r.failed_node = sol.failed_node;
    for (std::size_t j = 0; j <= m; ++j) {
        r.total_newton_iters += sol.newton_iters[j];
        r.max_newton_iters = std::max(r.max_newton_iters, sol.newton_iters[j]);
        r.projected_nodes += sol.projection_active[j] ? 1 : 0;
    }
    r.relaxed_nodes = sol.relaxed_nodes();
    if (sol.converged()) {
        if (auto exact = oracles::exact_solution(id, alpha)) {
            r.max_errors = error_report(sol, *exact);
        }
    }
    if (solution != nullptr) {
        *solution = std::move(sol);
    }
    return r;
}

void write_solution_csv(std::ostream& out, const SolutionGrid& solution,
                        const std::vector<std::function<double(double)>>* exact) {
    out << "t";
    for (std::size_t i = 1; i <= solution.n; ++i) {
        out << ",y" << i;
    }
    if (exact != nullptr) {
        for (std::size_t i = 1; i <= solution.n; ++i) {
            out << ",err" << i;
        }
    }
    out << "\n";
    for (std::size_t j = 0; j <= solution.grid.m(); ++j) {
        const double t = solution.grid.node(j);
        out << fmt17(t);
        for (std::size_t i = 0; i < solution.n; ++i) {
            out << "," << fmt17(solution.at(i, j));
        }
        if (exact != nullptr) {
            for (std::size_t i = 0; i < solution.n; ++i) {
                out << "," << fmt17(std::abs(solution.at(i, j) - (*exact)[i](t)));
            }
        }
        out << "\n";
    }
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        return table;
    }
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            table.header.push_back(cell);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (row.size() != table.header.size()) {
            throw ShapeError("csv row has " + std::to_string(row.size()) + " cells, header has " +
                             std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

double fitted_order(double e_coarse, double e_fine, std::size_t m_coarse, std::size_t m_fine) {
    return std::log(e_coarse / e_fine) /
           std::log(static_cast<double>(m_fine) / static_cast<double>(m_coarse));
}

int cmd_solve(ProblemId id, double alpha, std::size_t m, const std::string& out_path,
              std::ostream& out, std::ostream& diag) {
    SolutionGrid sol;
    const RunRecord r = run_problem(id, alpha, m, &sol);
    diag << "solve " << to_string(id) << " alpha=" << alpha << " m=" << m
         << " wall=" << r.wall_seconds << "s newton_iters=" << r.total_newton_iters
         << " relaxed_nodes=" << r.relaxed_nodes << " projected_nodes=" << r.projected_nodes << "\n";
    if (!sol.converged()) {
        report_failure(r, diag);
        return kExitSolverFailure;
    }
    const auto exact = oracles::exact_solution(id, alpha);
    const auto* exact_ptr = exact ? &*exact : nullptr;
    if (out_path.empty()) {
        write_solution_csv(out, sol, exact_ptr);
    } else {
        std::ofstream file(out_path);
        if (!file) {
            diag << "error: cannot open '" << out_path << "' for writing\n";
            return kExitUsage;
        }
        write_solution_csv(file, sol, exact_ptr);
    }
    return kExitOk;
}

int cmd_table(ProblemId id, double alpha, const std::vector<std::size_t>& m_list, std::ostream& out,
              std::ostream& diag) {
    if (m_list.empty()) {
        diag << "error: --m-list needs at least one value\n";
        return kExitUsage;
    }
    if (!check_exact(id, alpha, diag)) {
        return kExitUsage;
    }
    const auto records = run_many(id, alpha, m_list);
    const std::size_t n = build_problem(id, alpha).n();
    out << "m";
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",err" << i;
    }
    out << ",wall_s\n";
    int rc = kExitOk;
    for (const auto& r : records) {
        if (r.status != SolveStatus::converged) {
            report_failure(r, diag);
            rc = kExitSolverFailure;
            continue;
        }
        out << r.m;
        for (double e : *r.max_errors) {
            out << "," << fmt_sci(e);
        }
        out << "," << fmt_sci(r.wall_seconds) << "\n";
    }
    return rc;
}

int cmd_convergence(ProblemId id, double alpha, const std::vector<std::size_t>& m_list,
                    std::ostream& out, std::ostream& diag) {
    if (m_list.size() < 2) {
        diag << "error: convergence needs at least two values in --m-list\n";
        return kExitUsage;
    }
    if (!check_exact(id, alpha, diag)) {
        return kExitUsage;
    }
    const auto records = run_many(id, alpha, m_list);
    for (const auto& r : records) {
        if (r.status != SolveStatus::converged) {
            report_failure(r, diag);
            return kExitSolverFailure;
        }
    }
    const std::size_t n = records.front().max_errors->size();
    out << "m_coarse,m_fine";
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",ratio" << i;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",order" << i;
    }
    out << "\n";
    bool pass = true;
    for (std::size_t k = 0; k + 1 < records.size(); ++k) {
        const auto& a = records[k];
        const auto& b = records[k + 1];
        out << a.m << "," << b.m;
        std::vector<double> orders(n);
        for (std::size_t i = 0; i < n; ++i) {
            out << "," << fmt_sci((*a.max_errors)[i] / (*b.max_errors)[i]);
            orders[i] = fitted_order((*a.max_errors)[i], (*b.max_errors)[i], a.m, b.m);
            pass = pass && orders[i] >= 1.7;
        }
        for (double o : orders) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", o);
            out << "," << buf;
        }
        out << "\n";
    }
    out << (pass ? "PASS" : "FAIL") << "\n";
    return kExitOk;
}

int cmd_matrices(double alpha, std::size_t m, const std::string& which, double t_end,
                 std::ostream& out, std::ostream& diag) {
    const OpMatrixSet ops = build_op_matrices(alpha, Grid::over(t_end, m));
    const UpperToeplitz* mat = nullptr;
    if (which == "ss") {
        mat = &ops.p_ss;
    } else if (which == "st") {
        mat = &ops.p_st;
    } else if (which == "ts") {
        mat = &ops.p_ts;
    } else if (which == "tt") {
        mat = &ops.p_tt;
    } else {
        diag << "error: --which must be one of ss, st, ts, tt\n";
        return kExitUsage;
    }
    for (double v : mat->row()) {
        out << fmt17(v) << "\n";
    }
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& diag) {
    CLI::App app{"Hybrid-function solver for fractional differential-algebraic equations", "hfdae"};
    app.require_subcommand(1);

    std::string problem_name;
    double alpha = 1.0;
    std::size_t m = 0;
    std::vector<std::size_t> m_list;
    std::string out_path;
    std::string which;
    double t_end = 1.0;

    auto positive_order = CLI::Range(0.0, 1.0);
    auto* solve_cmd = app.add_subcommand("solve", "Solve a catalog problem and print the node table");
    solve_cmd->add_option("--problem", problem_name, "ex1|ex2|ex3|ex4|ex5_akzo")->required();
    solve_cmd->add_option("--alpha", alpha, "Caputo order in (0, 1]")->required()->check(positive_order);
    solve_cmd->add_option("--m", m, "Number of subintervals")->required()->check(CLI::PositiveNumber);
    solve_cmd->add_option("--out", out_path, "Output file (default: standard output)");

    auto* table_cmd = app.add_subcommand("table", "Maximal absolute errors for a list of m");
    auto* conv_cmd = app.add_subcommand("convergence", "Error ratios and fitted orders");
    for (auto* sub : {table_cmd, conv_cmd}) {
        sub->add_option("--problem", problem_name, "ex1|ex2|ex3|ex4|ex5_akzo")->required();
        sub->add_option("--alpha", alpha, "Caputo order in (0, 1]")->required()->check(positive_order);
        sub->add_option("--m-list", m_list, "Comma-separated subinterval counts")
            ->required()
            ->delimiter(',')
            ->check(CLI::PositiveNumber);
    }

    auto* mat_cmd = app.add_subcommand("matrices", "Print the first row of an operational matrix");
    mat_cmd->add_option("--alpha", alpha, "Order in (0, 1]")->required()->check(positive_order);
    mat_cmd->add_option("--m", m, "Matrix order")->required()->check(CLI::PositiveNumber);
    mat_cmd->add_option("--which", which, "ss|st|ts|tt")->required();
    mat_cmd->add_option("--t-end", t_end, "Span length, h = t_end / m (default 1)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, diag);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    if (!(alpha > 0.0)) {
        diag << "error: --alpha must be positive\n";
        return kExitUsage;
    }

    try {
        if (*mat_cmd) {
            return cmd_matrices(alpha, m, which, t_end, out, diag);
        }
        const ProblemId id = parse_problem_id(problem_name);
        if (*solve_cmd) {
            return cmd_solve(id, alpha, m, out_path, out, diag);
        }
        if (*table_cmd) {
            return cmd_table(id, alpha, m_list, out, diag);
        }
        return cmd_convergence(id, alpha, m_list, out, diag);
    } catch (const CatalogError& e) {
        diag << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        diag << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EvaluationError& e) {
        diag << "evaluation error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}

}  // namespace hfdae::cli
