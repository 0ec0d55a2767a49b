#include "blockfw/iterative.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace blockfw {

namespace {

struct EigExtremes {
    double min_eig;
    double norm_two;
};

EigExtremes eig_extremes(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.dense(), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev(0), std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)))};
}

double elapsed_ms(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void check_config(const SdpProblem& prob, const RunConfig& cfg) {
    prob.validate();
    if (cfg.partition.total_dim() != prob.n)
        throw DimensionMismatch("run config partition does not match problem dimension");
    if (cfg.t_max < 1) throw Error("t_max must be at least 1");
    if (cfg.stop_tol < 0) throw Error("stop_tol must be nonnegative");
}

double shift_eps(const SymMatrix& iterate) { return 1e-12 * (1.0 + iterate.norm_max()); }

// Allowed bound slack between consecutive iterations: solver tolerance plus
// the feasibility error induced by a shifted basis factorization.
double monotone_slack(double prev_bound, double prev_shift, const SdpProblem& prob) {
    return 1e-7 * (1.0 + std::abs(prev_bound)) +
           prev_shift * std::max(1.0, std::abs(prob.C.trace())) * 10.0;
}

} // namespace

void IterationTrace::write_csv(std::ostream& out) const {
    out << "t,bound,basis_shift,min_eig,status,wall_ms\n";
    char buf[40];
    auto g17 = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const IterationRecord& r : records)
        out << r.t << "," << g17(r.bound) << "," << g17(r.basis_shift) << ","
            << g17(r.min_eig_iterate) << "," << to_string(r.solver_status) << ","
            << g17(r.wall_ms) << "\n";
}

InnerRun run_inner(const SdpProblem& prob, const RunConfig& cfg) {
    check_config(prob, cfg);

    InnerRun out;
    out.trace.exact_solve = cfg.partition.block_count() == 2;
    const int t_max = out.trace.exact_solve ? 1 : cfg.t_max;

    CholFactor basis = CholFactor::identity(prob.n);
    double prev_bound = 0.0;
    double prev_shift = 0.0;

    for (int t = 1; t <= t_max; ++t) {
        const auto start = std::chrono::steady_clock::now();
        const ScatteredSdp scat = scatter(prob, cfg.partition, basis);
        const ConicProgram program = scat.program();
        const IpmSolution sol = solve(program, cfg.ipm);

        if (sol.status == SolveStatus::Infeasible && t == 1)
            throw FirstIterationInfeasible(
                "inner iteration infeasible at t=1; a coarser partition may be feasible");
        if (sol.status != SolveStatus::Optimal)
            throw SolverFailureWithTrace(
                "inner iteration " + std::to_string(t) + ": solver returned " +
                    to_string(sol.status),
                out.trace);

        const BlockCertificate cert = solution_blocks(cfg.partition, program, sol);
        const SymMatrix iterate = gather(cert, basis);
        const double bound = inner(prob.C, iterate);
        const EigExtremes ex = eig_extremes(iterate);
        const CholFactor next = chol_psd(iterate, shift_eps(iterate));

        out.trace.records.push_back({t, bound, next.shift, ex.min_eig, sol.status,
                                     elapsed_ms(start), ex.norm_two});

        if (t >= 2 && bound > prev_bound + monotone_slack(prev_bound, prev_shift, prob))
            throw NumericalTrouble("inner bound regressed beyond tolerance at t=" +
                                   std::to_string(t));

        out.best_upper = bound;
        out.x_best = iterate;

        if (t >= 2 && prev_bound - bound < cfg.stop_tol * (1.0 + std::abs(bound))) break;
        prev_bound = bound;
        prev_shift = next.shift;
        basis = next;
    }
    return out;
}

OuterRun run_outer(const SdpProblem& prob, const RunConfig& cfg) {
    check_config(prob, cfg);

    OuterRun out;
    out.trace.exact_solve = cfg.partition.block_count() == 2;
    const int t_max = out.trace.exact_solve ? 1 : cfg.t_max;

    CholFactor basis = CholFactor::identity(prob.n);
    double prev_bound = 0.0;
    double prev_shift = 0.0;

    for (int t = 1; t <= t_max; ++t) {
        const auto start = std::chrono::steady_clock::now();
        const DualizedOuterSdp outer = build_outer_dual(prob, cfg.partition, basis);
        const IpmSolution sol = solve(outer.program, cfg.ipm);

        if (sol.status == SolveStatus::Infeasible && t == 1)
            throw FirstIterationInfeasible(
                "outer iteration infeasible at t=1; a coarser partition may be feasible");
        if (sol.status != SolveStatus::Optimal)
            throw SolverFailureWithTrace(
                "outer iteration " + std::to_string(t) + ": solver returned " +
                    to_string(sol.status),
                out.trace);

        const Eigen::VectorXd y = sol.free_x(outer.program);
        const double bound = prob.m ? prob.b.dot(y) : 0.0;
        SymMatrix slack = prob.C;
        for (int i = 0; i < prob.m; ++i) slack -= y(i) * prob.A[i];
        const EigExtremes ex = eig_extremes(slack);
        const CholFactor next = chol_psd(slack, shift_eps(slack));

        out.trace.records.push_back({t, bound, next.shift, ex.min_eig, sol.status,
                                     elapsed_ms(start), ex.norm_two});

        if (t >= 2 && bound < prev_bound - monotone_slack(prev_bound, prev_shift, prob))
            throw NumericalTrouble("outer bound regressed beyond tolerance at t=" +
                                   std::to_string(t));

        out.best_lower = bound;
        out.y_best = y;

        if (t >= 2 && bound - prev_bound < cfg.stop_tol * (1.0 + std::abs(bound))) break;
        prev_bound = bound;
        prev_shift = next.shift;
        basis = next;
    }
    return out;
}

std::vector<StrictFlag> check_strict_hypotheses(const IterationTrace& trace) {
    std::vector<StrictFlag> flags;
    flags.reserve(trace.records.size());
    for (const IterationRecord& r : trace.records)
        flags.push_back({r.t, r.min_eig_iterate > 1e-8 * (1.0 + r.iterate_norm)});
    return flags;
}

} // namespace blockfw
