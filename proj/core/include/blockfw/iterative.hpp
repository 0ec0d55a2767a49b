#ifndef BLOCKFW_ITERATIVE_HPP
#define BLOCKFW_ITERATIVE_HPP

#include <iosfwd>

#include "blockfw/subproblem.hpp"

namespace blockfw {

struct IterationRecord {
    int t = 0;
    double bound = 0.0;
    double basis_shift = 0.0;     // regularization chol_psd needed on this iterate
    double min_eig_iterate = 0.0; // witness for the strict-progress hypothesis
    SolveStatus solver_status = SolveStatus::Optimal;
    double wall_ms = 0.0;
    double iterate_norm = 0.0;    // spectral norm; not serialized
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    bool exact_solve = false;  // two-block partitions collapse to one full solve

    /// CSV with header "t,bound,basis_shift,min_eig,status,wall_ms".
    void write_csv(std::ostream& out) const;
};

struct RunConfig {
    Partition partition;
    int t_max = 10;
    double stop_tol = 1e-9;  // relative bound-improvement stop
    IpmSettings ipm;
};

/// SolverFailure carrying whatever trace was completed before the failure.
class SolverFailureWithTrace : public SolverFailure {
public:
    SolverFailureWithTrace(const std::string& msg, IterationTrace trace)
        : SolverFailure(msg), trace_(std::move(trace)) {}
    const IterationTrace& partial_trace() const { return trace_; }

private:
    IterationTrace trace_;
};

struct InnerRun {
    IterationTrace trace;
    double best_upper = 0.0;
    SymMatrix x_best;
};

struct OuterRun {
    IterationTrace trace;
    double best_lower = 0.0;
    Eigen::VectorXd y_best;
};

/// Upper-bound iteration: scattered subproblem solves with basis updates from
/// Cholesky factors of the full-space iterate.
InnerRun run_inner(const SdpProblem& prob, const RunConfig& cfg);

/// Lower-bound iteration: dualized outer solves with basis updates from
/// Cholesky factors of the dual slack C - sum_i y_i A_i.
OuterRun run_outer(const SdpProblem& prob, const RunConfig& cfg);

struct StrictFlag {
    int t;
    bool holds;
};

/// Flags the iterations whose iterate was safely positive definite, i.e.
/// where strict bound progress is guaranteed away from the optimum.
std::vector<StrictFlag> check_strict_hypotheses(const IterationTrace& trace);

} // namespace blockfw

#endif
