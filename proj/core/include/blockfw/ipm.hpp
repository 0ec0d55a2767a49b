#ifndef BLOCKFW_IPM_HPP
#define BLOCKFW_IPM_HPP

#include <optional>
#include <vector>

#include "blockfw/linalg.hpp"
#include "blockfw/sdp_model.hpp"

namespace blockfw {

/// Standard-form conic program over a product of PSD blocks plus free scalar
/// variables:
///
///   minimize    objective . x
///   subject to  A_rows x == b,   x = (svec(X_1), ..., svec(X_K), x_free),
///               X_k psd, x_free unconstrained.
///
/// Block svec segments come first, in block order; free columns trail.
struct ConicProgram {
    std::vector<int> block_dims;
    int free_vars = 0;
    Eigen::VectorXd objective;
    Eigen::MatrixXd A_rows;
    Eigen::VectorXd b;

    /// Builders that can prove their rows independent set this to skip the
    /// rank-revealing pass in presolve.
    bool rows_known_independent = false;

    int rows() const { return static_cast<int>(A_rows.rows()); }
    int cols() const;
    int block_col_offset(int blk) const;
    int free_col_offset() const { return block_col_offset(static_cast<int>(block_dims.size())); }
    void validate() const;
};

struct IpmSettings {
    int max_iter = 100;
    double gap_tol = 1e-8;
    double feas_tol = 1e-8;
    double step_fraction = 0.98;
    /// Exponent of the Mehrotra centering heuristic sigma = (mu_aff/mu)^p.
    double sigma_power = 3.0;
    bool record_history = false;
    int verbosity = 0;
};

struct IpmIterate {
    int iter;
    double primal_obj, dual_obj, gap, primal_res, dual_res, mu, step_primal, step_dual;
};

struct IpmSolution {
    SolveStatus status = SolveStatus::NumericalTrouble;
    double primal_value = 0.0;
    double dual_value = 0.0;
    Eigen::VectorXd x;  // stacked block svecs + free tail
    Eigen::VectorXd y;  // multipliers in the original row indexing
    Eigen::VectorXd z;  // stacked block svecs of dual slacks (free tail zero)
    int iterations = 0;
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    std::vector<IpmIterate> history;

    SymMatrix block_x(const ConicProgram& p, int blk) const;
    SymMatrix block_z(const ConicProgram& p, int blk) const;
    Eigen::VectorXd free_x(const ConicProgram& p) const;
};

/// Numerically dependent equality rows removed (with a warning); kept_rows
/// maps reduced rows back to the input. An inconsistent dependent row yields
/// detected_infeasible with a Farkas certificate in farkas_y.
struct Presolved {
    ConicProgram program;
    std::vector<int> kept_rows;
    bool detected_infeasible = false;
    Eigen::VectorXd farkas_y;
};

Presolved presolve(const ConicProgram& prog);

/// Primal-dual path-following solve (Nesterov-Todd scaling, Mehrotra
/// predictor-corrector, dense Schur complement). Deterministic: identical
/// inputs produce identical iterates.
IpmSolution solve(const ConicProgram& prog, const IpmSettings& settings = {});

/// Full-cone solve of an SdpProblem (single PSD block of size n).
SolveReport solve_full(const SdpProblem& prob, const IpmSettings& settings = {});

} // namespace blockfw

#endif
