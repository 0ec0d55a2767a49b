#ifndef BLOCKFW_SDP_MODEL_HPP
#define BLOCKFW_SDP_MODEL_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "blockfw/linalg.hpp"

namespace blockfw {

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter, NumericalTrouble };

std::string to_string(SolveStatus s);

/// Standard-form SDP data: minimize <C,X> subject to <A_i,X> = b_i, X psd.
struct SdpProblem {
    int n = 0;
    int m = 0;
    SymMatrix C;
    std::vector<SymMatrix> A;
    Eigen::VectorXd b;

    /// Set when the stored objective is the negation of the source problem's
    /// natural (maximize) objective, e.g. theta encoded as minimize <-J,X>.
    bool objective_flipped = false;
    std::string name;

    void validate() const;

    /// Numerical rank of the stacked {svec(A_i)}; computed once and cached.
    /// Rank deficiency is legal but worth a warning at ingestion time.
    int constraint_rank() const;
    bool constraints_full_rank() const { return constraint_rank() == m; }

private:
    mutable int cached_rank_ = -1;
};

/// SDPA sparse (.dat-s) ingestion. Multiple blocks are flattened into one
/// block-diagonal matrix; a negative block size means that many 1x1 diagonal
/// blocks. Comment lines start with '"' or '*'.
SdpProblem parse_sdpa(std::istream& in);
SdpProblem parse_sdpa_file(const std::string& path);

/// Mirrors parse_sdpa bit-exactly up to float formatting (%.17g). Always
/// emits a single dense block.
void emit_sdpa(const SdpProblem& prob, std::ostream& out);
void emit_sdpa_file(const SdpProblem& prob, const std::string& path);

/// Entries <A_i, X> - b_i.
Eigen::VectorXd residuals(const SdpProblem& prob, const SymMatrix& X);

/// Result of a full-cone solve of an SdpProblem (see ipm::solve_full).
struct SolveReport {
    SolveStatus status = SolveStatus::NumericalTrouble;
    double primal_value = 0.0;
    double dual_value = 0.0;
    SymMatrix X;
    Eigen::VectorXd y;
    SymMatrix Z;
    int iterations = 0;
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

} // namespace blockfw

#endif
