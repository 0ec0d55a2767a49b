#ifndef BLOCKFW_SUBPROBLEM_HPP
#define BLOCKFW_SUBPROBLEM_HPP

#include "blockfw/fw_cone.hpp"
#include "blockfw/ipm.hpp"
#include "blockfw/partition.hpp"
#include "blockfw/sdp_model.hpp"

namespace blockfw {

/// Inner-approximation subproblem over pair blocks: the cost and constraint
/// data are pair extractions of the basis-congruated problem data,
/// cost_blocks[kl] == extract(V C V^T, kl) and likewise per constraint.
struct ScatteredSdp {
    Partition partition;
    CholFactor basis;
    std::vector<SymMatrix> cost_blocks;               // lexicographic pair order
    std::vector<std::vector<SymMatrix>> cons_blocks;  // [constraint][pair]
    Eigen::VectorXd b;
    bool rows_full_rank = false;

    /// Standard-form program: one PSD block per pair, constraint rows indexed
    /// by the original constraints.
    ConicProgram program() const;
};

ScatteredSdp scatter(const SdpProblem& prob, const Partition& part, const CholFactor& basis);

/// Outer-approximation subproblem in primal standard form: pair blocks plus m
/// free scalars y, with svec-vectorized equality
///   sum_kl V^T embed(X_kl) V + sum_i y_i A_i == C
/// and objective -b.y; n(n+1)/2 equality rows.
struct DualizedOuterSdp {
    Partition partition;
    CholFactor basis;
    int free_count = 0;
    SymMatrix target;  // C
    ConicProgram program;
};

DualizedOuterSdp build_outer_dual(const SdpProblem& prob, const Partition& part,
                                  const CholFactor& basis);

/// Full-space iterate from pair-block solutions: sum_kl V^T embed(X_kl) V.
SymMatrix gather(const BlockCertificate& cert, const CholFactor& basis);

/// Pair-block solutions of a scattered or dualized solve as a certificate.
BlockCertificate solution_blocks(const Partition& part, const ConicProgram& prog,
                                 const IpmSolution& sol);

} // namespace blockfw

#endif
