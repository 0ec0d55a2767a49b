#include "blockfw/subproblem.hpp"

#include <cmath>

namespace blockfw {

namespace {

void check_inputs(const SdpProblem& prob, const Partition& part, const CholFactor& basis) {
    prob.validate();
    if (part.total_dim() != prob.n)
        throw DimensionMismatch("partition does not cover the problem dimension");
    if (basis.n != prob.n) throw DimensionMismatch("basis dimension does not match problem");
}

} // namespace

ScatteredSdp scatter(const SdpProblem& prob, const Partition& part, const CholFactor& basis) {
    check_inputs(prob, part, basis);

    ScatteredSdp out{part, basis, {}, {}, prob.b, prob.constraints_full_rank()};
    // Data congruence V M V^T (note: transform_by applies g^T M g).
    const Eigen::MatrixXd vt = basis.upper.transpose();
    const SymMatrix c_hat = congruence(vt, prob.C);
    std::vector<SymMatrix> a_hat;
    a_hat.reserve(prob.m);
    for (const SymMatrix& Ai : prob.A) a_hat.push_back(congruence(vt, Ai));

    out.cost_blocks.reserve(pairs(part).size());
    out.cons_blocks.assign(prob.m, {});
    for (const PairIndex& pr : pairs(part)) {
        out.cost_blocks.push_back(extract(c_hat, pr));
        for (int i = 0; i < prob.m; ++i) out.cons_blocks[i].push_back(extract(a_hat[i], pr));
    }
    return out;
}

ConicProgram ScatteredSdp::program() const {
    ConicProgram prog;
    for (const PairIndex& pr : pairs(partition)) prog.block_dims.push_back(pr.joint_dim());
    prog.free_vars = 0;
    prog.objective.resize(prog.cols());
    const int m = static_cast<int>(cons_blocks.size());
    prog.A_rows.resize(m, prog.cols());
    int off = 0;
    for (std::size_t blk = 0; blk < cost_blocks.size(); ++blk) {
        const int len = svec_len(cost_blocks[blk].dim());
        prog.objective.segment(off, len) = svec(cost_blocks[blk]);
        for (int i = 0; i < m; ++i)
            prog.A_rows.row(i).segment(off, len) = svec(cons_blocks[i][blk]).transpose();
        off += len;
    }
    prog.b = b;
    prog.rows_known_independent = rows_full_rank;
    return prog;
}

DualizedOuterSdp build_outer_dual(const SdpProblem& prob, const Partition& part,
                                  const CholFactor& basis) {
    check_inputs(prob, part, basis);

    DualizedOuterSdp out{part, basis, prob.m, prob.C, {}};
    ConicProgram& prog = out.program;
    for (const PairIndex& pr : pairs(part)) prog.block_dims.push_back(pr.joint_dim());
    prog.free_vars = prob.m;

    const int n = prob.n;
    const int rows = svec_len(n);
    prog.A_rows.resize(rows, prog.cols());
    prog.objective = Eigen::VectorXd::Zero(prog.cols());

    // Column block for pair kl: the map X_kl -> G^T X_kl G with G the pair
    // rows of V, expressed between svec coordinates.
    int col_off = 0;
    static const double kInvRt2 = 1.0 / std::sqrt(2.0);
    for (const PairIndex& pr : pairs(part)) {
        const int d = pr.joint_dim();
        Eigen::MatrixXd g(d, n);
        for (int a = 0; a < pr.len_k; ++a) g.row(a) = basis.upper.row(pr.off_k + a);
        for (int a = 0; a < pr.len_l; ++a) g.row(pr.len_k + a) = basis.upper.row(pr.off_l + a);

        int local = 0;
        for (int jj = 0; jj < d; ++jj)
            for (int ii = 0; ii <= jj; ++ii, ++local) {
                // svec(G^T S_ij G) where S_ij is the svec basis element.
                Eigen::MatrixXd outer = g.row(ii).transpose() * g.row(jj);
                Eigen::MatrixXd sym = (ii == jj)
                                          ? Eigen::MatrixXd(outer)
                                          : Eigen::MatrixXd(kInvRt2 * (outer + outer.transpose()));
                prog.A_rows.col(col_off + local) = svec(SymMatrix::symmetrized(sym));
            }
        col_off += svec_len(d);
    }
    for (int i = 0; i < prob.m; ++i) {
        prog.A_rows.col(col_off + i) = svec(prob.A[i]);
        prog.objective(col_off + i) = -prob.b(i);
    }
    prog.b = svec(prob.C);
    // Rows span every matrix entry (each is covered by at least one pair and
    // the basis is invertible), so the svec equality rows are independent.
    prog.rows_known_independent = true;
    return out;
}

SymMatrix gather(const BlockCertificate& cert, const CholFactor& basis) {
    return assemble(cert, basis);
}

BlockCertificate solution_blocks(const Partition& part, const ConicProgram& prog,
                                 const IpmSolution& sol) {
    BlockCertificate cert{part, {}};
    const std::size_t count = pairs(part).size();
    if (prog.block_dims.size() < count)
        throw DimensionMismatch("solution does not cover all pairs");
    cert.blocks.reserve(count);
    for (std::size_t blk = 0; blk < count; ++blk)
        cert.blocks.push_back(sol.block_x(prog, static_cast<int>(blk)));
    return cert;
}

} // namespace blockfw
