#include "blockfw/ipm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <iostream>
#include <limits>

namespace blockfw {

int ConicProgram::cols() const {
    int c = 0;
    for (int d : block_dims) c += svec_len(d);
    return c + free_vars;
}

int ConicProgram::block_col_offset(int blk) const {
    int c = 0;
    for (int i = 0; i < blk; ++i) c += svec_len(block_dims[i]);
    return c;
}

void ConicProgram::validate() const {
    for (int d : block_dims)
        if (d < 1) throw DimensionMismatch("ConicProgram: block dimensions must be >= 1");
    if (free_vars < 0) throw DimensionMismatch("ConicProgram: negative free variable count");
    if (block_dims.empty() && free_vars == 0)
        throw DimensionMismatch("ConicProgram: no variables");
    if (objective.size() != cols())
        throw DimensionMismatch("ConicProgram: objective length mismatch");
    if (A_rows.cols() != cols())
        throw DimensionMismatch("ConicProgram: constraint matrix column mismatch");
    if (b.size() != A_rows.rows())
        throw DimensionMismatch("ConicProgram: right-hand side length mismatch");
}

namespace {

const double kRt2 = std::sqrt(2.0);

Eigen::VectorXd svec_raw(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::VectorXd v(svec_len(n));
    int idx = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) v(idx++) = (i == j) ? a(i, j) : kRt2 * a(i, j);
    return v;
}

Eigen::MatrixXd smat_raw(const Eigen::Ref<const Eigen::VectorXd>& v, int n) {
    static const double kInvRt2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd a(n, n);
    int idx = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i, ++idx) {
            const double val = (i == j) ? v(idx) : v(idx) * kInvRt2;
            a(i, j) = val;
            a(j, i) = val;
        }
    return a;
}

void symmetrize(Eigen::MatrixXd& a) { a = 0.5 * (a + a.transpose()).eval(); }

// Matrix of U |-> W U W in svec coordinates (the symmetric Kronecker square).
Eigen::MatrixXd sym_kron_square(const Eigen::MatrixXd& w) {
    const int d = static_cast<int>(w.rows());
    const int cb = svec_len(d);
    Eigen::MatrixXd om(cb, cb);
    int col = 0;
    for (int l = 0; l < d; ++l)
        for (int k = 0; k <= l; ++k, ++col) {
            int row = 0;
            if (k == l) {
                for (int j = 0; j < d; ++j)
                    for (int i = 0; i <= j; ++i, ++row) {
                        const double v = w(i, k) * w(j, k);
                        om(row, col) = (i == j) ? v : kRt2 * v;
                    }
            } else {
                for (int j = 0; j < d; ++j)
                    for (int i = 0; i <= j; ++i, ++row) {
                        if (i == j) {
                            om(row, col) = kRt2 * w(i, k) * w(i, l);
                        } else {
                            om(row, col) = w(i, k) * w(j, l) + w(i, l) * w(j, k);
                        }
                    }
            }
        }
    return om;
}

class PathFollower {
public:
    PathFollower(const ConicProgram& prog, const IpmSettings& set) : p_(prog), set_(set) {
        K_ = static_cast<int>(p_.block_dims.size());
        m_ = p_.rows();
        nf_ = p_.free_vars;
        foff_ = p_.free_col_offset();
        nu_ = 0;
        coff_.resize(K_);
        for (int b = 0; b < K_; ++b) {
            coff_[b] = p_.block_col_offset(b);
            nu_ += p_.block_dims[b];
        }
        Cb_.resize(K_);
        for (int b = 0; b < K_; ++b)
            Cb_[b] = smat_raw(p_.objective.segment(coff_[b], svec_len(p_.block_dims[b])),
                              p_.block_dims[b]);
        cf_ = p_.objective.tail(nf_);
        anorm_ = p_.A_rows.size() ? p_.A_rows.cwiseAbs().maxCoeff() : 0.0;
        bnorm_ = m_ ? p_.b.cwiseAbs().maxCoeff() : 0.0;
        cnorm_ = p_.objective.size() ? p_.objective.cwiseAbs().maxCoeff() : 0.0;
        data_norm_ = std::max({anorm_, bnorm_, cnorm_});

        const double tau = 1.0 + data_norm_;
        X_.resize(K_);
        Z_.resize(K_);
        for (int b = 0; b < K_; ++b) {
            X_[b] = tau * Eigen::MatrixXd::Identity(p_.block_dims[b], p_.block_dims[b]);
            Z_[b] = X_[b];
        }
        y_ = Eigen::VectorXd::Zero(m_);
        xf_ = Eigen::VectorXd::Zero(nf_);
    }

    IpmSolution run();

private:
    struct Direction {
        std::vector<Eigen::MatrixXd> dX, dZ;
        Eigen::VectorXd dy, dxf;
    };

    Eigen::VectorXd stacked_x() const {
        Eigen::VectorXd v(p_.cols());
        for (int b = 0; b < K_; ++b)
            v.segment(coff_[b], svec_len(p_.block_dims[b])) = svec_raw(X_[b]);
        v.tail(nf_) = xf_;
        return v;
    }

    void compute_residuals() {
        const Eigen::VectorXd x = stacked_x();
        rp_ = p_.b - p_.A_rows * x;
        const Eigen::VectorXd w = p_.A_rows.transpose() * y_;
        Rd_.resize(K_);
        for (int b = 0; b < K_; ++b) {
            Rd_[b] = Cb_[b] - smat_raw(w.segment(coff_[b], svec_len(p_.block_dims[b])),
                                       p_.block_dims[b]) -
                     Z_[b];
        }
        rf_ = cf_ - w.tail(nf_);
        pobj_ = p_.objective.dot(x);
        dobj_ = m_ ? p_.b.dot(y_) : 0.0;
        cgap_ = 0.0;
        for (int b = 0; b < K_; ++b) cgap_ += X_[b].cwiseProduct(Z_[b]).sum();
        mu_ = nu_ > 0 ? cgap_ / nu_ : 0.0;
        pres_ = (m_ ? rp_.cwiseAbs().maxCoeff() : 0.0) / (1.0 + bnorm_);
        double drmax = nf_ ? rf_.cwiseAbs().maxCoeff() : 0.0;
        for (int b = 0; b < K_; ++b) drmax = std::max(drmax, Rd_[b].cwiseAbs().maxCoeff());
        dres_ = drmax / (1.0 + cnorm_);
    }

    bool converged() const {
        const double denom = 1.0 + std::abs(pobj_) + std::abs(dobj_);
        const double rel_c = cgap_ / denom;
        const double rel_pd = std::abs(pobj_ - dobj_) / denom;
        return pres_ <= set_.feas_tol && dres_ <= set_.feas_tol &&
               std::min(rel_c, rel_pd) <= set_.gap_tol;
    }

    // NT scaling point per block: factors R, R^{-1} with
    // R^T Z R == R^{-1} X R^{-T} == diag(lam).
    bool compute_scaling() {
        R_.resize(K_);
        Rinv_.resize(K_);
        W_.resize(K_);
        lam_.resize(K_);
        Lx_.resize(K_);
        Lz_.resize(K_);
        for (int b = 0; b < K_; ++b) {
            Eigen::LLT<Eigen::MatrixXd> lltx(X_[b]);
            Eigen::LLT<Eigen::MatrixXd> lltz(Z_[b]);
            if (lltx.info() != Eigen::Success || lltz.info() != Eigen::Success) return false;
            Lx_[b] = lltx.matrixL();
            Lz_[b] = lltz.matrixL();
            const Eigen::MatrixXd prod = Lz_[b].transpose() * Lx_[b];
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(prod,
                                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
            lam_[b] = svd.singularValues();
            if (lam_[b].minCoeff() <= 0.0 || !lam_[b].allFinite()) return false;
            const Eigen::VectorXd isqrt = lam_[b].cwiseSqrt().cwiseInverse();
            R_[b] = Lx_[b] * svd.matrixV() * isqrt.asDiagonal();
            Rinv_[b] = isqrt.asDiagonal() * svd.matrixU().transpose() * Lz_[b].transpose();
            W_[b] = R_[b] * R_[b].transpose();
            symmetrize(W_[b]);
        }
        return true;
    }

    // Dense Schur complement  M = sum_b A_b (W_b x_s W_b) A_b^T, factored with
    // an escalating diagonal regularization if needed.
    bool factor_schur() {
        M_.setZero(m_, m_);
        for (int b = 0; b < K_; ++b) {
            const int d = p_.block_dims[b];
            const int cb = svec_len(d);
            const auto Ab = p_.A_rows.middleCols(coff_[b], cb);
            if (m_ > 0 && 2 * m_ < d) {
                // Few constraints relative to block size: form W A_i W directly.
                std::vector<Eigen::MatrixXd> waw(m_);
                for (int i = 0; i < m_; ++i) {
                    const Eigen::MatrixXd Ai = smat_raw(Ab.row(i).transpose(), d);
                    waw[i] = W_[b] * Ai * W_[b];
                }
                for (int i = 0; i < m_; ++i) {
                    const Eigen::MatrixXd Ai = smat_raw(Ab.row(i).transpose(), d);
                    for (int j = 0; j <= i; ++j) {
                        const double v = Ai.cwiseProduct(waw[j]).sum();
                        M_(i, j) += v;
                        if (i != j) M_(j, i) += v;
                    }
                }
            } else if (m_ > 0) {
                const Eigen::MatrixXd om = sym_kron_square(W_[b]);
                const Eigen::MatrixXd tmp = Ab * om;
                M_.noalias() += tmp * Ab.transpose();
            }
        }
        symmetrize(M_);
        if (m_ == 0) return true;

        const double base = 1e-14 * (1.0 + M_.diagonal().cwiseAbs().maxCoeff());
        double reg = 0.0;
        for (int attempt = 0; attempt < 10; ++attempt) {
            Eigen::MatrixXd Mreg = M_;
            if (reg > 0.0) Mreg.diagonal().array() += reg;
            schur_llt_.compute(Mreg);
            if (schur_llt_.info() == Eigen::Success) {
                if (nf_ > 0) {
                    const auto Af = p_.A_rows.middleCols(foff_, nf_);
                    Uf_ = schur_llt_.matrixL().solve(Af);
                    Eigen::MatrixXd Sf = Uf_.transpose() * Uf_;
                    Sf.diagonal().array() += 1e-14 * (1.0 + Sf.diagonal().cwiseAbs().maxCoeff());
                    free_llt_.compute(Sf);
                    if (free_llt_.info() != Eigen::Success) {
                        reg = (reg == 0.0) ? base : reg * 100.0;
                        continue;
                    }
                }
                return true;
            }
            reg = (reg == 0.0) ? base : reg * 100.0;
        }
        return false;
    }

    // Newton direction for complementarity target Rc (given in scaled space).
    Direction compute_direction(const std::vector<Eigen::MatrixXd>& Rc) {
        Direction dir;
        dir.dX.resize(K_);
        dir.dZ.resize(K_);

        std::vector<Eigen::MatrixXd> T(K_);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(foff_);
        for (int b = 0; b < K_; ++b) {
            T[b] = R_[b] * Rc[b] * R_[b].transpose();
            symmetrize(T[b]);
            const Eigen::MatrixXd wrw = W_[b] * Rd_[b] * W_[b];
            v.segment(coff_[b], svec_len(p_.block_dims[b])) = svec_raw(wrw - T[b]);
        }

        if (m_ > 0) {
            const Eigen::VectorXd g = rp_ + p_.A_rows.leftCols(foff_) * v;
            if (nf_ > 0) {
                const auto Af = p_.A_rows.middleCols(foff_, nf_);
                const Eigen::VectorXd u = schur_llt_.matrixL().solve(g);
                dir.dxf = free_llt_.solve(Uf_.transpose() * u - rf_);
                dir.dy = schur_llt_.solve(g - Af * dir.dxf);
            } else {
                dir.dy = schur_llt_.solve(g);
            }
        } else {
            dir.dy = Eigen::VectorXd::Zero(0);
            dir.dxf = Eigen::VectorXd::Zero(nf_);
        }

        const Eigen::VectorXd w2 = p_.A_rows.transpose() * dir.dy;
        for (int b = 0; b < K_; ++b) {
            const int cb = svec_len(p_.block_dims[b]);
            dir.dZ[b] = Rd_[b] - smat_raw(w2.segment(coff_[b], cb), p_.block_dims[b]);
            symmetrize(dir.dZ[b]);
            dir.dX[b] = T[b] - W_[b] * dir.dZ[b] * W_[b];
            symmetrize(dir.dX[b]);
        }
        return dir;
    }

    // Largest step with S + alpha dS staying psd, via lambda_min in the
    // factored metric of S.
    double max_step(const std::vector<Eigen::MatrixXd>& L,
                    const std::vector<Eigen::MatrixXd>& dS) const {
        double alpha = std::numeric_limits<double>::infinity();
        for (int b = 0; b < K_; ++b) {
            const Eigen::MatrixXd t1 =
                L[b].triangularView<Eigen::Lower>().solve(dS[b]);
            const Eigen::MatrixXd q =
                L[b].triangularView<Eigen::Lower>().solve(t1.transpose());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q + q.transpose()),
                                                              Eigen::EigenvaluesOnly);
            const double lmin = es.eigenvalues()(0);
            if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
        }
        return alpha;
    }

    bool detect_infeasible(IpmSolution& sol) const {
        if (m_ == 0) return false;
        const double by = p_.b.dot(y_);
        const double ynorm = y_.cwiseAbs().maxCoeff();
        if (by <= 0.0 || ynorm < 1e4 * (1.0 + data_norm_)) return false;
        const Eigen::VectorXd yhat = y_ / by;
        const double ctol = set_.feas_tol * (1.0 + anorm_ * yhat.cwiseAbs().maxCoeff());
        const Eigen::VectorXd w = p_.A_rows.transpose() * yhat;
        for (int b = 0; b < K_; ++b) {
            const Eigen::MatrixXd S =
                -smat_raw(w.segment(coff_[b], svec_len(p_.block_dims[b])), p_.block_dims[b]);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
            if (es.eigenvalues()(0) < -ctol) return false;
        }
        if (nf_ > 0 && w.tail(nf_).cwiseAbs().maxCoeff() > ctol) return false;
        sol.status = SolveStatus::Infeasible;
        sol.y = yhat;
        return true;
    }

    bool detect_unbounded(IpmSolution& sol) const {
        const Eigen::VectorXd x = stacked_x();
        const double cx = p_.objective.dot(x);
        const double xnorm = x.cwiseAbs().maxCoeff();
        if (cx >= 0.0 || xnorm < 1e4 * (1.0 + data_norm_)) return false;
        const Eigen::VectorXd xhat = x / (-cx);
        const double ctol = set_.feas_tol * (1.0 + anorm_ * xhat.cwiseAbs().maxCoeff());
        if (m_ > 0 && (p_.A_rows * xhat).cwiseAbs().maxCoeff() > ctol) return false;
        sol.status = SolveStatus::Unbounded;
        sol.x = xhat;
        return true;
    }

    void fill_solution(IpmSolution& sol, SolveStatus status, int iter) const {
        sol.status = status;
        sol.primal_value = pobj_;
        sol.dual_value = dobj_;
        sol.x = stacked_x();
        sol.y = y_;
        sol.z = Eigen::VectorXd::Zero(p_.cols());
        for (int b = 0; b < K_; ++b)
            sol.z.segment(coff_[b], svec_len(p_.block_dims[b])) = svec_raw(Z_[b]);
        sol.iterations = iter;
        sol.gap = cgap_;
        sol.primal_residual = pres_;
        sol.dual_residual = dres_;
    }

    const ConicProgram& p_;
    IpmSettings set_;
    int K_ = 0, m_ = 0, nf_ = 0, foff_ = 0, nu_ = 0;
    std::vector<int> coff_;
    std::vector<Eigen::MatrixXd> Cb_;
    Eigen::VectorXd cf_;
    double anorm_ = 0, bnorm_ = 0, cnorm_ = 0, data_norm_ = 0;

    std::vector<Eigen::MatrixXd> X_, Z_;
    Eigen::VectorXd y_, xf_;

    Eigen::VectorXd rp_, rf_;
    std::vector<Eigen::MatrixXd> Rd_;
    double pobj_ = 0, dobj_ = 0, cgap_ = 0, mu_ = 0, pres_ = 0, dres_ = 0;

    std::vector<Eigen::MatrixXd> R_, Rinv_, W_, Lx_, Lz_;
    std::vector<Eigen::VectorXd> lam_;
    Eigen::MatrixXd M_, Uf_;
    Eigen::LLT<Eigen::MatrixXd> schur_llt_, free_llt_;
};

IpmSolution PathFollower::run() {
    IpmSolution sol;

    // No equality rows: a nonzero free objective makes the problem unbounded.
    if (m_ == 0 && nf_ > 0 && cf_.cwiseAbs().maxCoeff() > 0.0) {
        compute_residuals();
        fill_solution(sol, SolveStatus::Unbounded, 0);
        Eigen::VectorXd ray = Eigen::VectorXd::Zero(p_.cols());
        ray.tail(nf_) = -cf_ / cf_.norm();
        sol.x = ray;
        return sol;
    }

    int iter = 0;
    for (; iter < set_.max_iter; ++iter) {
        compute_residuals();

        if (set_.record_history)
            sol.history.push_back(
                {iter, pobj_, dobj_, cgap_, pres_, dres_, mu_, 0.0, 0.0});
        if (set_.verbosity > 0)
            std::cerr << "ipm iter " << iter << " pobj=" << pobj_ << " dobj=" << dobj_
                      << " gap=" << cgap_ << " pres=" << pres_ << " dres=" << dres_ << "\n";

        if (converged()) {
            fill_solution(sol, SolveStatus::Optimal, iter);
            return sol;
        }
        if (detect_infeasible(sol) || detect_unbounded(sol)) {
            const SolveStatus st = sol.status;
            const Eigen::VectorXd cert_x = sol.x, cert_y = sol.y;
            fill_solution(sol, st, iter);
            if (st == SolveStatus::Infeasible) sol.y = cert_y;
            if (st == SolveStatus::Unbounded) sol.x = cert_x;
            return sol;
        }
        if (!std::isfinite(mu_) || !std::isfinite(pobj_) || !std::isfinite(dobj_)) {
            fill_solution(sol, SolveStatus::NumericalTrouble, iter);
            return sol;
        }

        if (!compute_scaling() || !factor_schur()) {
            fill_solution(sol, SolveStatus::NumericalTrouble, iter);
            return sol;
        }

        // Predictor: aim complementarity at zero.
        std::vector<Eigen::MatrixXd> Rc(K_);
        for (int b = 0; b < K_; ++b) {
            Rc[b] = Eigen::MatrixXd::Zero(p_.block_dims[b], p_.block_dims[b]);
            Rc[b].diagonal() = -lam_[b];
        }
        Direction aff = compute_direction(Rc);
        const double ap_aff = std::min(1.0, max_step(Lx_, aff.dX));
        const double ad_aff = std::min(1.0, max_step(Lz_, aff.dZ));

        double gap_aff = 0.0;
        for (int b = 0; b < K_; ++b)
            gap_aff += (X_[b] + ap_aff * aff.dX[b]).cwiseProduct(Z_[b] + ad_aff * aff.dZ[b]).sum();
        gap_aff = std::max(gap_aff, 0.0);
        const double mu_aff = nu_ > 0 ? gap_aff / nu_ : 0.0;
        double sigma = mu_ > 0 ? std::pow(mu_aff / mu_, set_.sigma_power) : 0.0;
        sigma = std::min(1.0, std::max(sigma, 1e-10));

        // Corrector with Mehrotra second-order term, in scaled space.
        for (int b = 0; b < K_; ++b) {
            const int d = p_.block_dims[b];
            const Eigen::MatrixXd dxh = Rinv_[b] * aff.dX[b] * Rinv_[b].transpose();
            const Eigen::MatrixXd dzh = R_[b].transpose() * aff.dZ[b] * R_[b];
            Eigen::MatrixXd corr = 0.5 * (dxh * dzh + dzh * dxh);
            Eigen::MatrixXd target = -corr;
            target.diagonal().array() += sigma * mu_;
            target.diagonal().array() -= lam_[b].array().square();
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i)
                    target(i, j) *= 2.0 / (lam_[b](i) + lam_[b](j));
            Rc[b] = target;
        }
        Direction dir = compute_direction(Rc);

        const double ap = std::min(1.0, set_.step_fraction * max_step(Lx_, dir.dX));
        const double ad = std::min(1.0, set_.step_fraction * max_step(Lz_, dir.dZ));
        if (set_.record_history && !sol.history.empty()) {
            sol.history.back().step_primal = ap;
            sol.history.back().step_dual = ad;
        }

        for (int b = 0; b < K_; ++b) {
            X_[b] += ap * dir.dX[b];
            Z_[b] += ad * dir.dZ[b];
            symmetrize(X_[b]);
            symmetrize(Z_[b]);
        }
        xf_ += ap * dir.dxf;
        y_ += ad * dir.dy;
    }

    compute_residuals();
    fill_solution(sol, SolveStatus::MaxIter, iter);
    return sol;
}

} // namespace

SymMatrix IpmSolution::block_x(const ConicProgram& p, int blk) const {
    const int d = p.block_dims[blk];
    return smat(x.segment(p.block_col_offset(blk), svec_len(d)));
}

SymMatrix IpmSolution::block_z(const ConicProgram& p, int blk) const {
    const int d = p.block_dims[blk];
    return smat(z.segment(p.block_col_offset(blk), svec_len(d)));
}

Eigen::VectorXd IpmSolution::free_x(const ConicProgram& p) const { return x.tail(p.free_vars); }

Presolved presolve(const ConicProgram& prog) {
    prog.validate();
    const int m = prog.rows();
    Presolved out;
    out.detected_infeasible = false;
    out.farkas_y = Eigen::VectorXd::Zero(m);

    const double btol = 1e-10 * (1.0 + (m ? prog.b.cwiseAbs().maxCoeff() : 0.0));
    std::vector<int> candidates;
    candidates.reserve(m);
    for (int i = 0; i < m; ++i) {
        if (prog.A_rows.row(i).cwiseAbs().maxCoeff() == 0.0) {
            if (std::abs(prog.b(i)) > btol) {
                out.detected_infeasible = true;
                out.farkas_y(i) = prog.b(i) > 0 ? 1.0 : -1.0;
                out.program = prog;
                out.kept_rows.clear();
                return out;
            }
            continue;  // vacuous row
        }
        candidates.push_back(i);
    }

    std::vector<int> kept = candidates;
    if (!prog.rows_known_independent && !candidates.empty()) {
        Eigen::MatrixXd At(prog.cols(), candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i)
            At.col(i) = prog.A_rows.row(candidates[i]).transpose();
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
        qr.setThreshold(1e-10);
        const int rank = static_cast<int>(qr.rank());
        if (rank < static_cast<int>(candidates.size())) {
            const auto& perm = qr.colsPermutation().indices();
            std::vector<char> selected(candidates.size(), 0);
            for (int i = 0; i < rank; ++i) selected[perm(i)] = 1;
            kept.clear();
            std::vector<int> dropped;
            for (std::size_t i = 0; i < candidates.size(); ++i)
                (selected[i] ? kept : dropped).push_back(candidates[i]);

            // Dependent rows must carry consistent right-hand sides.
            Eigen::MatrixXd Akt(prog.cols(), kept.size());
            Eigen::VectorXd bk(kept.size());
            for (std::size_t i = 0; i < kept.size(); ++i) {
                Akt.col(i) = prog.A_rows.row(kept[i]).transpose();
                bk(i) = prog.b(kept[i]);
            }
            Eigen::HouseholderQR<Eigen::MatrixXd> qr2(Akt);
            for (int d : dropped) {
                const Eigen::VectorXd ad = prog.A_rows.row(d).transpose();
                const Eigen::VectorXd lambda = qr2.solve(ad);
                const double mismatch = lambda.dot(bk) - prog.b(d);
                if (std::abs(mismatch) > btol * 100.0) {
                    out.detected_infeasible = true;
                    const double sign = mismatch > 0 ? 1.0 : -1.0;
                    for (std::size_t i = 0; i < kept.size(); ++i)
                        out.farkas_y(kept[i]) = sign * lambda(i);
                    out.farkas_y(d) = -sign;
                    out.program = prog;
                    out.kept_rows.clear();
                    return out;
                }
            }
            std::cerr << "warning: presolve dropped " << dropped.size()
                      << " dependent equality row(s)\n";
        }
    }

    out.kept_rows = kept;
    out.program = prog;
    if (static_cast<int>(kept.size()) != m) {
        out.program.A_rows.resize(kept.size(), prog.cols());
        out.program.b.resize(kept.size());
        for (std::size_t i = 0; i < kept.size(); ++i) {
            out.program.A_rows.row(i) = prog.A_rows.row(kept[i]);
            out.program.b(i) = prog.b(kept[i]);
        }
    }
    out.program.rows_known_independent = true;
    return out;
}

IpmSolution solve(const ConicProgram& prog, const IpmSettings& settings) {
    Presolved pre = presolve(prog);
    if (pre.detected_infeasible) {
        IpmSolution sol;
        sol.status = SolveStatus::Infeasible;
        sol.x = Eigen::VectorXd::Zero(prog.cols());
        sol.z = Eigen::VectorXd::Zero(prog.cols());
        sol.y = pre.farkas_y;
        return sol;
    }

    PathFollower core(pre.program, settings);
    IpmSolution sol = core.run();

    if (static_cast<int>(pre.kept_rows.size()) != prog.rows()) {
        Eigen::VectorXd yfull = Eigen::VectorXd::Zero(prog.rows());
        for (std::size_t i = 0; i < pre.kept_rows.size(); ++i) yfull(pre.kept_rows[i]) = sol.y(i);
        sol.y = yfull;
    }
    return sol;
}

SolveReport solve_full(const SdpProblem& prob, const IpmSettings& settings) {
    prob.validate();
    ConicProgram prog;
    prog.block_dims = {prob.n};
    prog.free_vars = 0;
    prog.objective = svec(prob.C);
    prog.A_rows.resize(prob.m, prog.cols());
    for (int i = 0; i < prob.m; ++i) prog.A_rows.row(i) = svec(prob.A[i]).transpose();
    prog.b = prob.b;

    const IpmSolution sol = solve(prog, settings);
    SolveReport rep;
    rep.status = sol.status;
    rep.primal_value = sol.primal_value;
    rep.dual_value = sol.dual_value;
    rep.X = sol.x.size() ? smat(sol.x.head(svec_len(prob.n))) : SymMatrix(prob.n);
    rep.Z = sol.z.size() ? smat(sol.z.head(svec_len(prob.n))) : SymMatrix(prob.n);
    rep.y = sol.y;
    rep.iterations = sol.iterations;
    rep.gap = sol.gap;
    rep.primal_residual = sol.primal_residual;
    rep.dual_residual = sol.dual_residual;
    return rep;
}

} // namespace blockfw
