#include "blockfw/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace blockfw {

namespace {

void check_same_dim(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("symmetric matrix dimensions differ");
}

// Plain right-looking dense Cholesky producing an upper factor, rejecting
// pivots at or below a scale-relative floor. Returning false on failure lets
// the caller escalate the shift instead of accepting a semidefinite input.
bool try_chol_upper(const Eigen::MatrixXd& a, Eigen::MatrixXd& upper) {
    const int n = static_cast<int>(a.rows());
    const double floor = static_cast<double>(n) * a.diagonal().cwiseAbs().maxCoeff() *
                         std::numeric_limits<double>::epsilon();
    Eigen::MatrixXd u = a;
    for (int k = 0; k < n; ++k) {
        double pivot = u(k, k);
        if (!(pivot > floor) || !std::isfinite(pivot)) return false;
        const double root = std::sqrt(pivot);
        u(k, k) = root;
        for (int j = k + 1; j < n; ++j) u(k, j) /= root;
        for (int j = k + 1; j < n; ++j) {
            const double f = u(k, j);
            for (int i = k + 1; i <= j; ++i) u(i, j) -= f * u(k, i);
        }
    }
    upper = u.triangularView<Eigen::Upper>();
    return true;
}

} // namespace

SymMatrix SymMatrix::identity(int n) {
    SymMatrix s(n);
    s.mat_ = Eigen::MatrixXd::Identity(n, n);
    return s;
}

SymMatrix SymMatrix::symmetrized(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw DimensionMismatch("symmetrized() expects a square matrix");
    SymMatrix s(static_cast<int>(m.rows()));
    const int n = s.dim();
    for (int j = 0; j < n; ++j) {
        s.mat_(j, j) = m(j, j);
        for (int i = 0; i < j; ++i) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            s.mat_(i, j) = v;
            s.mat_(j, i) = v;
        }
    }
    return s;
}

SymMatrix SymMatrix::from_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw DimensionMismatch("from_symmetric() expects a square matrix");
    if (!(m.array() == m.transpose().array()).all())
        throw DimensionMismatch("matrix is not exactly symmetric");
    SymMatrix s(static_cast<int>(m.rows()));
    s.mat_ = m;
    return s;
}

double SymMatrix::norm_two() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
    check_same_dim(*this, o);
    mat_ += o.mat_;
    return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
    check_same_dim(*this, o);
    mat_ -= o.mat_;
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
    mat_ *= s;
    return *this;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
    check_same_dim(a, b);
    return a.dense().cwiseProduct(b.dense()).sum();
}

SymMatrix congruence(const Eigen::MatrixXd& g, const SymMatrix& a) {
    if (g.rows() != a.dim()) throw DimensionMismatch("congruence: row count must match matrix dim");
    Eigen::MatrixXd m = g.transpose() * a.dense() * g;
    return SymMatrix::symmetrized(m);
}

CholFactor chol_psd(const SymMatrix& a, double eps) {
    if (eps < 0) throw DimensionMismatch("chol_psd: eps must be nonnegative");
    const int n = a.dim();
    if (a.norm_max() == 0.0) return {n, Eigen::MatrixXd::Zero(n, n), 0.0};

    Eigen::MatrixXd upper;
    if (try_chol_upper(a.dense(), upper)) return {n, std::move(upper), 0.0};

    // Shift ceiling is relative to the spectral norm; computed only on the
    // escalation path since it costs an eigensolve.
    const double ceiling = 1e-2 * a.norm_two();
    double shift = eps;
    while (shift > 0.0 && shift <= ceiling) {
        Eigen::MatrixXd shifted = a.dense();
        shifted.diagonal().array() += shift;
        if (try_chol_upper(shifted, upper)) return {n, std::move(upper), shift};
        shift *= 10.0;
    }
    throw NotFactorizable("chol_psd: input is far from positive semidefinite");
}

double min_eig(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.dense(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

int svec_len(int n) { return n * (n + 1) / 2; }

int svec_dim(int len) {
    const int n = static_cast<int>((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0 + 0.5);
    if (svec_len(n) != len) throw DimensionMismatch("vector length is not triangular");
    return n;
}

Eigen::VectorXd svec(const SymMatrix& a) {
    const int n = a.dim();
    static const double kRt2 = std::sqrt(2.0);
    Eigen::VectorXd v(svec_len(n));
    int idx = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) v(idx++) = (i == j) ? a(i, j) : kRt2 * a(i, j);
    return v;
}

SymMatrix smat(const Eigen::VectorXd& v) {
    const int n = svec_dim(static_cast<int>(v.size()));
    static const double kInvRt2 = 1.0 / std::sqrt(2.0);
    SymMatrix a(n);
    int idx = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i, ++idx) a.set(i, j, (i == j) ? v(idx) : kInvRt2 * v(idx));
    return a;
}

} // namespace blockfw
