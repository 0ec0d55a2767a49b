#ifndef BLOCKFW_LINALG_HPP
#define BLOCKFW_LINALG_HPP

#include <Eigen/Dense>

#include "blockfw/errors.hpp"

namespace blockfw {

/// Dense symmetric matrix. Symmetry is enforced by construction: every write
/// mirrors across the diagonal, so entry(i,j) == entry(j,i) bit-for-bit.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : mat_(Eigen::MatrixXd::Zero(n, n)) {
        if (n < 1) throw DimensionMismatch("SymMatrix dimension must be >= 1");
    }

    static SymMatrix identity(int n);
    /// (m + m^T)/2, written into both triangles from one computed value.
    static SymMatrix symmetrized(const Eigen::MatrixXd& m);
    /// Accepts m only if it is already exactly symmetric.
    static SymMatrix from_symmetric(const Eigen::MatrixXd& m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    double operator()(int i, int j) const { return mat_(i, j); }
    void set(int i, int j, double v) {
        mat_(i, j) = v;
        mat_(j, i) = v;
    }
    void add(int i, int j, double v) {
        mat_(i, j) += v;
        if (i != j) mat_(j, i) = mat_(i, j);
    }

    const Eigen::MatrixXd& dense() const { return mat_; }

    double trace() const { return mat_.trace(); }
    double norm_fro() const { return mat_.norm(); }
    double norm_max() const { return dim() == 0 ? 0.0 : mat_.cwiseAbs().maxCoeff(); }
    /// Spectral norm (largest |eigenvalue|); O(n^3).
    double norm_two() const;

    SymMatrix& operator+=(const SymMatrix& o);
    SymMatrix& operator-=(const SymMatrix& o);
    SymMatrix& operator*=(double s);
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

private:
    Eigen::MatrixXd mat_;
};

/// trace(a*b); equals dot(svec(a), svec(b)).
double inner(const SymMatrix& a, const SymMatrix& b);

/// g^T a g for a general square g (result symmetrized bit-exactly).
SymMatrix congruence(const Eigen::MatrixXd& g, const SymMatrix& a);

/// Upper-triangular factor of a (possibly shifted) positive semidefinite
/// matrix: input + shift*I == upper^T * upper.
struct CholFactor {
    int n = 0;
    Eigen::MatrixXd upper;
    double shift = 0.0;

    static CholFactor identity(int n) { return {n, Eigen::MatrixXd::Identity(n, n), 0.0}; }
    Eigen::MatrixXd reconstruct() const { return upper.transpose() * upper; }
};

/// Cholesky with an escalating diagonal shift ladder {0, eps, 10*eps, ...}.
/// Throws NotFactorizable once the required shift exceeds 1e-2 * ||a||_2.
CholFactor chol_psd(const SymMatrix& a, double eps);

/// Smallest eigenvalue.
double min_eig(const SymMatrix& a);

// Symmetric vectorization: upper triangle, column-major, off-diagonals scaled
// by sqrt(2) so that dot(svec(a), svec(b)) == inner(a, b).
int svec_len(int n);
int svec_dim(int len);  // inverse of svec_len; throws DimensionMismatch
Eigen::VectorXd svec(const SymMatrix& a);
SymMatrix smat(const Eigen::VectorXd& v);

} // namespace blockfw

#endif
