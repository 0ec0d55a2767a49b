#include "blockfw/linalg.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace blockfw;

namespace {

SymMatrix sym2(double a, double b, double c) {
    SymMatrix m(2);
    m.set(0, 0, a);
    m.set(0, 1, b);
    m.set(1, 1, c);
    return m;
}

// Characteristic-polynomial root oracles, independent of the eigensolver.
double min_eig_quadratic(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return mean - disc;
}

double min_eig_cubic(const SymMatrix& m) {
    // Trigonometric solution of det(m - x I) = 0 for symmetric 3x3.
    const double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
    const double q = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
    const double p2 = (m(0, 0) - q) * (m(0, 0) - q) + (m(1, 1) - q) * (m(1, 1) - q) +
                      (m(2, 2) - q) * (m(2, 2) - q) + 2.0 * p1;
    if (p2 == 0.0) return q;  // scalar matrix
    const double p = std::sqrt(p2 / 6.0);
    Eigen::Matrix3d B = (m.dense() - q * Eigen::Matrix3d::Identity()) / p;
    double r = B.determinant() / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double two_pi_third = 2.0943951023931953;
    // smallest eigenvalue uses phi + 2*pi/3
    return q + 2.0 * p * std::cos(phi + two_pi_third);
}

SymMatrix random_sym(int n, std::mt19937_64& eng, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = d(eng);
    return SymMatrix::symmetrized(m);
}

SymMatrix random_psd(int n, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = d(eng);
    return SymMatrix::symmetrized(g * g.transpose());
}

} // namespace

TEST_CASE("chol_psd identity") {
    const CholFactor f = chol_psd(SymMatrix::identity(3), 1e-12);
    CHECK(f.shift == 0.0);
    CHECK((f.upper - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("chol_psd 2x2 hand factor") {
    // [[4,2],[2,5]] = V^T V with V = [[2,1],[0,2]]
    const CholFactor f = chol_psd(sym2(4, 2, 5), 1e-12);
    CHECK(f.shift == 0.0);
    CHECK(f.upper(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.upper(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.upper(1, 0) == 0.0);
    CHECK(f.upper(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("chol_psd singular boundary needs a small shift") {
    const CholFactor f = chol_psd(sym2(1, 0, 0), 1e-12);
    CHECK(f.shift > 0.0);
    CHECK(f.shift <= 1e-10);
    SymMatrix in = sym2(1, 0, 0);
    Eigen::MatrixXd target = in.dense();
    target.diagonal().array() += f.shift;
    CHECK((f.reconstruct() - target).norm() <= 1e-10);
}

TEST_CASE("chol_psd rejects clearly indefinite input") {
    CHECK_THROWS_AS(chol_psd(sym2(1, 0, -1), 1e-12), NotFactorizable);
}

TEST_CASE("chol_psd reconstruction on random psd matrices") {
    std::mt19937_64 eng(7);
    std::uniform_int_distribution<int> dim(1, 50);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = dim(eng);
        const SymMatrix a = random_psd(n, eng);
        const CholFactor f = chol_psd(a, 1e-12);
        Eigen::MatrixXd target = a.dense();
        target.diagonal().array() += f.shift;
        CHECK((f.reconstruct() - target).norm() <=
              1e-10 * std::max(1.0, a.norm_fro()));
    }
}

TEST_CASE("chol_psd leaves well-conditioned psd inputs unshifted") {
    std::mt19937_64 eng(11);
    for (int rep = 0; rep < 200; ++rep) {
        SymMatrix a = random_psd(6, eng);
        for (int i = 0; i < 6; ++i) a.add(i, i, 1.0);  // safely positive definite
        CHECK(chol_psd(a, 1e-12).shift == 0.0);
    }
}

TEST_CASE("min_eig basics") {
    CHECK(min_eig(SymMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-12));
    SymMatrix d(2);
    d.set(0, 0, 3.0);
    d.set(1, 1, -2.0);
    CHECK(min_eig(d) == doctest::Approx(-2.0).epsilon(1e-12));

    SymMatrix m(3);
    for (int i = 0; i < 3; ++i) m.set(i, i, 1.0);
    m.set(0, 1, -0.9);
    m.set(0, 2, -0.9);
    m.set(1, 2, -0.9);
    // eigenvalues 1 + (n-1)b and 1 - b with b = -0.9
    CHECK(min_eig(m) == doctest::Approx(-0.8).epsilon(1e-9));
}

TEST_CASE("min_eig matches characteristic-polynomial roots") {
    std::mt19937_64 eng(3);
    std::uniform_int_distribution<int> num(-8, 8);
    for (int rep = 0; rep < 300; ++rep) {
        const double a = num(eng) / 4.0, b = num(eng) / 4.0, c = num(eng) / 4.0;
        CHECK(min_eig(sym2(a, b, c)) ==
              doctest::Approx(min_eig_quadratic(a, b, c)).epsilon(1e-9));
    }
    for (int rep = 0; rep < 300; ++rep) {
        SymMatrix m(3);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i <= j; ++i) m.set(i, j, num(eng) / 4.0);
        CHECK(min_eig(m) == doctest::Approx(min_eig_cubic(m)).epsilon(1e-9));
    }
}

TEST_CASE("svec of the 2x2 identity") {
    const Eigen::VectorXd v = svec(SymMatrix::identity(2));
    REQUIRE(v.size() == 3);
    CHECK(v(0) == 1.0);
    CHECK(v(1) == 0.0);
    CHECK(v(2) == 1.0);
}

TEST_CASE("svec dot equals trace inner product") {
    std::mt19937_64 eng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const SymMatrix a = random_sym(4, eng);
        const SymMatrix b = random_sym(4, eng);
        // direct trace(a*b) by explicit loops
        double tr = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) tr += a(i, j) * b(j, i);
        CHECK(svec(a).dot(svec(b)) == doctest::Approx(tr).epsilon(1e-12));
        CHECK(inner(a, b) == doctest::Approx(tr).epsilon(1e-12));
    }
}

TEST_CASE("smat round trip") {
    std::mt19937_64 eng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const SymMatrix a = random_sym(6, eng, 10.0);
        const SymMatrix back = smat(svec(a));
        // The sqrt(2) scaling cannot round-trip bit-exactly for every double;
        // it is exact to one ulp.
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                CHECK(back(i, j) == doctest::Approx(a(i, j)).epsilon(3e-16));
    }
    CHECK_THROWS_AS(smat(Eigen::VectorXd::Zero(5)), DimensionMismatch);
}

TEST_CASE("self inner product is the squared svec norm") {
    std::mt19937_64 eng(29);
    for (int rep = 0; rep < 50; ++rep) {
        const SymMatrix a = random_sym(5, eng);
        CHECK(inner(a, a) >= 0.0);
        CHECK(inner(a, a) == doctest::Approx(svec(a).squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("symmetry is bit exact") {
    std::mt19937_64 eng(31);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::MatrixXd m(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) m(i, j) = d(eng);
    const SymMatrix s = SymMatrix::symmetrized(m);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) CHECK(s(i, j) == s(j, i));
}
