#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "gapsolve/errors.hpp"

namespace gapsolve {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense real symmetric matrix. Only the lower triangle of the input is
/// read; the upper triangle is mirrored on construction.
class SymMatrix {
public:
    explicit SymMatrix(const Matrix& m) : m_(m) {
        if (m_.rows() != m_.cols() || m_.rows() < 1)
            throw DimensionMismatch("SymMatrix: need a square matrix of dimension >= 1");
        m_.triangularView<Eigen::StrictlyUpper>() =
            m_.triangularView<Eigen::StrictlyLower>().transpose();
        if (!m_.allFinite())
            throw Error("SymMatrix: non-finite entry");
    }

    static SymMatrix identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }

    Index n() const { return m_.rows(); }
    const Matrix& mat() const { return m_; }
    double operator()(Index i, Index j) const { return m_(i, j); }
    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

private:
    Matrix m_;
};

/// Cholesky factor L of an SPD matrix, S = L * L^T. diag(L) > 0.
struct SpdFactor {
    Matrix lower;
    Index n() const { return lower.rows(); }
};

/// Factor a symmetric positive definite matrix. A pivot at or below
/// pivot_rel_tol * max(diag) means the matrix is not numerically SPD;
/// for shifted lower blocks this is how E <= lambda0 surfaces.
inline SpdFactor cholesky(const SymMatrix& s, double pivot_rel_tol = 1e-14) {
    const Index n = s.n();
    const Matrix& a = s.mat();
    const double pivot_tol = pivot_rel_tol * std::max(a.diagonal().maxCoeff(), 0.0);
    Matrix L = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        double d = a(j, j) - L.row(j).head(j).squaredNorm();
        if (!(d > pivot_tol))
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(d) +
                                      " at column " + std::to_string(j));
        L(j, j) = std::sqrt(d);
        for (Index i = j + 1; i < n; ++i)
            L(i, j) = (a(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
    }
    return SpdFactor{std::move(L)};
}

/// Solve (L L^T) X = rhs by forward and back substitution.
inline Matrix solve_spd(const SpdFactor& f, const Matrix& rhs) {
    if (rhs.rows() != f.n())
        throw DimensionMismatch("solve_spd: rhs has " + std::to_string(rhs.rows()) +
                                " rows, factor has dimension " + std::to_string(f.n()));
    Matrix y = f.lower.triangularView<Eigen::Lower>().solve(rhs);
    return f.lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

/// Eigenvalues ascending; vectors(:,j) pairs with values(j) and the set is
/// orthonormal in the metric of the SPD right-hand matrix.
struct EigenDecomp {
    Vector values;
    Matrix vectors;
};

/// Symmetric generalized eigenproblem A v = lambda S v with S SPD.
/// Reduced by congruence with the Cholesky factor of S to a standard
/// symmetric problem; never forms an explicit inverse.
inline EigenDecomp sym_generalized_eig(const SymMatrix& a, const SymMatrix& s) {
    if (a.n() != s.n())
        throw DimensionMismatch("sym_generalized_eig: dimension mismatch");
    const SpdFactor f = cholesky(s);
    Matrix b = f.lower.triangularView<Eigen::Lower>().solve(a.mat());
    b = f.lower.triangularView<Eigen::Lower>().solve(Matrix(b.transpose()));
    b = 0.5 * (b + b.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    if (es.info() != Eigen::Success)
        throw Error("sym_generalized_eig: eigensolver did not converge");
    Matrix vectors =
        f.lower.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    return EigenDecomp{es.eigenvalues(), std::move(vectors)};
}

/// (v^T A v) / (v^T S v).
inline double rayleigh_quotient(const SymMatrix& a, const SymMatrix& s, const Vector& v) {
    if (v.size() != a.n() || a.n() != s.n())
        throw DimensionMismatch("rayleigh_quotient: dimension mismatch");
    if (v.squaredNorm() == 0.0)
        throw ZeroVector("rayleigh_quotient: zero vector");
    const double num = v.dot(a.mat() * v);
    const double den = v.dot(s.mat() * v);
    return num / den;
}

}  // namespace gapsolve
