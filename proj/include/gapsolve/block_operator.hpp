#pragma once

#include <cmath>
#include <utility>

#include "gapsolve/matrix.hpp"

namespace gapsolve {

/// Symmetric block operator under an orthogonal splitting: the form on the
/// plus space (App), the coupling (Apm), the form on the minus space (Amm),
/// and the SPD overlaps of the two trial bases (Sp, Sm). The assembled
/// pencil is ([[App, Apm], [Apm^T, Amm]], diag(Sp, Sm)).
struct BlockOperator {
    SymMatrix App;
    Matrix Apm;
    SymMatrix Amm;
    SymMatrix Sp;
    SymMatrix Sm;

    BlockOperator(SymMatrix app, Matrix apm, SymMatrix amm, SymMatrix sp, SymMatrix sm)
        : App(std::move(app)),
          Apm(std::move(apm)),
          Amm(std::move(amm)),
          Sp(std::move(sp)),
          Sm(std::move(sm)) {
        if (Apm.rows() != App.n() || Apm.cols() != Amm.n() || Sp.n() != App.n() ||
            Sm.n() != Amm.n())
            throw DimensionMismatch("BlockOperator: inconsistent block dimensions");
        if (!Apm.allFinite())
            throw Error("BlockOperator: non-finite coupling entry");
        cholesky(Sp);
        cholesky(Sm);
    }

    /// Blocks with identity overlaps.
    static BlockOperator with_identity_overlaps(SymMatrix app, Matrix apm, SymMatrix amm) {
        const Index np = app.n();
        const Index nm = amm.n();
        return BlockOperator(std::move(app), std::move(apm), std::move(amm),
                             SymMatrix::identity(np), SymMatrix::identity(nm));
    }

    Index np() const { return App.n(); }
    Index nm() const { return Amm.n(); }
};

/// Magnitude reference for relative tolerances.
inline double scale(const BlockOperator& op) {
    return std::max({op.App.max_abs(), op.Amm.max_abs(), op.Apm.cwiseAbs().maxCoeff(), 1.0});
}

inline Matrix full_matrix(const BlockOperator& op) {
    const Index np = op.np(), nm = op.nm();
    Matrix a(np + nm, np + nm);
    a.topLeftCorner(np, np) = op.App.mat();
    a.topRightCorner(np, nm) = op.Apm;
    a.bottomLeftCorner(nm, np) = op.Apm.transpose();
    a.bottomRightCorner(nm, nm) = op.Amm.mat();
    return a;
}

inline Matrix full_overlap(const BlockOperator& op) {
    const Index np = op.np(), nm = op.nm();
    Matrix s = Matrix::Zero(np + nm, np + nm);
    s.topLeftCorner(np, np) = op.Sp.mat();
    s.bottomRightCorner(nm, nm) = op.Sm.mat();
    return s;
}

/// All eigenvalues of the assembled pencil, ascending. This is the naive
/// Rayleigh-Ritz spectrum of the discretized operator.
inline Vector full_pencil_eigenvalues(const BlockOperator& op) {
    return sym_generalized_eig(SymMatrix(full_matrix(op)), SymMatrix(full_overlap(op))).values;
}

/// Supremum of the Rayleigh quotient over the minus space: the largest
/// generalized eigenvalue of (Amm, Sm).
inline double lambda0(const BlockOperator& op) {
    const EigenDecomp d = sym_generalized_eig(op.Amm, op.Sm);
    return d.values(d.values.size() - 1);
}

/// Equivalent operator with Sp = Sm = I, by congruence with the inverse
/// Cholesky factors of the overlaps. Generalized eigenvalues of every
/// derived problem are unchanged.
inline BlockOperator orthonormalize(const BlockOperator& op) {
    const SpdFactor fp = cholesky(op.Sp);
    const SpdFactor fm = cholesky(op.Sm);
    const auto lower_solve = [](const SpdFactor& f, const Matrix& m) {
        return Matrix(f.lower.triangularView<Eigen::Lower>().solve(m));
    };
    Matrix app = lower_solve(fp, op.App.mat());
    app = lower_solve(fp, Matrix(app.transpose()));
    Matrix amm = lower_solve(fm, op.Amm.mat());
    amm = lower_solve(fm, Matrix(amm.transpose()));
    Matrix apm = lower_solve(fp, op.Apm);
    apm = lower_solve(fm, Matrix(apm.transpose())).transpose();
    return BlockOperator::with_identity_overlaps(SymMatrix(0.5 * (app + app.transpose())),
                                                 std::move(apm),
                                                 SymMatrix(0.5 * (amm + amm.transpose())));
}

/// Discrete (-Laplacian, +Laplacian) block toy on (0, length) with Dirichlet
/// ends: App is the n-point second-difference matrix, Amm = -App, Apm = 0.
inline BlockOperator toy_laplacian_block(Index n, double length) {
    if (n < 1 || !(length > 0.0))
        throw InvalidConfig("toy_laplacian_block: need n >= 1 and length > 0");
    const double h = length / double(n + 1);
    Matrix t = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        t(i, i) = 2.0 / (h * h);
        if (i + 1 < n) {
            t(i + 1, i) = -1.0 / (h * h);
            t(i, i + 1) = -1.0 / (h * h);
        }
    }
    SymMatrix app(t);
    SymMatrix amm(Matrix(-t));
    return BlockOperator::with_identity_overlaps(std::move(app), Matrix::Zero(n, n),
                                                 std::move(amm));
}

}  // namespace gapsolve
