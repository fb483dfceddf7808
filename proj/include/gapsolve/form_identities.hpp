#pragma once

#include <random>

#include "gapsolve/schur_minmax.hpp"

namespace gapsolve {

/// Max residual of the concave decomposition
///   <X,(A-E)X> = q_E(x+ + L x+) - b_E(y- - L x+)
/// over `trials` random X = (x+, y-). The identity is exact; the returned
/// value measures only floating-point error.
inline double decomposition_residual(const BlockOperator& op, double E, int trials,
                                     unsigned long long seed = 0x5eedULL) {
    const SchurPair p = schur_pair(op, E);
    const Matrix be = E * op.Sm.mat() - op.Amm.mat();
    const Matrix app_shift = op.App.mat() - E * op.Sp.mat();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Vector xp(op.np()), ym(op.nm());
        for (Index i = 0; i < xp.size(); ++i) xp(i) = u(rng);
        for (Index i = 0; i < ym.size(); ++i) ym(i) = u(rng);
        const double quad = xp.dot(app_shift * xp) + 2.0 * xp.dot(op.Apm * ym) +
                            ym.dot((op.Amm.mat() - E * op.Sm.mat()) * ym);
        const double q = xp.dot(p.M.mat() * xp);
        const Vector z = ym - p.L * xp;
        const double b = z.dot(be * z);
        worst = std::max(worst, std::abs(quad - q + b));
    }
    return worst;
}

/// Max-abs residual of the resolvent identity for the graph map,
///   L_{E'} = L_E + (E - E') (E' Sm - Amm)^{-1} Sm L_E.
inline double graph_map_identity_residual(const BlockOperator& op, double E, double Eprime) {
    const Matrix le = schur_pair(op, E).L;
    const Matrix lep = schur_pair(op, Eprime).L;
    const SpdFactor f = cholesky(SymMatrix(Matrix(Eprime * op.Sm.mat() - op.Amm.mat())));
    const Matrix corr = solve_spd(f, Matrix(op.Sm.mat() * le));
    return (lep - le - (E - Eprime) * corr).cwiseAbs().maxCoeff();
}

/// Max-abs residual of the resolvent formula
///   (A_full - E)^{-1} = G T_E^{-1} (G^T G)^{-1} G^T - [0;I](E - Amm)^{-1}[0 I]
/// in orthonormalized coordinates, where G = [I; L] spans the graph and T_E
/// is the Schur complement restricted to it, written in G-coordinates.
inline double resolvent_formula_residual(const BlockOperator& op, double E) {
    if ((op.Sp.mat() - Matrix::Identity(op.np(), op.np())).cwiseAbs().maxCoeff() > 1e-12 ||
        (op.Sm.mat() - Matrix::Identity(op.nm(), op.nm())).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidConfig(
            "resolvent_formula_residual: requires Sp = Sm = I (orthonormalize first)");
    const Index np = op.np(), nm = op.nm(), n = np + nm;

    const Matrix a_full = full_matrix(op);
    const Eigen::FullPivLU<Matrix> lu(a_full - E * Matrix::Identity(n, n));
    if (!lu.isInvertible())
        throw SingularShift("resolvent_formula_residual: E is an eigenvalue of the pencil");
    const Matrix direct = lu.inverse();

    const SchurPair p = schur_pair(op, E);
    Matrix g(n, np);
    g.topRows(np) = Matrix::Identity(np, np);
    g.bottomRows(nm) = p.L;

    // T_E in G-coordinates is N^{-1} M, so G T_E^{-1} (G^T G)^{-1} G^T = G M^{-1} G^T.
    const Eigen::FullPivLU<Matrix> mlu(p.M.mat());
    if (!mlu.isInvertible())
        throw SingularShift("resolvent_formula_residual: T_E singular at this shift");
    const Matrix graph_part = g * mlu.solve(Matrix(g.transpose()));

    const SpdFactor f = cholesky(SymMatrix(Matrix(E * Matrix::Identity(nm, nm) - op.Amm.mat())));
    Matrix minus_part = Matrix::Zero(n, n);
    minus_part.bottomRightCorner(nm, nm) = solve_spd(f, Matrix::Identity(nm, nm));

    return (direct - (graph_part - minus_part)).cwiseAbs().maxCoeff();
}

}  // namespace gapsolve
