#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gapsolve/block_operator.hpp"

namespace gapsolve {

/// Relative width of the guard band above lambda0 inside which shifts are
/// considered invalid.
inline double gap_eps(const BlockOperator& op) { return 1e-10 * scale(op); }

/// Schur data at shift E > lambda0. L is the graph map, M the matrix of the
/// Schur-complement form q_E on graph coordinates, N the squared graph norm
/// ||x + L x||^2. The levels l_k(E) are the generalized eigenvalues of (M, N).
struct SchurPair {
    double E;
    SymMatrix M;
    SymMatrix N;
    Matrix L;
};

/// Build the pair (M_E, N_E) and the graph map L_E:
///   L = (E Sm - Amm)^{-1} Apm^T
///   M = App - E Sp + Apm L        (symmetrized)
///   N = Sp + L^T Sm L
/// Throws ShiftBelowLambda0 when E Sm - Amm is not positive definite.
inline SchurPair schur_pair(const BlockOperator& op, double E) {
    Matrix shifted = E * op.Sm.mat() - op.Amm.mat();
    SpdFactor f;
    try {
        f = cholesky(SymMatrix(std::move(shifted)));
    } catch (const NotPositiveDefinite& e) {
        throw ShiftBelowLambda0("schur_pair: shift E = " + std::to_string(E) +
                                " is not above lambda0 (" + e.what() + ")");
    }
    Matrix L = solve_spd(f, Matrix(op.Apm.transpose()));
    Matrix m = op.App.mat() - E * op.Sp.mat() + op.Apm * L;
    Matrix n = op.Sp.mat() + L.transpose() * op.Sm.mat() * L;
    return SchurPair{E, SymMatrix(0.5 * (m + m.transpose())),
                     SymMatrix(0.5 * (n + n.transpose())), std::move(L)};
}

/// All levels l_1(E) <= ... <= l_np(E).
inline Vector all_levels(const BlockOperator& op, double E) {
    const SchurPair p = schur_pair(op, E);
    return sym_generalized_eig(p.M, p.N).values;
}

/// The kmax smallest levels at shift E, ascending.
inline std::vector<double> levels(const BlockOperator& op, double E, Index kmax) {
    if (kmax < 1 || kmax > op.np())
        throw KTooLarge("levels: kmax = " + std::to_string(kmax) + " exceeds n+ = " +
                        std::to_string(op.np()));
    const Vector all = all_levels(op, E);
    return std::vector<double>(all.data(), all.data() + kmax);
}

/// Certify lambda_{k0} >= E0 by checking l_{k0}(E0) >= -check_tol.
inline bool verify_gap(const BlockOperator& op, Index k0, double E0) {
    const double check_tol = 1e-10 * scale(op);
    return levels(op, E0, k0).back() >= -check_tol;
}

/// History of the fixed-point iteration E -> E + l_k(E) for one target index.
struct SolveTrace {
    Index k = 0;
    std::vector<std::array<double, 2>> iterates;  // (E, l_k(E))
    bool converged = false;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    Index multiplicity = 0;
    bool beyond_gap_edge = false;

    double final_residual() const {
        return iterates.empty() ? std::numeric_limits<double>::quiet_NaN()
                                : std::abs(iterates.back()[1]);
    }
    Index iterations() const { return static_cast<Index>(iterates.size()); }
};

struct SolveOptions {
    std::optional<double> E0;
    double tol = -1.0;  // < 0 means 1e-12 * scale
    Index maxit = 100;
    std::optional<double> gap_edge;  // trusted upper edge; levels above it get flagged
};

namespace detail {

inline double default_E0(double lam0, const SolveOptions& opts, double sc) {
    if (opts.E0) return *opts.E0;
    if (opts.gap_edge && *opts.gap_edge > lam0) return lam0 + 0.1 * (*opts.gap_edge - lam0);
    return lam0 + 0.01 * sc;
}

}  // namespace detail

/// Fixed-point iteration E^(j+1) = E^(j) + l_k(E^(j)), which increases
/// monotonically from below lambda_k and converges quadratically. The level
/// function is strictly decreasing through zero at lambda_k, so any sign
/// change brackets the root and the iteration falls back to bisection; the
/// same happens if an iterate lands at or below lambda0. If every tested
/// shift gives l_k < 0 the bracket collapses onto lambda0 and NoGap is
/// raised: index k has no level above the lower continuum.
inline SolveTrace minmax_iterate(const BlockOperator& op, Index k, const SolveOptions& opts) {
    if (k < 1 || k > op.np())
        throw KTooLarge("minmax_iterate: k = " + std::to_string(k) + " exceeds n+ = " +
                        std::to_string(op.np()));
    const double sc = scale(op);
    const double lam0 = lambda0(op);
    const double eps = gap_eps(op);
    const double floor = lam0 + eps;
    const double tol = opts.tol > 0 ? opts.tol : 1e-12 * sc;
    const double mult_tol = 1e-8 * sc;

    double E = detail::default_E0(lam0, opts, sc);
    if (!(E > floor))
        throw ShiftBelowLambda0("minmax_iterate: E0 = " + std::to_string(E) +
                                " is not above lambda0 = " + std::to_string(lam0));

    SolveTrace trace;
    trace.k = k;

    double lo = -std::numeric_limits<double>::infinity();  // largest E with l_k > 0
    double hi = std::numeric_limits<double>::infinity();   // smallest E with l_k < 0

    for (Index j = 0; j < opts.maxit; ++j) {
        const Vector ells = all_levels(op, E);
        const double ell = ells(k - 1);
        trace.iterates.push_back({E, ell});

        if (std::abs(ell) <= tol) {
            trace.converged = true;
            trace.lambda = E;
            for (Index i = 0; i < ells.size(); ++i)
                if (std::abs(ells(i)) <= mult_tol) ++trace.multiplicity;
            break;
        }

        if (ell > 0)
            lo = std::max(lo, E);
        else
            hi = std::min(hi, E);

        double next = E + ell;
        const bool bracketed = std::isfinite(lo) && std::isfinite(hi);
        if (next <= floor || (bracketed && (next <= lo || next >= hi))) {
            if (bracketed) {
                next = 0.5 * (lo + hi);
            } else if (std::isfinite(hi)) {
                // only negative levels seen so far: walk down toward lambda0
                if (hi - floor <= 8 * eps)
                    throw NoGap("minmax_iterate: l_" + std::to_string(k) +
                                " stays negative down to lambda0 = " + std::to_string(lam0));
                next = 0.5 * (floor + hi);
            }
        }
        E = next;
    }

    if (!trace.converged) {
        // report the best iterate seen
        double best = std::numeric_limits<double>::infinity();
        for (const auto& it : trace.iterates)
            if (std::abs(it[1]) < best) {
                best = std::abs(it[1]);
                trace.lambda = it[0];
            }
        const Vector ells = all_levels(op, trace.lambda);
        for (Index i = 0; i < ells.size(); ++i)
            if (std::abs(ells(i)) <= mult_tol) ++trace.multiplicity;
    }

    if (opts.gap_edge && trace.lambda > *opts.gap_edge) trace.beyond_gap_edge = true;
    return trace;
}

inline SolveTrace minmax_iterate(const BlockOperator& op, Index k, double E0, double tol = -1.0,
                                 Index maxit = 100) {
    SolveOptions opts;
    opts.E0 = E0;
    opts.tol = tol;
    opts.maxit = maxit;
    return minmax_iterate(op, k, opts);
}

}  // namespace gapsolve
