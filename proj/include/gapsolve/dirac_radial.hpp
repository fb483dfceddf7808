#pragma once

#include <cmath>
#include <iostream>
#include <limits>
#include <vector>

#include "gapsolve/block_operator.hpp"
#include "gapsolve/bspline.hpp"
#include "gapsolve/schur_minmax.hpp"

namespace gapsolve {

/// One additive term of the radial potential V(r): strength/r (coulomb),
/// strength e^{-mu r}/r (yukawa) or a constant shift.
struct PotentialTerm {
    enum class Kind { coulomb, yukawa, constant };
    Kind kind = Kind::coulomb;
    double strength = 0.0;
    double mu = 0.0;  // yukawa only, > 0
};

struct BasisConfig {
    int order = 7;
    int n_intervals = 40;
    double rmax = 60.0;
    double grading = 1.15;
};

enum class Splitting { talman, free_projector };

/// One radial Dirac problem: relativistic angular quantum number kappa,
/// potential terms, basis configuration and the choice of splitting.
/// Units hbar = m = c = 1, so the free gap edges sit at +-1.
struct ChannelSpec {
    int kappa = -1;
    std::vector<PotentialTerm> potential;
    BasisConfig basis;
    Splitting splitting = Splitting::talman;
};

inline double potential_value(const std::vector<PotentialTerm>& terms, double r) {
    double v = 0.0;
    for (const auto& t : terms) {
        switch (t.kind) {
            case PotentialTerm::Kind::coulomb:
                v += t.strength / r;
                break;
            case PotentialTerm::Kind::yukawa:
                v += t.strength * std::exp(-t.mu * r) / r;
                break;
            case PotentialTerm::Kind::constant:
                v += t.strength;
                break;
        }
    }
    return v;
}

/// Default box size for a target energy E in the gap: bound states decay
/// like e^{-r sqrt(1-E^2)}.
inline double suggested_rmax(double e_guess) {
    const double decay = std::sqrt(std::max(1.0 - e_guess * e_guess, 1e-6));
    return std::min(30.0 / decay, 200.0);
}

namespace detail {

/// Gram-type radial matrices over the retained splines: S = <b_i, b_j>,
/// over_r = <b_i, b_j / r>, D = <b_i, b_j'>, V = <b_i, V b_j>.
struct RadialMatrices {
    Matrix S, over_r, D, V;
};

inline void validate_channel(const ChannelSpec& spec) {
    if (spec.kappa == 0)
        throw InvalidQuantumNumbers("channel: kappa must be a nonzero integer");
    double attractive_coulomb = 0.0;
    for (const auto& t : spec.potential) {
        if (t.kind == PotentialTerm::Kind::yukawa && !(t.mu > 0.0))
            throw InvalidConfig("channel: yukawa decay rate must be positive");
        if (t.kind == PotentialTerm::Kind::coulomb && t.strength < 0.0)
            attractive_coulomb += t.strength;
    }
    if (attractive_coulomb < -1.0)
        std::cerr << "gapsolve: warning: attractive coulomb strength "
                  << attractive_coulomb << " exceeds the critical value -1\n";
}

inline RadialMatrices assemble_radial(const BSplineBasis& basis,
                                      const std::vector<PotentialTerm>& terms) {
    const int nf = basis.nfun;
    const int order = basis.order;
    RadialMatrices rm{Matrix::Zero(nf, nf), Matrix::Zero(nf, nf), Matrix::Zero(nf, nf),
                      Matrix::Zero(nf, nf)};
    const auto [gx, gw] = gauss_legendre(order + 4);
    std::vector<double> vals(order), ders(order);

    auto accumulate_panel = [&](double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < gx.size(); ++q) {
            const double r = mid + half * gx(q);
            const double w = half * gw(q);
            const double v = potential_value(terms, r);
            if (!std::isfinite(v))
                throw QuadratureFailure("assemble: potential not finite at r = " +
                                        std::to_string(r));
            const int first = basis.eval_nonzero(r, vals.data(), ders.data());
            for (int s = 0; s < order; ++s) {
                const int i = first + s - 1;  // retained index
                if (i < 0 || i >= nf) continue;
                for (int t = 0; t < order; ++t) {
                    const int j = first + t - 1;
                    if (j < 0 || j >= nf) continue;
                    const double pij = w * vals[s] * vals[t];
                    rm.S(i, j) += pij;
                    rm.over_r(i, j) += pij / r;
                    rm.D(i, j) += w * vals[s] * ders[t];
                    rm.V(i, j) += pij * v;
                }
            }
        }
    };

    for (int cell = 0; cell < basis.n_intervals(); ++cell) {
        const double a = basis.breakpoints(cell), b = basis.breakpoints(cell + 1);
        if (cell == 0) {
            // the singular endpoint deserves one extra subdivision
            accumulate_panel(a, 0.5 * (a + b));
            accumulate_panel(0.5 * (a + b), b);
        } else {
            accumulate_panel(a, b);
        }
    }
    if (!rm.S.allFinite() || !rm.over_r.allFinite() || !rm.D.allFinite() || !rm.V.allFinite())
        throw QuadratureFailure("assemble: non-finite radial integral");
    return rm;
}

inline Matrix coupling_matrix(const RadialMatrices& rm, int kappa) {
    // <b_i, (-d/dr + kappa/r) b_j>
    return -rm.D + double(kappa) * rm.over_r;
}

/// Partition indices of a free-channel spectrum into negative / positive
/// branches; eigenvalues inside the gap make the splitting ill-defined.
inline std::pair<std::vector<Index>, std::vector<Index>> split_by_sign(const Vector& evs,
                                                                       double band_tol = 1e-8) {
    std::vector<Index> neg, pos;
    for (Index i = 0; i < evs.size(); ++i) {
        if (std::abs(evs(i)) < 1.0 - band_tol)
            throw DegenerateSplit("free-projector split: free eigenvalue " +
                                  std::to_string(evs(i)) + " inside the gap");
        (evs(i) < 0.0 ? neg : pos).push_back(i);
    }
    return {neg, pos};
}

}  // namespace detail

/// Radial Dirac channel under the upper/lower-component splitting:
///   App = S + V,  Amm = -S + V,  Apm = <b_i, (-d/dr + kappa/r) b_j>,
///   Sp = Sm = S.
inline BlockOperator assemble_channel(const ChannelSpec& spec) {
    detail::validate_channel(spec);
    const BSplineBasis basis = build_basis(spec.basis.order, spec.basis.n_intervals,
                                           spec.basis.rmax, spec.basis.grading);
    const detail::RadialMatrices rm = detail::assemble_radial(basis, spec.potential);
    const Matrix p = detail::coupling_matrix(rm, spec.kappa);
    SymMatrix s(rm.S);
    return BlockOperator(SymMatrix(Matrix(rm.S + rm.V)), p, SymMatrix(Matrix(-rm.S + rm.V)),
                         s, s);
}

/// The same pencil expressed in the eigenbasis of the free channel, split
/// by the sign of the free eigenvalues: App = U+^T A U+, Apm = U+^T A U-,
/// Amm = U-^T A U-, Sp = Sm = I.
inline BlockOperator assemble_free_projector(const ChannelSpec& spec) {
    detail::validate_channel(spec);
    const BSplineBasis basis = build_basis(spec.basis.order, spec.basis.n_intervals,
                                           spec.basis.rmax, spec.basis.grading);
    const detail::RadialMatrices rm = detail::assemble_radial(basis, spec.potential);
    const Matrix p = detail::coupling_matrix(rm, spec.kappa);
    const int nf = basis.nfun;

    Matrix h0(2 * nf, 2 * nf), s_full = Matrix::Zero(2 * nf, 2 * nf);
    h0.topLeftCorner(nf, nf) = rm.S;
    h0.topRightCorner(nf, nf) = p;
    h0.bottomLeftCorner(nf, nf) = p.transpose();
    h0.bottomRightCorner(nf, nf) = -rm.S;
    s_full.topLeftCorner(nf, nf) = rm.S;
    s_full.bottomRightCorner(nf, nf) = rm.S;

    const EigenDecomp free = sym_generalized_eig(SymMatrix(h0), SymMatrix(s_full));
    const auto [neg, pos] = detail::split_by_sign(free.values);

    Matrix a_full = h0;
    a_full.topLeftCorner(nf, nf) += rm.V;
    a_full.bottomRightCorner(nf, nf) += rm.V;

    Matrix up(2 * nf, pos.size()), um(2 * nf, neg.size());
    for (size_t c = 0; c < pos.size(); ++c) up.col(c) = free.vectors.col(pos[c]);
    for (size_t c = 0; c < neg.size(); ++c) um.col(c) = free.vectors.col(neg[c]);

    const Matrix aup = a_full * up, aum = a_full * um;
    Matrix app = up.transpose() * aup;
    Matrix amm = um.transpose() * aum;
    return BlockOperator::with_identity_overlaps(SymMatrix(0.5 * (app + app.transpose())),
                                                 up.transpose() * aum,
                                                 SymMatrix(0.5 * (amm + amm.transpose())));
}

inline BlockOperator assemble(const ChannelSpec& spec) {
    return spec.splitting == Splitting::talman ? assemble_channel(spec)
                                               : assemble_free_projector(spec);
}

/// Closed-form point-Coulomb eigenvalue (the validation oracle):
///   E = (1 + nu^2 / (n - |kappa| + sqrt(kappa^2 - nu^2))^2)^{-1/2}.
inline double exact_energy(double nu, int kappa, int n) {
    if (kappa == 0 || !(nu > 0.0) || nu > std::abs(kappa) || n < std::abs(kappa))
        throw InvalidQuantumNumbers("exact_energy: need kappa != 0, 0 < nu <= |kappa|, "
                                    "n >= |kappa|");
    const double gamma = std::sqrt(double(kappa) * kappa - nu * nu);
    const double denom = double(n) - std::abs(kappa) + gamma;
    if (denom == 0.0) return 0.0;  // critical ground state
    return 1.0 / std::sqrt(1.0 + nu * nu / (denom * denom));
}

/// Index of the closed-form level matching the k-th gap eigenvalue of a
/// pure-Coulomb channel: principal quantum number n = k + |kappa| - 1 for
/// kappa < 0, n = k + kappa for kappa > 0.
inline int principal_quantum_number(int kappa, Index k) {
    return kappa < 0 ? static_cast<int>(k) + std::abs(kappa) - 1
                     : static_cast<int>(k) + kappa;
}

/// Discrete Hardy-Dirac check: smallest level of the Schur pair at E = 0
/// for the attractive channel V = -nu/r. The continuous form is nonnegative
/// for nu <= 1.
inline double hardy_dirac_min(double nu, int kappa, const BasisConfig& basis) {
    if (!(nu > 0.0) || nu > 1.0)
        throw InvalidQuantumNumbers("hardy_dirac_min: need 0 < nu <= 1");
    ChannelSpec spec;
    spec.kappa = kappa;
    spec.potential = {PotentialTerm{PotentialTerm::Kind::coulomb, -nu, 0.0}};
    spec.basis = basis;
    const BlockOperator op = assemble_channel(spec);
    return all_levels(op, 0.0)(0);
}

/// lambda0 of the assembled channel. Exactly -1 for the free Talman channel;
/// drifts below -1 for singular attractive potentials.
inline double lambda0_channel(const ChannelSpec& spec) { return lambda0(assemble(spec)); }

struct ConvergenceRow {
    int size = 0;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double exact = std::numeric_limits<double>::quiet_NaN();
    double abs_error = std::numeric_limits<double>::quiet_NaN();
    Index iterations = 0;
    bool beyond_gap_edge = false;
};

/// Closed-form oracle for a channel whose potential is a single attractive
/// coulomb term within the critical range; NaN otherwise.
inline double channel_oracle(const ChannelSpec& spec, Index k) {
    if (spec.potential.size() != 1) return std::numeric_limits<double>::quiet_NaN();
    const PotentialTerm& t = spec.potential.front();
    if (t.kind != PotentialTerm::Kind::coulomb || !(t.strength < 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    const double nu = -t.strength;
    if (nu > std::abs(spec.kappa)) return std::numeric_limits<double>::quiet_NaN();
    return exact_energy(nu, spec.kappa, principal_quantum_number(spec.kappa, k));
}

/// Solve the k-th gap level across a list of basis sizes (n_intervals) and
/// report the error against the closed-form oracle when one applies.
inline std::vector<ConvergenceRow> convergence_study(const ChannelSpec& spec, Index k,
                                                     const std::vector<int>& sizes,
                                                     double tol = -1.0) {
    if (sizes.empty())
        throw InvalidConfig("convergence_study: need at least one size");
    for (size_t i = 0; i + 1 < sizes.size(); ++i)
        if (sizes[i] >= sizes[i + 1])
            throw InvalidConfig("convergence_study: sizes must be increasing");
    std::vector<ConvergenceRow> rows;
    for (int size : sizes) {
        ChannelSpec s = spec;
        s.basis.n_intervals = size;
        const BlockOperator op = assemble(s);
        SolveOptions opts;
        opts.tol = tol;
        opts.gap_edge = 1.0;
        const SolveTrace t = minmax_iterate(op, k, opts);
        ConvergenceRow row;
        row.size = size;
        row.lambda = t.lambda;
        row.iterations = t.iterations();
        row.beyond_gap_edge = t.beyond_gap_edge;
        row.exact = channel_oracle(s, k);
        if (std::isfinite(row.exact)) row.abs_error = std::abs(t.lambda - row.exact);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gapsolve
