#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gapsolve/errors.hpp"
#include "gapsolve/matrix.hpp"

namespace gapsolve {

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence. Exact for polynomials of degree <= 2 npts - 1.
inline std::pair<Vector, Vector> gauss_legendre(int npts) {
    if (npts < 1) throw InvalidConfig("gauss_legendre: need at least one node");
    Vector x(npts), w(npts);
    const int m = (npts + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x(i) = -z;
        x(npts - 1 - i) = z;
        w(i) = 2.0 / ((1.0 - z * z) * pp * pp);
        w(npts - 1 - i) = w(i);
    }
    return {x, w};
}

/// Radial B-spline basis on [0, rmax] with full knot multiplicity at both
/// ends. The first and last splines (the only ones not vanishing at an
/// endpoint) are dropped, so every retained function is zero at r = 0 and
/// r = rmax. `order` is polynomial degree + 1.
struct BSplineBasis {
    int order = 0;
    Vector breakpoints;  // n_intervals + 1 strictly increasing radii, 0 .. rmax
    Vector knots;        // breakpoints with multiplicity `order` at both ends
    int nfun = 0;        // retained splines: n_intervals + order - 3

    int n_intervals() const { return static_cast<int>(breakpoints.size()) - 1; }
    int nbasis_full() const { return n_intervals() + order - 1; }
    double rmax() const { return breakpoints(breakpoints.size() - 1); }

    /// Evaluate the `order` splines that can be nonzero at r; fills vals and
    /// ders (arrays of length `order`) and returns the first full-basis
    /// index. Retained index = full index - 1, valid in [0, nfun).
    int eval_nonzero(double r, double* vals, double* ders) const {
        const int p = order - 1;
        const int nknots = static_cast<int>(knots.size());
        int span;
        if (r >= knots(nknots - order - 1)) {
            span = nknots - order - 1;
        } else if (r <= knots(p)) {
            span = p;
        } else {
            int lo = p, hi = nknots - order - 1;
            while (hi - lo > 1) {
                const int mid = (lo + hi) / 2;
                (r < knots(mid) ? hi : lo) = mid;
            }
            span = lo;
        }

        std::vector<double> left(p + 1), right(p + 1), n(p + 1), lower(p, 0.0);
        n[0] = 1.0;
        for (int j = 1; j <= p; ++j) {
            if (j == p)
                for (int t = 0; t < p; ++t) lower[t] = n[t];  // degree p-1 values
            left[j] = r - knots(span + 1 - j);
            right[j] = knots(span + j) - r;
            double saved = 0.0;
            for (int t = 0; t < j; ++t) {
                const double tmp = n[t] / (right[t + 1] + left[j - t]);
                n[t] = saved + right[t + 1] * tmp;
                saved = left[j - t] * tmp;
            }
            n[j] = saved;
        }

        for (int t = 0; t <= p; ++t) {
            const int i = span - p + t;
            double d = 0.0;
            if (t >= 1) {
                const double den = knots(i + p) - knots(i);
                if (den > 0.0) d += lower[t - 1] / den;
            }
            if (t <= p - 1) {
                const double den = knots(i + p + 1) - knots(i + 1);
                if (den > 0.0) d -= lower[t] / den;
            }
            vals[t] = n[t];
            ders[t] = p * d;
        }
        return span - p;
    }

    /// Single retained function (test convenience; assembly uses eval_nonzero).
    double value(int retained, double r) const {
        std::vector<double> v(order), d(order);
        const int first = eval_nonzero(r, v.data(), d.data());
        const int slot = retained + 1 - first;
        return (slot >= 0 && slot < order) ? v[slot] : 0.0;
    }
    double derivative(int retained, double r) const {
        std::vector<double> v(order), d(order);
        const int first = eval_nonzero(r, v.data(), d.data());
        const int slot = retained + 1 - first;
        return (slot >= 0 && slot < order) ? d[slot] : 0.0;
    }
};

/// Breakpoints r_i = rmax (g^i - 1)/(g^n - 1) for grading ratio g > 1,
/// uniform when g = 1.
inline BSplineBasis build_basis(int order, int n_intervals, double rmax,
                                double grading_ratio) {
    if (order < 2 || n_intervals < 1 || !(rmax > 0.0) || !(grading_ratio >= 1.0))
        throw InvalidConfig("build_basis: need order >= 2, n_intervals >= 1, rmax > 0, "
                            "grading_ratio >= 1");
    BSplineBasis b;
    b.order = order;
    b.breakpoints = Vector(n_intervals + 1);
    if (grading_ratio > 1.0 + 1e-12) {
        const double g = grading_ratio;
        const double denom = std::pow(g, n_intervals) - 1.0;
        for (int i = 0; i <= n_intervals; ++i)
            b.breakpoints(i) = rmax * (std::pow(g, i) - 1.0) / denom;
    } else {
        for (int i = 0; i <= n_intervals; ++i)
            b.breakpoints(i) = rmax * double(i) / double(n_intervals);
    }
    b.breakpoints(0) = 0.0;
    b.breakpoints(n_intervals) = rmax;

    const int nknots = n_intervals + 2 * order - 1;
    b.knots = Vector(nknots);
    for (int i = 0; i < order; ++i) {
        b.knots(i) = 0.0;
        b.knots(nknots - 1 - i) = rmax;
    }
    for (int i = 1; i < n_intervals; ++i) b.knots(order - 1 + i) = b.breakpoints(i);

    b.nfun = b.nbasis_full() - 2;
    if (b.nfun < 1)
        throw InvalidConfig("build_basis: no interior functions; enlarge the basis");
    return b;
}

}  // namespace gapsolve
