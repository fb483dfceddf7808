#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gapsolve/dirac_radial.hpp"
#include "gapsolve/schur_minmax.hpp"

namespace gapsolve {

struct GapInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Eigenvalues of the assembled pencil lying strictly inside the gap window,
/// ascending: what a naive Rayleigh-Ritz computation reports as gap spectrum.
inline std::vector<double> naive_gap_spectrum(const BlockOperator& op, GapInterval gap) {
    if (!(gap.lo < gap.hi))
        throw InvalidConfig("naive_gap_spectrum: need lo < hi");
    const Vector evs = full_pencil_eigenvalues(op);
    std::vector<double> inside;
    for (Index i = 0; i < evs.size(); ++i)
        if (evs(i) > gap.lo && evs(i) < gap.hi) inside.push_back(evs(i));
    return inside;
}

/// Naive-versus-min-max comparison across basis refinements. Every naive
/// value is matched to the nearest of the tracked min-max levels within
/// match_tol; the unmatched remainder is the spurious set. drift[k-1][i] is
/// |lambda_k(size_i) - lambda_k(size_{i+1})|.
struct PollutionReport {
    struct SizeEntry {
        int size = 0;
        std::vector<double> naive;
        std::vector<double> minmax;
        std::vector<std::pair<int, int>> matched;  // (naive index, level index k)
        std::vector<double> spurious;
    };
    std::vector<SizeEntry> per_size;
    std::vector<std::vector<double>> drift;
    GapInterval gap;
    double match_tol = 1e-4;
};

inline PollutionReport pollution_report(const ChannelSpec& spec, const std::vector<int>& sizes,
                                        GapInterval gap, Index k_max,
                                        double match_tol = 1e-4) {
    if (sizes.size() < 2)
        throw InvalidConfig("pollution_report: drift needs at least two sizes");
    for (size_t i = 0; i + 1 < sizes.size(); ++i)
        if (sizes[i] >= sizes[i + 1])
            throw InvalidConfig("pollution_report: sizes must be increasing");
    if (!(gap.lo < gap.hi))
        throw InvalidConfig("pollution_report: need gap.lo < gap.hi");
    if (k_max < 1)
        throw InvalidConfig("pollution_report: need k_max >= 1");

    PollutionReport report;
    report.gap = gap;
    report.match_tol = match_tol;
    for (int size : sizes) {
        ChannelSpec s = spec;
        s.basis.n_intervals = size;
        const BlockOperator op = assemble(s);

        PollutionReport::SizeEntry entry;
        entry.size = size;
        entry.naive = naive_gap_spectrum(op, gap);

        SolveOptions opts;
        opts.gap_edge = gap.hi;
        opts.tol = 1e-13 * scale(op);
        for (Index k = 1; k <= k_max; ++k)
            entry.minmax.push_back(minmax_iterate(op, k, opts).lambda);

        for (size_t i = 0; i < entry.naive.size(); ++i) {
            int best = -1;
            double dist = match_tol;
            for (size_t k = 0; k < entry.minmax.size(); ++k) {
                const double d = std::abs(entry.naive[i] - entry.minmax[k]);
                if (d <= dist) {
                    dist = d;
                    best = static_cast<int>(k) + 1;
                }
            }
            if (best > 0)
                entry.matched.emplace_back(static_cast<int>(i), best);
            else
                entry.spurious.push_back(entry.naive[i]);
        }
        report.per_size.push_back(std::move(entry));
    }

    report.drift.assign(k_max, {});
    for (Index k = 0; k < k_max; ++k)
        for (size_t i = 0; i + 1 < report.per_size.size(); ++i)
            report.drift[k].push_back(std::abs(report.per_size[i].minmax[k] -
                                               report.per_size[i + 1].minmax[k]));
    return report;
}

}  // namespace gapsolve
