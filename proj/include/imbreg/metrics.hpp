#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbreg/density.hpp"
#include "imbreg/error.hpp"

namespace imbreg {

// Mean imbalance ratio from per-sample density ratios f_x/f_r: the average
// multiplicative deviation max(r, 1/r), >= 1 with 1 meaning balanced.
inline double mir_from_ratios(std::span<const double> ratios) {
    if (ratios.empty()) throw Error(ErrorKind::config, "mir needs at least one ratio");
    double sum = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0)) throw Error(ErrorKind::numeric, "non-positive density ratio");
        sum += std::max(r, 1.0 / r);
    }
    return sum / static_cast<double>(ratios.size());
}

// mIR of a target sample against a domain-relevance density (uniform over the
// sample range when omitted). The empirical density is a Silverman KDE.
inline double compute_mir(std::span<const double> targets,
                          std::optional<DensityModel> f_r = {}) {
    DensityModel fx = fit_kde(targets);
    DensityModel fr = f_r ? std::move(*f_r)
                          : uniform_density(fx.support_lo(), fx.support_hi());
    std::vector<double> ratios(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double denom = fr.evaluate(targets[i]);
        if (!(denom > 0.0))
            throw Error(ErrorKind::numeric, "domain relevance density is zero at a sample");
        ratios[i] = fx.evaluate(targets[i]) / denom;
    }
    return mir_from_ratios(ratios);
}

constexpr std::size_t kBinCount = 5;

enum class BinLabel { very_rare, rare, medium, frequent, very_frequent };

inline const char* to_string(BinLabel l) {
    switch (l) {
        case BinLabel::very_rare: return "very_rare";
        case BinLabel::rare: return "rare";
        case BinLabel::medium: return "medium";
        case BinLabel::frequent: return "frequent";
        case BinLabel::very_frequent: return "very_frequent";
    }
    return "?";
}

// Rank labels by ascending occupancy; ties resolved toward the lower bin
// index. labels[b] is the label of bin b.
inline std::array<BinLabel, kBinCount> assign_rank_labels(
    const std::array<std::size_t, kBinCount>& counts) {
    std::array<std::size_t, kBinCount> order{0, 1, 2, 3, 4};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return counts[a] != counts[b] ? counts[a] < counts[b] : a < b;
    });
    std::array<BinLabel, kBinCount> labels{};
    for (std::size_t rank = 0; rank < kBinCount; ++rank)
        labels[order[rank]] = static_cast<BinLabel>(rank);
    return labels;
}

// Five equal-width target bins with per-bin mean squared error. Empty bins
// carry no error value.
struct BinReport {
    std::array<double, kBinCount + 1> edges{};
    std::array<std::size_t, kBinCount> counts{};
    std::array<BinLabel, kBinCount> labels{};
    std::array<std::optional<double>, kBinCount> errors{};

    std::size_t bin_with_label(BinLabel l) const {
        for (std::size_t b = 0; b < kBinCount; ++b)
            if (labels[b] == l) return b;
        return kBinCount;  // unreachable: labels form a permutation
    }
};

inline std::array<double, kBinCount + 1> equal_width_edges(double lo, double hi) {
    if (!(hi > lo)) throw Error(ErrorKind::degenerate, "cannot bin a constant target range");
    std::array<double, kBinCount + 1> edges{};
    for (std::size_t b = 0; b <= kBinCount; ++b)
        edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(kBinCount);
    return edges;
}

// Per-bin squared-error report. Bins span [min, max] of y_true unless edges
// are supplied (test-set evaluation reuses edges derived up front so train
// and test bins align). Values outside the edge range clamp into the boundary
// bins.
inline BinReport bin_errors(std::span<const double> y_true, std::span<const double> y_pred,
                            std::optional<std::array<double, kBinCount + 1>> edges = {}) {
    if (y_true.size() != y_pred.size())
        throw Error(ErrorKind::config, "bin_errors needs equal-length vectors");
    if (y_true.empty()) throw Error(ErrorKind::config, "bin_errors needs samples");

    BinReport report;
    if (edges) {
        report.edges = *edges;
    } else {
        auto [lo, hi] = min_max(y_true);
        report.edges = equal_width_edges(lo, hi);
    }
    double lo = report.edges.front(), hi = report.edges.back();

    std::array<double, kBinCount> sums{};
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        std::size_t b = detail::bin_of(y_true[i], lo, hi, kBinCount);
        double e = y_pred[i] - y_true[i];
        sums[b] += e * e;
        ++report.counts[b];
    }
    for (std::size_t b = 0; b < kBinCount; ++b)
        if (report.counts[b] > 0)
            report.errors[b] = sums[b] / static_cast<double>(report.counts[b]);
    report.labels = assign_rank_labels(report.counts);
    return report;
}

// Divide each strategy's bin error by the mean over strategies of that bin's
// errors, so the per-bin mean across strategies is 1. Strategies missing a
// bin are excluded from that bin's mean.
inline std::vector<std::array<std::optional<double>, kBinCount>> normalize_bin_errors(
    const std::vector<BinReport>& reports) {
    std::vector<std::array<std::optional<double>, kBinCount>> out(reports.size());
    for (std::size_t b = 0; b < kBinCount; ++b) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : reports)
            if (r.errors[b]) { sum += *r.errors[b]; ++n; }
        if (n == 0) continue;
        double mean = sum / static_cast<double>(n);
        for (std::size_t s = 0; s < reports.size(); ++s)
            if (reports[s].errors[b])
                out[s][b] = mean > 0.0 ? *reports[s].errors[b] / mean : 1.0;
    }
    return out;
}

}  // namespace imbreg
