#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "imbreg/error.hpp"
#include "imbreg/metrics.hpp"

namespace imbreg {

enum class WilcoxonMethod { automatic, exact, normal_approximation };

struct SignificanceResult {
    double statistic = 0.0;  // min(W+, W-)
    double p_value = 1.0;    // two-sided
    std::size_t n_effective = 0;
    WilcoxonMethod method = WilcoxonMethod::exact;
};

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace detail

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences are
// dropped, tied absolute differences get midranks. The exact null
// distribution is enumerated for up to 25 effective pairs (dynamic program
// over doubled ranks); larger samples use the normal approximation with
// tie-corrected variance and continuity correction.
inline SignificanceResult wilcoxon_signed_rank(std::span<const double> a,
                                               std::span<const double> b,
                                               WilcoxonMethod force = WilcoxonMethod::automatic) {
    if (a.size() != b.size())
        throw Error(ErrorKind::config, "wilcoxon needs paired samples of equal length");

    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    const std::size_t n = diffs.size();
    SignificanceResult result;
    result.n_effective = n;
    if (n == 0) {
        result.method = WilcoxonMethod::exact;
        return result;  // p = 1, no evidence
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(diffs[x]) < std::abs(diffs[y]);
    });

    std::vector<double> ranks(n);
    std::vector<std::size_t> tie_sizes;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
        double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = midrank;
        tie_sizes.push_back(j - i);
        i = j;
    }

    double w_plus = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += ranks[i];
        if (diffs[i] > 0.0) w_plus += ranks[i];
    }
    double w_minus = total - w_plus;
    result.statistic = std::min(w_plus, w_minus);

    bool exact = force == WilcoxonMethod::exact ||
                 (force == WilcoxonMethod::automatic && n <= 25);
    if (exact) {
        result.method = WilcoxonMethod::exact;
        // Distribution of W+ over all 2^n sign assignments, on doubled ranks
        // so midranks become integers.
        std::vector<long long> r2(n);
        long long max_sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            r2[i] = std::llround(2.0 * ranks[i]);
            max_sum += r2[i];
        }
        std::vector<double> count(static_cast<std::size_t>(max_sum) + 1, 0.0);
        count[0] = 1.0;
        long long reach = 0;
        for (std::size_t i = 0; i < n; ++i) {
            reach += r2[i];
            for (long long s = reach; s >= r2[i]; --s)
                count[static_cast<std::size_t>(s)] +=
                    count[static_cast<std::size_t>(s - r2[i])];
        }
        double denom = std::ldexp(1.0, static_cast<int>(n));  // 2^n
        auto w2 = std::llround(2.0 * w_plus);
        double p_le = 0.0, p_ge = 0.0;
        for (long long s = 0; s <= max_sum; ++s) {
            if (s <= w2) p_le += count[static_cast<std::size_t>(s)];
            if (s >= w2) p_ge += count[static_cast<std::size_t>(s)];
        }
        result.p_value = std::min(1.0, 2.0 * std::min(p_le, p_ge) / denom);
    } else {
        result.method = WilcoxonMethod::normal_approximation;
        double nn = static_cast<double>(n);
        double mu = nn * (nn + 1.0) / 4.0;
        double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        for (std::size_t t : tie_sizes) {
            double td = static_cast<double>(t);
            var -= (td * td * td - td) / 48.0;
        }
        if (!(var > 0.0)) {
            result.p_value = 1.0;
            return result;
        }
        double w = result.statistic;
        double z = (w - mu + 0.5) / std::sqrt(var);  // continuity-corrected, w <= mu
        result.p_value = std::min(1.0, 2.0 * detail::normal_cdf(z));
    }
    return result;
}

// Per-(dataset, bin) paired repetition errors of one strategy against the
// baseline; absent when the bin held no test samples.
struct PairedSeries {
    std::vector<double> strategy;
    std::vector<double> baseline;
};

struct BinTallyEntry {
    std::size_t wins = 0;
    std::size_t significant_wins = 0;
    std::size_t losses = 0;
    std::size_t significant_losses = 0;
};

// Win/loss counts per bin across datasets: a win is a lower mean error than
// the baseline; significance comes from the Wilcoxon test at level alpha.
inline std::array<BinTallyEntry, kBinCount> bin_win_tally(
    const std::vector<std::array<std::optional<PairedSeries>, kBinCount>>& per_dataset,
    double alpha = 0.05) {
    std::array<BinTallyEntry, kBinCount> tally{};
    for (const auto& dataset : per_dataset) {
        for (std::size_t b = 0; b < kBinCount; ++b) {
            if (!dataset[b]) continue;
            const auto& series = *dataset[b];
            double ms = mean_of(series.strategy);
            double mb = mean_of(series.baseline);
            if (ms == mb) continue;
            bool significant =
                wilcoxon_signed_rank(series.strategy, series.baseline).p_value < alpha;
            if (ms < mb) {
                ++tally[b].wins;
                if (significant) ++tally[b].significant_wins;
            } else {
                ++tally[b].losses;
                if (significant) ++tally[b].significant_losses;
            }
        }
    }
    return tally;
}

}  // namespace imbreg
