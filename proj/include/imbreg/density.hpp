#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "imbreg/error.hpp"
#include "imbreg/util.hpp"

namespace imbreg {

enum class DensityKind { histogram, kde, smoothed_histogram, uniform };

namespace detail {

inline std::size_t bin_of(double y, double lo, double hi, std::size_t k) {
    double t = (y - lo) / (hi - lo);
    auto idx = static_cast<long long>(std::floor(t * static_cast<double>(k)));
    if (idx < 0) idx = 0;
    if (idx >= static_cast<long long>(k)) idx = static_cast<long long>(k) - 1;
    return static_cast<std::size_t>(idx);
}

// Linearly interpolated quantile (the common "type 7" rule) of sorted values.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    double h = (static_cast<double>(n) - 1.0) * p;
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo >= n - 1) return sorted[n - 1];
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double gaussian_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace detail

// A fitted univariate density-like model over the target domain. Histogram
// variants return per-bin statistics rather than true densities; callers that
// need a probability density use the kde or uniform kinds.
class DensityModel {
public:
    double operator()(double y) const { return evaluate(y); }

    double evaluate(double y) const {
        switch (kind_) {
            case DensityKind::histogram:
            case DensityKind::smoothed_histogram:
                return bin_values_[detail::bin_of(y, lo_, hi_, bin_values_.size())];
            case DensityKind::kde: {
                double sum = 0.0;
                for (double p : points_) sum += detail::gaussian_pdf((y - p) / bandwidth_);
                return sum / (static_cast<double>(points_.size()) * bandwidth_);
            }
            case DensityKind::uniform:
                return 1.0 / (hi_ - lo_);
        }
        return 0.0;
    }

    DensityKind kind() const { return kind_; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    double bandwidth() const { return bandwidth_; }
    const std::vector<double>& bin_values() const { return bin_values_; }
    std::size_t bin_count() const { return bin_values_.size(); }

    static DensityModel histogram(double lo, double hi, std::vector<double> values) {
        DensityModel m;
        m.kind_ = DensityKind::histogram;
        m.lo_ = lo;
        m.hi_ = hi;
        m.bin_values_ = std::move(values);
        return m;
    }
    static DensityModel smoothed(double lo, double hi, std::vector<double> values) {
        DensityModel m;
        m.kind_ = DensityKind::smoothed_histogram;
        m.lo_ = lo;
        m.hi_ = hi;
        m.bin_values_ = std::move(values);
        return m;
    }
    static DensityModel kde(std::vector<double> points, double bandwidth, double lo, double hi) {
        DensityModel m;
        m.kind_ = DensityKind::kde;
        m.points_ = std::move(points);
        m.bandwidth_ = bandwidth;
        m.lo_ = lo;
        m.hi_ = hi;
        return m;
    }
    static DensityModel uniform(double lo, double hi) {
        if (!(hi > lo)) throw Error(ErrorKind::config, "uniform density needs hi > lo");
        DensityModel m;
        m.kind_ = DensityKind::uniform;
        m.lo_ = lo;
        m.hi_ = hi;
        return m;
    }

private:
    DensityModel() = default;

    DensityKind kind_ = DensityKind::uniform;
    double lo_ = 0.0, hi_ = 1.0;
    double bandwidth_ = 0.0;
    std::vector<double> bin_values_;  // relative frequencies or smoothed counts
    std::vector<double> points_;      // kde sample
};

// Equal-width histogram over [min, max]; the maximum falls into the last bin.
// Bin values are relative frequencies p_j = b_j / max_l b_l, so the fullest
// bin evaluates to exactly 1.
inline DensityModel fit_histogram(std::span<const double> targets, std::size_t k) {
    if (k < 2) throw Error(ErrorKind::config, "histogram needs at least 2 bins");
    auto [lo, hi] = std::pair{*std::min_element(targets.begin(), targets.end()),
                              *std::max_element(targets.begin(), targets.end())};
    if (!(hi > lo))
        throw Error(ErrorKind::degenerate, "constant target vector: histogram not estimable");
    std::vector<double> counts(k, 0.0);
    for (double y : targets) counts[detail::bin_of(y, lo, hi, k)] += 1.0;
    double max_count = *std::max_element(counts.begin(), counts.end());
    for (double& c : counts) c /= max_count;
    return DensityModel::histogram(lo, hi, std::move(counts));
}

inline std::vector<double> histogram_counts(std::span<const double> targets, double lo,
                                            double hi, std::size_t k) {
    std::vector<double> counts(k, 0.0);
    for (double y : targets) counts[detail::bin_of(y, lo, hi, k)] += 1.0;
    return counts;
}

// h = 0.9 * min(sigma, IQR/1.34) * N^(-1/5). Falls back to sigma when the
// IQR collapses to zero on tie-heavy data.
inline double silverman_bandwidth(std::span<const double> targets) {
    const std::size_t n = targets.size();
    if (n < 2) throw Error(ErrorKind::degenerate, "bandwidth needs at least 2 samples");
    double sigma = sample_std(targets);
    std::vector<double> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());
    double iqr = detail::quantile_sorted(sorted, 0.75) - detail::quantile_sorted(sorted, 0.25);
    double spread = sigma;
    if (iqr > 0.0) spread = std::min(sigma, iqr / 1.34);
    if (!(spread > 0.0))
        throw Error(ErrorKind::degenerate, "zero spread: bandwidth not estimable");
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

// Gaussian KDE with an exact sum over all sample points.
inline DensityModel fit_kde(std::span<const double> targets, double bandwidth = 0.0) {
    double h = bandwidth > 0.0 ? bandwidth : silverman_bandwidth(targets);
    auto [lo, hi] = std::pair{*std::min_element(targets.begin(), targets.end()),
                              *std::max_element(targets.begin(), targets.end())};
    return DensityModel::kde(std::vector<double>(targets.begin(), targets.end()), h, lo, hi);
}

// Histogram convolved with a discrete Gaussian kernel (window and variance in
// bin units). Each bin's count is spread over its valid window with the kernel
// renormalized there, so total mass is conserved at the boundaries too.
inline DensityModel fit_smoothed_histogram(std::span<const double> targets, std::size_t k,
                                           std::size_t kernel_width_bins,
                                           double kernel_var_bins) {
    if (k < 2) throw Error(ErrorKind::config, "smoothed histogram needs at least 2 bins");
    if (kernel_width_bins < 1 || kernel_width_bins % 2 == 0)
        throw Error(ErrorKind::config, "kernel width must be an odd bin count >= 1");
    if (!(kernel_var_bins > 0.0))
        throw Error(ErrorKind::config, "kernel variance must be positive");
    auto [lo, hi] = std::pair{*std::min_element(targets.begin(), targets.end()),
                              *std::max_element(targets.begin(), targets.end())};
    if (!(hi > lo))
        throw Error(ErrorKind::degenerate, "constant target vector: histogram not estimable");

    std::vector<double> counts = histogram_counts(targets, lo, hi, k);

    const long long half = static_cast<long long>(kernel_width_bins / 2);
    std::vector<double> kernel(kernel_width_bins);
    for (long long o = -half; o <= half; ++o)
        kernel[static_cast<std::size_t>(o + half)] =
            std::exp(-0.5 * static_cast<double>(o * o) / kernel_var_bins);
    double kernel_sum = 0.0;
    for (double v : kernel) kernel_sum += v;
    for (double& v : kernel) v /= kernel_sum;

    std::vector<double> smoothed(k, 0.0);
    for (long long j = 0; j < static_cast<long long>(k); ++j) {
        if (counts[static_cast<std::size_t>(j)] == 0.0) continue;
        double valid = 0.0;
        for (long long o = -half; o <= half; ++o)
            if (j + o >= 0 && j + o < static_cast<long long>(k))
                valid += kernel[static_cast<std::size_t>(o + half)];
        for (long long o = -half; o <= half; ++o)
            if (j + o >= 0 && j + o < static_cast<long long>(k))
                smoothed[static_cast<std::size_t>(j + o)] +=
                    counts[static_cast<std::size_t>(j)] *
                    kernel[static_cast<std::size_t>(o + half)] / valid;
    }
    return DensityModel::smoothed(lo, hi, std::move(smoothed));
}

inline DensityModel uniform_density(double lo, double hi) {
    return DensityModel::uniform(lo, hi);
}

}  // namespace imbreg
