#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "imbreg/binning.hpp"
#include "imbreg/dataset.hpp"
#include "imbreg/distance.hpp"
#include "imbreg/relevance.hpp"
#include "imbreg/rng.hpp"

namespace imbreg {

enum class MitigationMethod { smoter, smogn, wercs, wsmoter, csmogn, crbsmogn };

inline const char* to_string(MitigationMethod m) {
    switch (m) {
        case MitigationMethod::smoter: return "smoter";
        case MitigationMethod::smogn: return "smogn";
        case MitigationMethod::wercs: return "wercs";
        case MitigationMethod::wsmoter: return "wsmoter";
        case MitigationMethod::csmogn: return "csmogn";
        case MitigationMethod::crbsmogn: return "crbsmogn";
    }
    return "?";
}

inline MitigationMethod mitigation_method_from_string(const std::string& s) {
    if (s == "smoter") return MitigationMethod::smoter;
    if (s == "smogn") return MitigationMethod::smogn;
    if (s == "wercs") return MitigationMethod::wercs;
    if (s == "wsmoter") return MitigationMethod::wsmoter;
    if (s == "csmogn") return MitigationMethod::csmogn;
    if (s == "crbsmogn") return MitigationMethod::crbsmogn;
    throw Error(ErrorKind::config, "unknown mitigation method: " + s);
}

// Resampled dataset plus provenance counts. The size identity
// |data| = |source| + interpolated + noise + replicated - dropped
// holds for every method.
struct ResampleOutcome {
    Dataset data;
    std::size_t n_interpolated = 0;
    std::size_t n_noise = 0;
    std::size_t n_replicated = 0;
    std::size_t n_dropped = 0;
    std::string method_id;
    std::uint64_t seed = 0;
};

namespace detail {

inline void require_scale(const RelevanceVector& rel, RelevanceScale needed,
                          const char* method) {
    if (rel.scale != needed)
        throw Error(ErrorKind::applicability,
                    std::string(method) + " requires " +
                        (needed == RelevanceScale::bounded01 ? "bounded [eps,1]" : "ratio-scale") +
                        " relevance values");
}

inline void require_aligned(const RelevanceVector& rel, const Dataset& d) {
    if (rel.values.size() != d.n_rows())
        throw Error(ErrorKind::config, "relevance vector length does not match dataset rows");
}

// Largest-remainder split of `total` across groups, proportional to sizes.
inline std::vector<std::size_t> proportional_allocation(std::span<const std::size_t> sizes,
                                                        std::size_t total) {
    double sum = 0.0;
    for (auto s : sizes) sum += static_cast<double>(s);
    std::vector<std::size_t> alloc(sizes.size(), 0);
    if (sum == 0.0 || total == 0) return alloc;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        double share = static_cast<double>(total) * static_cast<double>(sizes[i]) / sum;
        alloc[i] = static_cast<std::size_t>(std::floor(share));
        assigned += alloc[i];
        remainders.emplace_back(-(share - std::floor(share)), i);
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::size_t r = 0; assigned < total && r < remainders.size(); ++r, ++assigned)
        ++alloc[remainders[r].second];
    return alloc;
}

inline std::vector<double> per_column_std(const Dataset& d) {
    std::vector<double> stds(d.n_cols() + 1, 0.0);
    for (std::size_t j = 0; j < d.n_cols(); ++j)
        if (d.is_numeric(j)) {
            auto col = d.column_values(j);
            stds[j] = sample_std(col);
        }
    stds[d.n_cols()] = sample_std(d.targets());
    return stds;
}

inline double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace detail

// SMOTE-style interpolation between rows i and j with one explicit draw per
// feature column: numeric columns read it as the interpolation fraction t in
// [0,1), categorical columns pick row i's cell when the draw is < 0.5. The
// synthetic target is the inverse-distance weighted mean of the seed targets.
inline Row interpolate_rows_with(const Dataset& d, const HeomSpace& feature_space,
                                 std::size_t i, std::size_t j,
                                 std::span<const double> draws) {
    const std::size_t p = d.n_cols();
    Row out;
    out.cells.resize(p);
    for (std::size_t c = 0; c < p; ++c) {
        double a = d.cell(i, c), b = d.cell(j, c);
        if (d.is_numeric(c)) {
            out.cells[c] = a + draws[c] * (b - a);
        } else {
            out.cells[c] = draws[c] < 0.5 ? a : b;
        }
    }
    double d1 = feature_space.distance_to_row(out.cells, 0.0, i);
    double d2 = feature_space.distance_to_row(out.cells, 0.0, j);
    out.target = (d1 + d2) > 0.0
                     ? (d1 * d.target(j) + d2 * d.target(i)) / (d1 + d2)
                     : d.target(i);
    return out;
}

inline Row interpolate_rows(const Dataset& d, const HeomSpace& feature_space, std::size_t i,
                            std::size_t j, Rng& rng) {
    std::vector<double> draws(d.n_cols());
    for (double& t : draws) t = uniform01(rng);
    return interpolate_rows_with(d, feature_space, i, j, draws);
}

// Replicate row i with Gaussian noise N(0, delta_n * std(column)) on every
// numeric column, target included. Categorical cells are copied.
inline Row gaussian_noise_row(const Dataset& d, std::span<const double> column_std,
                              std::size_t i, double delta_n, Rng& rng) {
    const std::size_t p = d.n_cols();
    Row out;
    out.cells.resize(p);
    for (std::size_t c = 0; c < p; ++c) {
        double v = d.cell(i, c);
        if (d.is_numeric(c) && delta_n > 0.0 && column_std[c] > 0.0)
            v += normal(rng, 0.0, delta_n * column_std[c]);
        out.cells[c] = v;
    }
    out.target = d.target(i);
    if (delta_n > 0.0 && column_std[p] > 0.0)
        out.target += normal(rng, 0.0, delta_n * column_std[p]);
    return out;
}

// SMOTER: threshold split into minority (rel >= threshold) and majority,
// random under-sampling of the majority and kNN interpolation of the minority
// until both sides hold half of the original sample count. An empty majority
// degenerates to over-sampling only; an empty minority is an error.
inline ResampleOutcome smoter(const Dataset& d, const RelevanceVector& rel,
                              double threshold = 0.8, std::size_t k = 5,
                              std::uint64_t seed = 0) {
    detail::require_scale(rel, RelevanceScale::bounded01, "smoter");
    detail::require_aligned(rel, d);
    if (!(threshold > 0.0 && threshold < 1.0))
        throw Error(ErrorKind::config, "smoter threshold must lie in (0,1)");
    const std::size_t n = d.n_rows();
    Rng rng = make_rng(seed);

    std::vector<std::size_t> minority, majority;
    for (std::size_t i = 0; i < n; ++i)
        (rel.values[i] >= threshold ? minority : majority).push_back(i);
    if (minority.empty())
        throw Error(ErrorKind::degenerate, "smoter: no samples at or above the relevance threshold");

    const std::size_t minority_target = std::max(minority.size(), (n + 1) / 2);
    const std::size_t majority_target = std::min(majority.size(), n - minority_target);

    ResampleOutcome out{d, 0, 0, 0, 0, "smoter", seed};
    std::vector<std::size_t> keep = minority;
    if (majority.size() > majority_target) {
        auto picks = sample_indices_without_replacement(rng, majority.size(), majority_target);
        std::sort(picks.begin(), picks.end());
        for (std::size_t p : picks) keep.push_back(majority[p]);
        out.n_dropped = majority.size() - majority_target;
    } else {
        keep.insert(keep.end(), majority.begin(), majority.end());
    }
    std::sort(keep.begin(), keep.end());

    HeomSpace space(d);
    std::vector<Row> synth;
    const std::size_t n_synth = minority_target - minority.size();
    for (std::size_t s = 0; s < n_synth; ++s) {
        std::size_t seed_row = minority[uniform_index(rng, minority.size())];
        auto nns = space.k_nearest(seed_row, minority, k);
        if (nns.empty()) {
            synth.push_back(d.row(seed_row));  // lone minority sample: replicate
            ++out.n_replicated;
        } else {
            std::size_t neighbor = nns[uniform_index(rng, nns.size())];
            synth.push_back(interpolate_rows(d, space, seed_row, neighbor, rng));
            ++out.n_interpolated;
        }
    }

    out.data = d.subset(keep).append(synth);
    return out;
}

// SMOGN: partitions are maximal runs of target-sorted samples on one side of
// the threshold. Low partitions are randomly under-sampled; high partitions
// are over-sampled, interpolating only when the chosen neighbor is closer
// than half the median distance from the seed to its partition, otherwise
// falling back to Gaussian noise.
inline ResampleOutcome smogn(const Dataset& d, const RelevanceVector& rel,
                             double threshold = 0.8, std::size_t k = 5, double delta_n = 0.01,
                             std::uint64_t seed = 0, bool with_undersampling = true) {
    detail::require_scale(rel, RelevanceScale::bounded01, "smogn");
    detail::require_aligned(rel, d);
    const std::size_t n = d.n_rows();
    Rng rng = make_rng(seed);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d.target(a) < d.target(b); });

    struct Partition {
        std::vector<std::size_t> rows;
        bool high = false;
    };
    std::vector<Partition> parts;
    for (std::size_t idx : order) {
        bool high = rel.values[idx] >= threshold;
        if (parts.empty() || parts.back().high != high) parts.push_back({{}, high});
        parts.back().rows.push_back(idx);
    }

    std::size_t n_min = 0, n_maj = 0;
    for (const auto& p : parts) (p.high ? n_min : n_maj) += p.rows.size();
    if (n_min == 0)
        throw Error(ErrorKind::degenerate, "smogn: no samples at or above the relevance threshold");

    const std::size_t minority_target = std::max(n_min, (n + 1) / 2);
    const std::size_t majority_target =
        with_undersampling ? std::min(n_maj, n - minority_target) : n_maj;

    std::vector<std::size_t> high_sizes, low_sizes;
    std::vector<std::size_t> high_ids, low_ids;
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
        if (parts[pi].high) { high_sizes.push_back(parts[pi].rows.size()); high_ids.push_back(pi); }
        else { low_sizes.push_back(parts[pi].rows.size()); low_ids.push_back(pi); }
    }
    auto synth_alloc = detail::proportional_allocation(high_sizes, minority_target - n_min);
    auto drop_alloc = detail::proportional_allocation(low_sizes, n_maj - majority_target);
    // A partition cannot lose more rows than it has.
    for (std::size_t g = 0; g < drop_alloc.size(); ++g)
        drop_alloc[g] = std::min(drop_alloc[g], low_sizes[g]);

    ResampleOutcome out{d, 0, 0, 0, 0, "smogn", seed};
    HeomSpace space(d);
    auto stds = detail::per_column_std(d);

    std::vector<bool> dropped(n, false);
    for (std::size_t g = 0; g < low_ids.size(); ++g) {
        const auto& rows = parts[low_ids[g]].rows;
        auto picks = sample_indices_without_replacement(rng, rows.size(), drop_alloc[g]);
        for (std::size_t p : picks) dropped[rows[p]] = true;
        out.n_dropped += picks.size();
    }

    std::vector<Row> synth;
    for (std::size_t g = 0; g < high_ids.size(); ++g) {
        const auto& rows = parts[high_ids[g]].rows;
        for (std::size_t s = 0; s < synth_alloc[g]; ++s) {
            std::size_t seed_row = rows[uniform_index(rng, rows.size())];
            if (rows.size() == 1) {
                synth.push_back(gaussian_noise_row(d, stds, seed_row, delta_n, rng));
                ++out.n_noise;
                continue;
            }
            std::vector<double> dists;
            dists.reserve(rows.size() - 1);
            for (std::size_t r : rows)
                if (r != seed_row) dists.push_back(space.distance(seed_row, r));
            double half_median = 0.5 * detail::median_of(dists);
            auto nns = space.k_nearest(seed_row, rows, k);
            std::size_t neighbor = nns[uniform_index(rng, nns.size())];
            if (space.distance(seed_row, neighbor) < half_median) {
                synth.push_back(interpolate_rows(d, space, seed_row, neighbor, rng));
                ++out.n_interpolated;
            } else {
                synth.push_back(gaussian_noise_row(d, stds, seed_row, delta_n, rng));
                ++out.n_noise;
            }
        }
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (!dropped[i]) keep.push_back(i);
    out.data = d.subset(keep).append(synth);
    return out;
}

// WERCS: replication of rows drawn with probability proportional to their
// relevance and dropping of rows drawn proportional to (1 - relevance). No
// synthetic values are created.
inline ResampleOutcome wercs(const Dataset& d, const RelevanceVector& rel,
                             double over_rate = 0.5, double under_rate = 0.5,
                             std::uint64_t seed = 0) {
    detail::require_scale(rel, RelevanceScale::bounded01, "wercs");
    detail::require_aligned(rel, d);
    if (over_rate < 0.0 || under_rate < 0.0)
        throw Error(ErrorKind::config, "wercs rates must be >= 0");
    if (under_rate >= 1.0)
        throw Error(ErrorKind::config, "wercs under-sampling rate must be < 1");
    const std::size_t n = d.n_rows();
    Rng rng = make_rng(seed);

    const auto n_over = static_cast<std::size_t>(std::ceil(over_rate * static_cast<double>(n)));
    const auto n_under = static_cast<std::size_t>(std::ceil(under_rate * static_cast<double>(n)));

    ResampleOutcome out{d, 0, 0, 0, 0, "wercs", seed};

    std::vector<Row> replicas;
    if (n_over > 0) {
        std::span<const double> weights(rel.values);
        for (std::size_t s = 0; s < n_over; ++s)
            replicas.push_back(d.row(weighted_index(rng, weights)));
        out.n_replicated = replicas.size();
    }

    std::vector<bool> removed(n, false);
    if (n_under > 0) {
        std::vector<double> weights(n);
        for (std::size_t i = 0; i < n; ++i) weights[i] = std::max(1.0 - rel.values[i], 0.0);
        auto drops = weighted_sample_without_replacement(rng, weights, n_under);
        for (std::size_t i : drops) removed[i] = true;
        out.n_dropped = drops.size();
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) keep.push_back(i);
    out.data = d.subset(keep).append(replicas);
    return out;
}

// WSMOTER: pure over-sampling to `oversampling_ratio` times the original
// size. Seeds are drawn proportional to their (ratio-scale) relevance; the
// interpolation partner is picked uniformly among the k nearest neighbors (in
// combined target and feature domain) of the K = 10k samples whose targets
// are closest to the seed.
inline ResampleOutcome wsmoter(const Dataset& d, const RelevanceVector& rel, std::size_t k = 10,
                               double oversampling_ratio = 3.0, std::uint64_t seed = 0) {
    detail::require_scale(rel, RelevanceScale::ratio, "wsmoter");
    detail::require_aligned(rel, d);
    if (!(oversampling_ratio >= 1.0))
        throw Error(ErrorKind::config, "wsmoter over-sampling ratio must be >= 1");
    if (k < 1) throw Error(ErrorKind::config, "wsmoter needs k >= 1");
    const std::size_t n = d.n_rows();
    Rng rng = make_rng(seed);

    const auto n_synth = static_cast<std::size_t>(
        std::llround((oversampling_ratio - 1.0) * static_cast<double>(n)));
    ResampleOutcome out{d, 0, 0, 0, 0, "wsmoter", seed};
    if (n_synth == 0) return out;

    std::size_t big_k = 10 * k;
    if (big_k > n - 1) big_k = n - 1;

    HeomSpace feature_space(d);
    HeomSpace combined_space(d, /*include_target=*/true);
    std::span<const double> weights(rel.values);

    std::vector<Row> synth;
    synth.reserve(n_synth);
    std::vector<std::pair<double, std::size_t>> by_target(n);
    for (std::size_t s = 0; s < n_synth; ++s) {
        std::size_t seed_row = weighted_index(rng, weights);
        for (std::size_t i = 0; i < n; ++i)
            by_target[i] = {std::abs(d.target(i) - d.target(seed_row)), i};
        std::nth_element(by_target.begin(), by_target.begin() + static_cast<long>(big_k),
                         by_target.end());
        std::vector<std::size_t> candidates;
        candidates.reserve(big_k + 1);
        for (std::size_t i = 0; i <= big_k && i < n; ++i) candidates.push_back(by_target[i].second);
        auto nns = combined_space.k_nearest(seed_row, candidates, k);
        if (nns.empty()) {
            synth.push_back(d.row(seed_row));
            ++out.n_replicated;
            continue;
        }
        std::size_t neighbor = nns[uniform_index(rng, nns.size())];
        synth.push_back(interpolate_rows(d, feature_space, seed_row, neighbor, rng));
        ++out.n_interpolated;
    }
    out.data = d.append(synth);
    return out;
}

// cSMOGN: threshold-free over-sampler. Seeds are accepted when their squared
// relevance beats a uniform draw; the interpolation partner comes from the
// binned similarity neighborhood, with Gaussian noise when it is empty.
inline ResampleOutcome csmogn(const Dataset& d, const RelevanceVector& rel,
                              std::size_t n_bins = 10, std::int64_t delta_b = 1,
                              std::size_t n_sample = 0, double delta_n = 0.01, std::size_t k = 5,
                              std::uint64_t seed = 0) {
    detail::require_scale(rel, RelevanceScale::bounded01, "csmogn");
    detail::require_aligned(rel, d);
    const std::size_t n = d.n_rows();
    if (n_sample == 0)
        n_sample = static_cast<std::size_t>(std::ceil(0.5 * static_cast<double>(n)));
    Rng rng = make_rng(seed);

    ResampleOutcome out{d, 0, 0, 0, 0, "csmogn", seed};
    BinnedDataset binned = discretize_dataset(d, n_bins);
    HeomSpace space(d);
    auto stds = detail::per_column_std(d);

    std::vector<Row> synth;
    synth.reserve(n_sample);
    const std::size_t attempt_cap = 1000 * n_sample;
    std::size_t attempts = 0;
    while (synth.size() < n_sample) {
        if (++attempts > attempt_cap)
            throw Error(ErrorKind::progress,
                        "csmogn: acceptance probability too low; no progress after " +
                            std::to_string(attempt_cap) + " draws");
        std::size_t seed_row = uniform_index(rng, n);
        double w = rel.values[seed_row];
        if (!(w * w > uniform01(rng))) continue;
        auto sims = similar_samples(d, binned, seed_row, delta_b);
        if (sims.empty()) {
            synth.push_back(gaussian_noise_row(d, stds, seed_row, delta_n, rng));
            ++out.n_noise;
        } else {
            auto nns = space.k_nearest(seed_row, sims, k);
            std::size_t neighbor = nns[uniform_index(rng, nns.size())];
            synth.push_back(interpolate_rows(d, space, seed_row, neighbor, rng));
            ++out.n_interpolated;
        }
    }
    out.data = d.append(synth);
    return out;
}

// Per-sample over-sampling budget for crbSMOGN: ceil(w)-1 with probability
// frac(w), floor(w)-1 otherwise. Nonpositive budgets mean no over-sampling.
inline std::int64_t crb_budget(double w, Rng& rng) {
    double frac = w - std::floor(w);
    auto r = frac > uniform01(rng) ? static_cast<std::int64_t>(std::ceil(w)) - 1
                                   : static_cast<std::int64_t>(std::floor(w)) - 1;
    return r;
}

// crbSMOGN: derives each sample's over-sampling budget from ratio-scale
// relevance (no user-defined sample count). Budgeted rows are interpolated
// with their nearest binned-similar neighbors; the remainder is covered by
// Gaussian-noise replication.
inline ResampleOutcome crbsmogn(const Dataset& d, const RelevanceVector& rel,
                                std::size_t n_bins = 10, std::int64_t delta_b = 1,
                                double delta_n = 0.01, std::uint64_t seed = 0) {
    detail::require_scale(rel, RelevanceScale::ratio, "crbsmogn");
    detail::require_aligned(rel, d);
    const std::size_t n = d.n_rows();
    Rng rng = make_rng(seed);

    ResampleOutcome out{d, 0, 0, 0, 0, "crbsmogn", seed};
    BinnedDataset binned = discretize_dataset(d, n_bins);
    HeomSpace space(d);
    auto stds = detail::per_column_std(d);

    std::vector<Row> synth;
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t r = crb_budget(rel.values[i], rng);
        if (r <= 0) continue;
        auto sims = similar_samples(d, binned, i, delta_b);
        std::vector<std::size_t> partners;
        std::size_t n_gauss = 0;
        if (sims.size() >= static_cast<std::size_t>(r)) {
            partners = space.k_nearest(i, sims, static_cast<std::size_t>(r));
        } else {
            partners = sims;  // subset already similar; kNN step skipped
            n_gauss = static_cast<std::size_t>(r) - sims.size();
        }
        for (std::size_t p : partners) {
            synth.push_back(interpolate_rows(d, space, i, p, rng));
            ++out.n_interpolated;
        }
        for (std::size_t g = 0; g < n_gauss; ++g) {
            synth.push_back(gaussian_noise_row(d, stds, i, delta_n, rng));
            ++out.n_noise;
        }
    }
    out.data = d.append(synth);
    return out;
}

// Relevance-guided random under-sampling, composed after an over-sampler to
// produce "with under-sampling" variants. Rows are dropped with probability
// proportional to max(0, 1 - min(w, 1)); rows at or above nominal relevance
// are never dropped.
inline ResampleOutcome undersample_ratio(const Dataset& d, const RelevanceVector& rel,
                                         double rate = 0.5, std::uint64_t seed = 0) {
    detail::require_aligned(rel, d);
    if (rate < 0.0 || rate >= 1.0)
        throw Error(ErrorKind::config, "under-sampling rate must lie in [0,1)");
    const std::size_t n = d.n_rows();
    Rng rng = make_rng(seed);

    ResampleOutcome out{d, 0, 0, 0, 0, "undersample", seed};
    const auto n_drop = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(n)));
    if (n_drop == 0) return out;

    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i)
        weights[i] = std::max(0.0, 1.0 - std::min(rel.values[i], 1.0));
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) return out;  // nothing droppable

    auto drops = weighted_sample_without_replacement(rng, weights, n_drop);
    std::vector<bool> removed(n, false);
    for (std::size_t i : drops) removed[i] = true;
    out.n_dropped = drops.size();

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) keep.push_back(i);
    out.data = d.subset(keep);
    return out;
}

}  // namespace imbreg
