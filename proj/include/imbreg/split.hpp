#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "imbreg/dataset.hpp"
#include "imbreg/density.hpp"
#include "imbreg/metrics.hpp"
#include "imbreg/rng.hpp"

namespace imbreg {

struct SplitPair {
    Dataset train;
    Dataset test;
    double train_fraction = 0.7;
    double dissimilarity = 1.0;  // mIR of test targets against the train-target KDE
    std::uint64_t seed = 0;
};

// Draw `candidates` random train/test splits and keep the one whose subsets
// have the most similar target distributions: the dissimilarity score is the
// mIR of the test targets evaluated against a KDE of the train targets.
// Candidate c uses the stream (seed, c), so the choice is reproducible.
inline SplitPair select_split(const Dataset& d, double train_fraction = 0.7,
                              std::size_t candidates = 100, std::uint64_t seed = 0,
                              std::vector<double>* candidate_scores = nullptr) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorKind::config, "train fraction must lie in (0,1)");
    if (candidates < 1) throw Error(ErrorKind::config, "need at least 1 candidate split");
    const std::size_t n = d.n_rows();
    if (n < 10)
        throw Error(ErrorKind::data, "too few samples to populate both subsets (need >= 10)");

    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (n_train < 1) n_train = 1;
    if (n_train > n - 1) n_train = n - 1;

    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;

    double best_score = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_order;
    if (candidate_scores) candidate_scores->clear();

    for (std::size_t c = 0; c < candidates; ++c) {
        Rng rng = make_rng(seed, c);
        shuffle_in_place(rng, indices);
        std::span<const std::size_t> train_idx(indices.data(), n_train);
        std::span<const std::size_t> test_idx(indices.data() + n_train, n - n_train);

        double score;
        try {
            std::vector<double> train_targets, test_targets;
            train_targets.reserve(n_train);
            test_targets.reserve(n - n_train);
            for (std::size_t i : train_idx) train_targets.push_back(d.target(i));
            for (std::size_t i : test_idx) test_targets.push_back(d.target(i));
            score = compute_mir(test_targets, fit_kde(train_targets));
        } catch (const Error&) {
            score = std::numeric_limits<double>::infinity();  // degenerate candidate
        }
        if (candidate_scores) candidate_scores->push_back(score);
        if (score < best_score) {
            best_score = score;
            best_order = indices;
        }
    }
    if (!std::isfinite(best_score))
        throw Error(ErrorKind::degenerate, "no candidate split produced estimable densities");

    std::vector<std::size_t> train_rows(best_order.begin(),
                                        best_order.begin() + static_cast<long>(n_train));
    std::vector<std::size_t> test_rows(best_order.begin() + static_cast<long>(n_train),
                                       best_order.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return SplitPair{d.subset(train_rows), d.subset(test_rows), train_fraction, best_score, seed};
}

}  // namespace imbreg
