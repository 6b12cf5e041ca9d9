#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "imbreg/dataset.hpp"

namespace imbreg {

// Equal-width discretization of every numeric column, target included as the
// last column. Categorical cells keep their category code. Used to restrict
// neighbor searches to samples that are similar in target and feature domain.
struct BinnedDataset {
    std::size_t n_bins = 10;
    std::size_t n_cols = 0;           // feature columns + 1 (target)
    std::vector<std::int64_t> bins;   // row-major N x n_cols

    std::int64_t at(std::size_t row, std::size_t col) const {
        return bins[row * n_cols + col];
    }
};

inline BinnedDataset discretize_dataset(const Dataset& d, std::size_t n_bins = 10) {
    if (n_bins < 1) throw Error(ErrorKind::config, "n_bins must be >= 1");
    const std::size_t n = d.n_rows(), p = d.n_cols();
    BinnedDataset out;
    out.n_bins = n_bins;
    out.n_cols = p + 1;
    out.bins.resize(n * out.n_cols);

    auto bin_value = [n_bins](double v, double lo, double hi) -> std::int64_t {
        if (!(hi > lo)) return 0;  // constant column
        auto b = static_cast<std::int64_t>(
            std::floor((v - lo) / (hi - lo) * static_cast<double>(n_bins)));
        if (b < 0) b = 0;
        if (b >= static_cast<std::int64_t>(n_bins)) b = static_cast<std::int64_t>(n_bins) - 1;
        return b;
    };

    for (std::size_t j = 0; j < p; ++j) {
        if (d.is_numeric(j)) {
            auto col = d.column_values(j);
            auto [lo, hi] = min_max(col);
            for (std::size_t i = 0; i < n; ++i)
                out.bins[i * out.n_cols + j] = bin_value(col[i], lo, hi);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                out.bins[i * out.n_cols + j] = static_cast<std::int64_t>(d.cell(i, j));
        }
    }
    auto [tlo, thi] = min_max(d.targets());
    for (std::size_t i = 0; i < n; ++i)
        out.bins[i * out.n_cols + p] = bin_value(d.target(i), tlo, thi);
    return out;
}

// Rows (excluding the seed) whose numeric bins all lie within +-delta_b of the
// seed's bins and whose categorical cells equal the seed's. An empty result is
// a valid outcome.
inline std::vector<std::size_t> similar_samples(const Dataset& d, const BinnedDataset& binned,
                                                std::size_t seed_row, std::int64_t delta_b) {
    const std::size_t n = d.n_rows(), p = d.n_cols();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == seed_row) continue;
        bool ok = true;
        for (std::size_t j = 0; j < p + 1 && ok; ++j) {
            std::int64_t a = binned.at(i, j), s = binned.at(seed_row, j);
            if (j < p && !d.is_numeric(j)) {
                ok = a == s;
            } else {
                ok = a >= s - delta_b && a <= s + delta_b;
            }
        }
        if (ok) out.push_back(i);
    }
    return out;
}

}  // namespace imbreg
