#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "imbreg/dataset.hpp"

namespace imbreg {

// Heterogeneous euclidean-overlap metric over one dataset's columns: numeric
// columns contribute |a-b|/range, categorical columns 0/1 overlap. Constant
// numeric columns contribute 0. Optionally the target participates as one
// more numeric column (used where neighbor search spans target and features).
class HeomSpace {
public:
    explicit HeomSpace(const Dataset& d, bool include_target = false)
        : data_(&d), include_target_(include_target) {
        ranges_.resize(d.n_cols());
        for (std::size_t j = 0; j < d.n_cols(); ++j) {
            if (!d.is_numeric(j)) { ranges_[j] = 0.0; continue; }
            auto [lo, hi] = min_max_col(d, j);
            ranges_[j] = hi - lo;
        }
        auto [tlo, thi] = min_max(d.targets());
        target_range_ = thi - tlo;
    }

    std::span<const double> ranges() const { return ranges_; }

    double distance(std::size_t i, std::size_t j) const {
        return distance_to_row(data_->row_cells(i), data_->target(i), j);
    }

    double distance_to_row(std::span<const double> cells, double target, std::size_t j) const {
        double ss = 0.0;
        for (std::size_t c = 0; c < ranges_.size(); ++c) {
            double a = cells[c], b = data_->cell(j, c);
            if (data_->is_numeric(c)) {
                if (ranges_[c] > 0.0) {
                    double delta = (a - b) / ranges_[c];
                    ss += delta * delta;
                }
            } else if (a != b) {
                ss += 1.0;
            }
        }
        if (include_target_ && target_range_ > 0.0) {
            double delta = (target - data_->target(j)) / target_range_;
            ss += delta * delta;
        }
        return std::sqrt(ss);
    }

    // Distance between two free-standing rows (synthetic candidates).
    double distance_rows(const Row& a, const Row& b) const {
        double ss = 0.0;
        for (std::size_t c = 0; c < ranges_.size(); ++c) {
            if (data_->is_numeric(c)) {
                if (ranges_[c] > 0.0) {
                    double delta = (a.cells[c] - b.cells[c]) / ranges_[c];
                    ss += delta * delta;
                }
            } else if (a.cells[c] != b.cells[c]) {
                ss += 1.0;
            }
        }
        if (include_target_ && target_range_ > 0.0) {
            double delta = (a.target - b.target) / target_range_;
            ss += delta * delta;
        }
        return std::sqrt(ss);
    }

    // Indices of the k nearest candidates to row `seed`; ties broken by lower
    // row index. The seed itself is skipped if it appears among candidates.
    std::vector<std::size_t> k_nearest(std::size_t seed, std::span<const std::size_t> candidates,
                                       std::size_t k) const {
        std::vector<std::pair<double, std::size_t>> scored;
        scored.reserve(candidates.size());
        for (std::size_t c : candidates) {
            if (c == seed) continue;
            scored.emplace_back(distance(seed, c), c);
        }
        std::sort(scored.begin(), scored.end());
        if (scored.size() > k) scored.resize(k);
        std::vector<std::size_t> out;
        out.reserve(scored.size());
        for (auto& [dist, idx] : scored) out.push_back(idx);
        return out;
    }

private:
    static std::pair<double, double> min_max_col(const Dataset& d, std::size_t j) {
        double lo = d.cell(0, j), hi = lo;
        for (std::size_t i = 1; i < d.n_rows(); ++i) {
            double v = d.cell(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return {lo, hi};
    }

    const Dataset* data_;
    bool include_target_;
    std::vector<double> ranges_;
    double target_range_ = 0.0;
};

// Standalone HEOM between two rows given column kinds and numeric ranges.
inline double heom_distance(std::span<const double> a, std::span<const double> b,
                            std::span<const ColumnKind> kinds, std::span<const double> ranges) {
    double ss = 0.0;
    for (std::size_t c = 0; c < kinds.size(); ++c) {
        if (kinds[c] == ColumnKind::numeric) {
            if (ranges[c] > 0.0) {
                double delta = (a[c] - b[c]) / ranges[c];
                ss += delta * delta;
            }
        } else if (a[c] != b[c]) {
            ss += 1.0;
        }
    }
    return std::sqrt(ss);
}

}  // namespace imbreg
