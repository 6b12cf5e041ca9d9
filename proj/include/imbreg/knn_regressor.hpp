#pragma once

#include <algorithm>
#include <vector>

#include "imbreg/dataset.hpp"
#include "imbreg/distance.hpp"

namespace imbreg {

// Mean target of the k HEOM-nearest training rows for each query row; ties
// broken toward the lower training-row index.
inline std::vector<double> knn_regress(const Dataset& train, const Dataset& queries,
                                       std::size_t k) {
    if (k < 1) throw Error(ErrorKind::config, "knn needs k >= 1");
    if (k > train.n_rows()) k = train.n_rows();
    HeomSpace space(train);
    std::vector<double> out(queries.n_rows());
    std::vector<std::pair<double, std::size_t>> scored(train.n_rows());
    for (std::size_t q = 0; q < queries.n_rows(); ++q) {
        for (std::size_t i = 0; i < train.n_rows(); ++i)
            scored[i] = {space.distance_to_row(queries.row_cells(q), 0.0, i), i};
        std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k), scored.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += train.target(scored[i].second);
        out[q] = sum / static_cast<double>(k);
    }
    return out;
}

}  // namespace imbreg
