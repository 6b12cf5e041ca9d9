#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "imbreg/error.hpp"
#include "imbreg/util.hpp"

namespace imbreg {

enum class ColumnKind { numeric, categorical };

struct ColumnMeta {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    // Token table for categorical columns; cells store indices into it.
    std::vector<std::string> categories;
};

// One sample outside a Dataset; used when synthesizing rows.
struct Row {
    std::vector<double> cells;
    double target = 0.0;
};

// Immutable tabular dataset: a target vector plus an N x d feature matrix.
// Cells are stored as doubles; categorical cells hold the integer index of
// their token in the column's category table.
class Dataset {
public:
    Dataset(std::vector<double> targets, std::vector<double> cells,
            std::vector<ColumnMeta> columns, std::string target_name = "y")
        : targets_(std::move(targets)),
          cells_(std::move(cells)),
          columns_(std::move(columns)),
          target_name_(std::move(target_name)) {
        validate();
    }

    std::size_t n_rows() const { return targets_.size(); }
    std::size_t n_cols() const { return columns_.size(); }

    double target(std::size_t i) const { return targets_[i]; }
    std::span<const double> targets() const { return targets_; }

    double cell(std::size_t i, std::size_t j) const {
        return cells_[i * n_cols() + j];
    }
    std::span<const double> row_cells(std::size_t i) const {
        return std::span<const double>(cells_).subspan(i * n_cols(), n_cols());
    }
    Row row(std::size_t i) const {
        auto c = row_cells(i);
        return Row{std::vector<double>(c.begin(), c.end()), targets_[i]};
    }

    const ColumnMeta& column(std::size_t j) const { return columns_[j]; }
    const std::vector<ColumnMeta>& columns() const { return columns_; }
    const std::string& target_name() const { return target_name_; }

    bool is_numeric(std::size_t j) const {
        return columns_[j].kind == ColumnKind::numeric;
    }

    const std::string& category_token(std::size_t j, double cell_value) const {
        const auto& cats = columns_[j].categories;
        auto idx = static_cast<std::size_t>(cell_value);
        if (idx >= cats.size())
            throw Error(ErrorKind::data, "category code out of range in column '" +
                                             columns_[j].name + "'");
        return cats[idx];
    }

    std::vector<double> column_values(std::size_t j) const {
        std::vector<double> out(n_rows());
        for (std::size_t i = 0; i < n_rows(); ++i) out[i] = cell(i, j);
        return out;
    }

    // New dataset containing the given rows (in the given order).
    Dataset subset(std::span<const std::size_t> indices) const {
        std::vector<double> t, c;
        t.reserve(indices.size());
        c.reserve(indices.size() * n_cols());
        for (std::size_t i : indices) {
            t.push_back(targets_[i]);
            auto rc = row_cells(i);
            c.insert(c.end(), rc.begin(), rc.end());
        }
        return Dataset(std::move(t), std::move(c), columns_, target_name_);
    }

    // New dataset with extra rows appended after the originals.
    Dataset append(std::span<const Row> rows) const {
        std::vector<double> t = targets_;
        std::vector<double> c = cells_;
        for (const Row& r : rows) {
            if (r.cells.size() != n_cols())
                throw Error(ErrorKind::data, "appended row has wrong width");
            t.push_back(r.target);
            c.insert(c.end(), r.cells.begin(), r.cells.end());
        }
        return Dataset(std::move(t), std::move(c), columns_, target_name_);
    }

private:
    void validate() const {
        const std::size_t n = targets_.size();
        const std::size_t d = columns_.size();
        if (n < 1) throw Error(ErrorKind::data, "dataset needs at least one row");
        if (d < 1) throw Error(ErrorKind::data, "dataset needs at least one feature column");
        if (cells_.size() != n * d)
            throw Error(ErrorKind::data, "feature matrix size does not match rows x columns");
        for (double y : targets_)
            if (!std::isfinite(y)) throw Error(ErrorKind::data, "non-finite target value");
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                double v = cells_[i * d + j];
                if (!std::isfinite(v))
                    throw Error(ErrorKind::data,
                                "non-finite cell in column '" + columns_[j].name + "'");
                if (columns_[j].kind == ColumnKind::categorical) {
                    double rounded = std::nearbyint(v);
                    if (rounded != v || v < 0.0 ||
                        v >= static_cast<double>(columns_[j].categories.size()))
                        throw Error(ErrorKind::data,
                                    "invalid category code in column '" + columns_[j].name + "'");
                }
            }
        }
    }

    std::vector<double> targets_;
    std::vector<double> cells_;  // row-major N x d
    std::vector<ColumnMeta> columns_;
    std::string target_name_;
};

}  // namespace imbreg
