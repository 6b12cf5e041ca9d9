#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "imbreg/dataset.hpp"

namespace imbreg {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data).subspan(r * cols, cols);
    }
};

// One-hot feature encoding fitted on a training dataset: numeric columns pass
// through, categorical columns expand to one indicator per training category.
// Tokens unseen at fit time encode as all zeros.
class FeatureEncoder {
public:
    FeatureEncoder() = default;

    explicit FeatureEncoder(const Dataset& d) {
        for (std::size_t j = 0; j < d.n_cols(); ++j) {
            Column col;
            col.name = d.column(j).name;
            col.numeric = d.is_numeric(j);
            if (!col.numeric) col.categories = d.column(j).categories;
            columns_.push_back(std::move(col));
        }
        dim_ = 0;
        for (const auto& c : columns_) dim_ += c.numeric ? 1 : c.categories.size();
    }

    std::size_t dim() const { return dim_; }

    Matrix encode(const Dataset& d) const {
        if (d.n_cols() != columns_.size())
            throw Error(ErrorKind::config, "encoder does not match dataset columns");
        Matrix m;
        m.rows = d.n_rows();
        m.cols = dim_;
        m.data.assign(m.rows * m.cols, 0.0);
        for (std::size_t i = 0; i < d.n_rows(); ++i) {
            std::size_t offset = 0;
            for (std::size_t j = 0; j < columns_.size(); ++j) {
                const Column& col = columns_[j];
                if (col.numeric) {
                    m.data[i * dim_ + offset] = d.cell(i, j);
                    offset += 1;
                } else {
                    const std::string& token = d.category_token(j, d.cell(i, j));
                    for (std::size_t c = 0; c < col.categories.size(); ++c)
                        if (col.categories[c] == token) {
                            m.data[i * dim_ + offset + c] = 1.0;
                            break;
                        }
                    offset += col.categories.size();
                }
            }
        }
        return m;
    }

    nlohmann::json to_json() const {
        nlohmann::json cols = nlohmann::json::array();
        for (const auto& c : columns_)
            cols.push_back({{"name", c.name}, {"numeric", c.numeric},
                            {"categories", c.categories}});
        return {{"columns", cols}};
    }

    static FeatureEncoder from_json(const nlohmann::json& j) {
        FeatureEncoder e;
        for (const auto& cj : j.at("columns")) {
            Column c;
            c.name = cj.at("name").get<std::string>();
            c.numeric = cj.at("numeric").get<bool>();
            c.categories = cj.at("categories").get<std::vector<std::string>>();
            e.columns_.push_back(std::move(c));
        }
        e.dim_ = 0;
        for (const auto& c : e.columns_) e.dim_ += c.numeric ? 1 : c.categories.size();
        return e;
    }

private:
    struct Column {
        std::string name;
        bool numeric = true;
        std::vector<std::string> categories;
    };
    std::vector<Column> columns_;
    std::size_t dim_ = 0;
};

}  // namespace imbreg
