#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "imbreg/dataset.hpp"

namespace imbreg {

// Per-column affine map recorded by minmax_scale so it can be inverted.
struct ScalingRecord {
    struct Entry {
        std::string name;
        double min = 0.0;
        double max = 1.0;
        bool scaled = false;  // false for categorical or constant columns
    };
    std::vector<Entry> features;
    Entry target;

    nlohmann::json to_json() const {
        nlohmann::json j;
        auto entry_json = [](const Entry& e) {
            return nlohmann::json{{"name", e.name}, {"min", e.min}, {"max", e.max},
                                  {"scaled", e.scaled}};
        };
        j["features"] = nlohmann::json::array();
        for (const auto& e : features) j["features"].push_back(entry_json(e));
        j["target"] = entry_json(target);
        return j;
    }

    static ScalingRecord from_json(const nlohmann::json& j) {
        ScalingRecord rec;
        auto parse_entry = [](const nlohmann::json& ej) {
            Entry e;
            e.name = ej.at("name").get<std::string>();
            e.min = ej.at("min").get<double>();
            e.max = ej.at("max").get<double>();
            e.scaled = ej.at("scaled").get<bool>();
            return e;
        };
        for (const auto& ej : j.at("features")) rec.features.push_back(parse_entry(ej));
        rec.target = parse_entry(j.at("target"));
        return rec;
    }
};

struct ScaledDataset {
    Dataset data;
    ScalingRecord record;
};

// Map every numeric feature column and the target affinely onto [0, 1].
// Constant columns are left untouched and flagged in the record; categorical
// columns pass through.
inline ScaledDataset minmax_scale(const Dataset& d) {
    const std::size_t n = d.n_rows(), p = d.n_cols();
    std::vector<double> cells(n * p);
    ScalingRecord rec;
    rec.features.resize(p);

    for (std::size_t j = 0; j < p; ++j) {
        auto& e = rec.features[j];
        e.name = d.column(j).name;
        if (!d.is_numeric(j)) {
            for (std::size_t i = 0; i < n; ++i) cells[i * p + j] = d.cell(i, j);
            continue;
        }
        auto col = d.column_values(j);
        auto [lo, hi] = min_max(col);
        e.min = lo;
        e.max = hi;
        e.scaled = hi > lo;
        for (std::size_t i = 0; i < n; ++i)
            cells[i * p + j] = e.scaled ? (col[i] - lo) / (hi - lo) : col[i];
    }

    auto [tlo, thi] = min_max(d.targets());
    rec.target = {d.target_name(), tlo, thi, thi > tlo};
    std::vector<double> targets(d.targets().begin(), d.targets().end());
    if (rec.target.scaled)
        for (double& y : targets) y = (y - tlo) / (thi - tlo);

    return ScaledDataset{Dataset(std::move(targets), std::move(cells),
                                 d.columns(), d.target_name()),
                         std::move(rec)};
}

// Apply a previously fitted record to another dataset with the same columns.
inline Dataset apply_scaling(const Dataset& d, const ScalingRecord& rec) {
    const std::size_t n = d.n_rows(), p = d.n_cols();
    if (rec.features.size() != p)
        throw Error(ErrorKind::config, "scaling record does not match dataset columns");
    std::vector<double> cells(n * p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto& e = rec.features[j];
        for (std::size_t i = 0; i < n; ++i) {
            double v = d.cell(i, j);
            cells[i * p + j] = e.scaled ? (v - e.min) / (e.max - e.min) : v;
        }
    }
    std::vector<double> targets(d.targets().begin(), d.targets().end());
    if (rec.target.scaled)
        for (double& y : targets)
            y = (y - rec.target.min) / (rec.target.max - rec.target.min);
    return Dataset(std::move(targets), std::move(cells), d.columns(), d.target_name());
}

// Invert minmax scaling, restoring original units.
inline Dataset invert_scaling(const Dataset& d, const ScalingRecord& rec) {
    const std::size_t n = d.n_rows(), p = d.n_cols();
    if (rec.features.size() != p)
        throw Error(ErrorKind::config, "scaling record does not match dataset columns");
    std::vector<double> cells(n * p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto& e = rec.features[j];
        for (std::size_t i = 0; i < n; ++i) {
            double v = d.cell(i, j);
            cells[i * p + j] = e.scaled ? e.min + v * (e.max - e.min) : v;
        }
    }
    std::vector<double> targets(d.targets().begin(), d.targets().end());
    if (rec.target.scaled)
        for (double& y : targets)
            y = rec.target.min + y * (rec.target.max - rec.target.min);
    return Dataset(std::move(targets), std::move(cells), d.columns(), d.target_name());
}

inline double invert_target(double scaled, const ScalingRecord& rec) {
    return rec.target.scaled ? rec.target.min + scaled * (rec.target.max - rec.target.min)
                             : scaled;
}

}  // namespace imbreg
