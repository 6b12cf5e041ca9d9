#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "imbreg/dataset.hpp"
#include "imbreg/error.hpp"

namespace imbreg {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

// RFC-4180-style record reader: quoted fields, embedded commas/quotes/newlines,
// accepts both LF and CRLF line endings. Returns false at end of input.
inline bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;
    std::string field;
    bool quoted = false;
    while (true) {
        if (quoted) {
            if (c == EOF) throw Error(ErrorKind::io, "unterminated quoted CSV field");
            if (c == '"') {
                int next = in.get();
                if (next == '"') {
                    field.push_back('"');
                } else {
                    quoted = false;
                    c = next;
                    continue;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
        } else {
            if (c == EOF || c == '\n') {
                if (!field.empty() && field.back() == '\r') field.pop_back();
                fields.push_back(field);
                return true;
            }
            if (c == ',') {
                fields.push_back(field);
                field.clear();
            } else if (c == '"' && field.empty()) {
                quoted = true;
            } else {
                field.push_back(static_cast<char>(c));
            }
        }
        c = in.get();
    }
}

inline bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + token.size() && token.size() > 0 && std::isfinite(out);
}

inline std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

}  // namespace detail

inline CsvTable read_csv_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open file: " + path);
    CsvTable table;
    std::vector<std::string> record;
    if (!detail::read_record(in, table.header))
        throw Error(ErrorKind::io, "empty CSV file: " + path);
    while (detail::read_record(in, record)) {
        if (record.size() == 1 && record[0].empty()) continue;  // blank line
        if (record.size() != table.header.size())
            throw Error(ErrorKind::io,
                        "row " + std::to_string(table.rows.size() + 2) + " in " + path +
                            " has " + std::to_string(record.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
        table.rows.push_back(record);
    }
    return table;
}

struct CsvLoadResult {
    Dataset data;
    std::size_t rows_dropped = 0;  // rows removed because of missing cells
};

// Load a CSV file into a Dataset. `target_column` must name a numeric column;
// columns listed in `categorical_columns` are read as category tokens, all
// other columns as decimal numbers. Rows with any empty cell are dropped.
inline CsvLoadResult load_csv(const std::string& path, const std::string& target_column,
                              const std::set<std::string>& categorical_columns = {}) {
    CsvTable table = read_csv_table(path);

    if (categorical_columns.count(target_column))
        throw Error(ErrorKind::config,
                    "target column '" + target_column + "' cannot be categorical");

    std::size_t target_idx = table.header.size();
    for (std::size_t j = 0; j < table.header.size(); ++j)
        if (table.header[j] == target_column) target_idx = j;
    if (target_idx == table.header.size())
        throw Error(ErrorKind::config, "target column '" + target_column + "' not found in " + path);
    for (const auto& name : categorical_columns)
        if (std::find(table.header.begin(), table.header.end(), name) == table.header.end())
            throw Error(ErrorKind::config, "categorical column '" + name + "' not found in " + path);

    std::vector<ColumnMeta> columns;
    std::vector<std::size_t> feature_idx;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j == target_idx) continue;
        ColumnMeta meta;
        meta.name = table.header[j];
        meta.kind = categorical_columns.count(meta.name) ? ColumnKind::categorical
                                                         : ColumnKind::numeric;
        columns.push_back(meta);
        feature_idx.push_back(j);
    }
    if (columns.empty())
        throw Error(ErrorKind::data, "CSV has no feature columns besides the target");

    std::vector<std::map<std::string, std::size_t>> vocab(columns.size());
    std::vector<double> targets, cells;
    std::size_t dropped = 0;

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& record = table.rows[r];
        bool missing = false;
        for (const std::string& f : record)
            if (f.empty()) { missing = true; break; }
        if (missing) { ++dropped; continue; }

        double y;
        if (!detail::parse_double(record[target_idx], y))
            throw Error(ErrorKind::data, "non-numeric target '" + record[target_idx] +
                                             "' at row " + std::to_string(r + 2));
        std::vector<double> row_cells(columns.size());
        for (std::size_t k = 0; k < columns.size(); ++k) {
            const std::string& token = record[feature_idx[k]];
            if (columns[k].kind == ColumnKind::numeric) {
                double v;
                if (!detail::parse_double(token, v))
                    throw Error(ErrorKind::data, "non-numeric value '" + token + "' at row " +
                                                     std::to_string(r + 2) + ", column '" +
                                                     columns[k].name + "'");
                row_cells[k] = v;
            } else {
                auto [it, inserted] = vocab[k].try_emplace(token, columns[k].categories.size());
                if (inserted) columns[k].categories.push_back(token);
                row_cells[k] = static_cast<double>(it->second);
            }
        }
        targets.push_back(y);
        cells.insert(cells.end(), row_cells.begin(), row_cells.end());
    }

    if (targets.empty())
        throw Error(ErrorKind::data, "no usable rows in " + path);

    return CsvLoadResult{
        Dataset(std::move(targets), std::move(cells), std::move(columns), target_column),
        dropped};
}

inline void write_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write file: " + path);
    for (std::size_t j = 0; j < d.n_cols(); ++j)
        out << detail::quote_if_needed(d.column(j).name) << ',';
    out << detail::quote_if_needed(d.target_name()) << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        for (std::size_t j = 0; j < d.n_cols(); ++j) {
            if (d.is_numeric(j)) out << d.cell(i, j);
            else out << detail::quote_if_needed(d.category_token(j, d.cell(i, j)));
            out << ',';
        }
        out << d.target(i) << '\n';
    }
}

}  // namespace imbreg
