#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "evoclust/dataset.hpp"
#include "evoclust/errors.hpp"

namespace evoclust {

struct DataSpec {
    std::string path;
    std::optional<std::string> truth_column;    // header name, or 0-based index
    std::vector<std::string> feature_columns;   // empty = all non-truth columns
    bool standardize = false;
};

namespace detail {

// RFC-4180-style reader: comma separated, double quotes with "" escapes,
// quoted fields may contain commas and newlines, CRLF tolerated.
inline std::vector<std::vector<std::string>> read_csv_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    auto end_field = [&] {
        record.push_back(field);
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(record);
        record.clear();
    };
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_record();
        } else {
            field.push_back(c);
        }
        ++i;
    }
    if (quoted) throw DataError(path + ": unterminated quoted field");
    if (!field.empty() || !record.empty()) end_record();
    if (records.empty()) throw DataError(path + ": empty file");
    return records;
}

inline double parse_number(const std::string& cell, const std::string& path, std::size_t row,
                           const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw DataError(path + ": non-numeric cell '" + cell + "' at row " +
                        std::to_string(row) + ", column '" + column + "'");
    }
    if (!std::isfinite(value)) {
        throw DataError(path + ": non-finite value at row " + std::to_string(row) +
                        ", column '" + column + "'");
    }
    return value;
}

inline int resolve_column(const std::vector<std::string>& header, const std::string& name,
                          const std::string& path) {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return static_cast<int>(c);
    }
    // Fall back to a 0-based numeric index.
    int idx = -1;
    const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
    if (ec == std::errc{} && ptr == name.data() + name.size() && idx >= 0 &&
        idx < static_cast<int>(header.size())) {
        return idx;
    }
    throw DataError(path + ": no column named '" + name + "'");
}

}  // namespace detail

// Standardizes each column to mean 0 and (sample) standard deviation 1.
inline void standardize(Dataset& data) {
    const int n = data.n();
    if (n < 2) throw DataError("standardize: need at least 2 rows");
    for (int c = 0; c < data.dim(); ++c) {
        const double mean = data.points.col(c).mean();
        const double var =
            (data.points.col(c).array() - mean).square().sum() / static_cast<double>(n - 1);
        const double sd = std::sqrt(var);
        if (!(sd > 0.0)) {
            const std::string name = data.feature_names.empty()
                                         ? std::to_string(c)
                                         : data.feature_names[c];
            throw DataError("standardize: column '" + name + "' is constant");
        }
        data.points.col(c) = (data.points.col(c).array() - mean) / sd;
    }
}

inline Dataset load_csv(const DataSpec& spec) {
    const auto records = detail::read_csv_records(spec.path);
    const std::vector<std::string>& header = records[0];
    const std::size_t n_rows = records.size() - 1;
    if (n_rows == 0) throw DataError(spec.path + ": no data rows");

    int truth_col = -1;
    if (spec.truth_column) {
        truth_col = detail::resolve_column(header, *spec.truth_column, spec.path);
    }

    std::vector<int> feature_cols;
    if (spec.feature_columns.empty()) {
        for (int c = 0; c < static_cast<int>(header.size()); ++c) {
            if (c != truth_col) feature_cols.push_back(c);
        }
    } else {
        for (const std::string& name : spec.feature_columns) {
            const int c = detail::resolve_column(header, name, spec.path);
            if (c == truth_col) {
                throw DataError(spec.path + ": column '" + name +
                                "' is both truth and feature");
            }
            feature_cols.push_back(c);
        }
    }
    if (feature_cols.empty()) throw DataError(spec.path + ": no feature columns");

    Dataset data;
    data.points.resize(static_cast<Eigen::Index>(n_rows),
                       static_cast<Eigen::Index>(feature_cols.size()));
    for (int c : feature_cols) data.feature_names.push_back(header[c]);

    for (std::size_t r = 0; r < n_rows; ++r) {
        const std::vector<std::string>& record = records[r + 1];
        if (record.size() != header.size()) {
            throw DataError(spec.path + ": row " + std::to_string(r + 2) + " has " +
                            std::to_string(record.size()) + " fields, header has " +
                            std::to_string(header.size()));
        }
        for (std::size_t fc = 0; fc < feature_cols.size(); ++fc) {
            data.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(fc)) =
                detail::parse_number(record[feature_cols[fc]], spec.path, r + 2,
                                     header[feature_cols[fc]]);
        }
        if (truth_col >= 0) {
            const std::string& value = record[truth_col];
            int code = -1;
            for (std::size_t k = 0; k < data.class_names.size(); ++k) {
                if (data.class_names[k] == value) {
                    code = static_cast<int>(k);
                    break;
                }
            }
            if (code < 0) {
                code = static_cast<int>(data.class_names.size());
                data.class_names.push_back(value);
            }
            data.truth.push_back(code);
        }
    }
    validate(data);
    if (spec.standardize) standardize(data);
    return data;
}

// Writes the dataset back out with shortest round-trip number formatting, so
// save followed by load reproduces the matrix bit for bit.
inline void save_csv(const Dataset& data, const std::string& path,
                     const std::string& truth_header = "class") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);

    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q.push_back(c);
        }
        q += "\"";
        return q;
    };

    if (data.has_truth()) out << quote(truth_header) << ',';
    for (int c = 0; c < data.dim(); ++c) {
        if (c) out << ',';
        out << quote(data.feature_names.empty() ? "x" + std::to_string(c + 1)
                                                : data.feature_names[c]);
    }
    out << '\n';

    char buf[64];
    for (int r = 0; r < data.n(); ++r) {
        if (data.has_truth()) {
            out << quote(data.class_names.empty() ? std::to_string(data.truth[r])
                                                  : data.class_names[data.truth[r]])
                << ',';
        }
        for (int c = 0; c < data.dim(); ++c) {
            if (c) out << ',';
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), data.points(r, c));
            out.write(buf, ptr - buf);
            (void)ec;
        }
        out << '\n';
    }
}

}  // namespace evoclust
