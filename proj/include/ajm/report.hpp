#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ajm/errors.hpp"

namespace ajm {

inline constexpr const char* kVersion = "1.0.0";

/// Shortest fixed-policy text form of a double: 17 significant digits, '.'
/// decimal regardless of locale. 17 digits round-trip IEEE binary64, so equal
/// values always print identically and reports are byte-reproducible.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    for (char& c : s)
        if (c == ',') c = '.';
    return s;
}

/// Accumulates rows of doubles under a fixed header and renders CSV text.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
        if (columns_.empty()) throw ConfigError("CsvWriter: no columns");
    }

    void add_row(const std::vector<double>& values) {
        if (values.size() != columns_.size())
            throw ConfigError("CsvWriter: row width " + std::to_string(values.size()) +
                              " does not match header width " + std::to_string(columns_.size()));
        rows_.push_back(values);
    }

    std::size_t row_count() const { return rows_.size(); }

    std::string str() const {
        std::string out;
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (c) out += ',';
            out += columns_[c];
        }
        out += '\n';
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += format_g17(row[c]);
            }
            out += '\n';
        }
        return out;
    }

    void write_file(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("CsvWriter: cannot open " + path);
        f << str();
        if (!f) throw ConfigError("CsvWriter: write failed for " + path);
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path);
    f << text;
    if (!f) throw ConfigError("write failed for " + path);
}

}  // namespace ajm
