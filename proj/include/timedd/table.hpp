#pragma once

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace timedd {

/// Empty cell, number or text.
using Cell = std::variant<std::monostate, double, std::string>;

/// Column-named table plus a JSON metadata object describing how it was made.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t column(const std::string& name) const {
        for (std::size_t j = 0; j < columns.size(); ++j)
            if (columns[j] == name) return j;
        return columns.size();
    }
};

/// %.17g; non-finite values spelled nan / inf / -inf.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// RFC 4180 quoting: fields containing comma, quote, CR or LF are wrapped in quotes.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// CSV with CRLF line ends. With `inline_meta` the first line is '#' followed by the metadata JSON.
inline void write_csv(std::ostream& os, const Table& t, bool inline_meta) {
    if (inline_meta) os << "# " << t.meta.dump() << "\r\n";
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << csv_field(t.columns[j]);
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << ',';
            if (const auto* d = std::get_if<double>(&row[j])) os << format_number(*d);
            else if (const auto* s = std::get_if<std::string>(&row[j])) os << csv_field(*s);
        }
        os << "\r\n";
    }
}

/// JSON array of row objects; empty cells and non-finite numbers become null.
inline void write_json(std::ostream& os, const Table& t) {
    os << "[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << (r ? ",\n " : "\n ") << "{";
        const auto& row = t.rows[r];
        for (std::size_t j = 0; j < row.size(); ++j) {
            os << (j ? ", " : "") << nlohmann::json(t.columns[j]).dump() << ": ";
            if (const auto* d = std::get_if<double>(&row[j]))
                os << (std::isfinite(*d) ? format_number(*d) : "null");
            else if (const auto* s = std::get_if<std::string>(&row[j]))
                os << nlohmann::json(*s).dump();
            else
                os << "null";
        }
        os << "}";
    }
    os << (t.rows.empty() ? "]\n" : "\n]\n");
}

}  // namespace timedd
