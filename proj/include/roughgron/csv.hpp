#pragma once

// Flat CSV persistence for paths, rough paths and result tables. Numbers are
// written with 17 significant digits so that every double round-trips.

#include "roughgron/errors.hpp"
#include "roughgron/rough_core.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace roughgron::csv {

inline std::string format_number(double v) {
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

inline void write_row(std::ostream& os, std::span<const double> row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (k > 0) {
            os << ',';
        }
        os << format_number(row[k]);
    }
    os << '\n';
}

inline void write_header(std::ostream& os, const std::vector<std::string>& names) {
    for (std::size_t k = 0; k < names.size(); ++k) {
        os << (k > 0 ? "," : "") << names[k];
    }
    os << '\n';
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
            field.remove_prefix(1);
        }
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
            field.remove_suffix(1);
        }
        out.emplace_back(field);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

inline double parse_number(const std::string& field) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw ParameterError("malformed number in CSV: '" + field + "'");
    }
    return v;
}

/// One header line, then rows of numbers with as many fields as the header.
inline Table read_table(std::istream& is) {
    Table table;
    std::string line;
    if (!std::getline(is, line)) {
        throw ParameterError("CSV input is empty");
    }
    table.header = split(line);
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != table.header.size()) {
            throw ParameterError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                                 std::to_string(table.header.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            row.push_back(parse_number(f));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

/// Rows `t,x_1..x_d`.
inline void write_path(std::ostream& os, const SampledPath& path) {
    std::vector<std::string> names{"t"};
    for (std::size_t c = 0; c < path.dim(); ++c) {
        names.push_back("x_" + std::to_string(c + 1));
    }
    write_header(os, names);
    std::vector<double> row(path.dim() + 1);
    for (std::size_t k = 0; k < path.size(); ++k) {
        row[0] = path.times()[k];
        for (std::size_t c = 0; c < path.dim(); ++c) {
            row[c + 1] = path(k, c);
        }
        write_row(os, row);
    }
}

inline SampledPath read_path(std::istream& is) {
    const Table table = read_table(is);
    if (table.header.size() < 2) {
        throw ParameterError("path CSV needs a time column and at least one value column");
    }
    const std::size_t d = table.header.size() - 1;
    std::vector<double> times;
    std::vector<double> values;
    for (const auto& row : table.rows) {
        times.push_back(row[0]);
        values.insert(values.end(), row.begin() + 1, row.end());
    }
    return SampledPath(std::move(times), std::move(values), d);
}

/// Rows `s,t,X1_1..X1_d,X2_11..X2_dd` (level 2 row-major). By default only
/// consecutive grid pairs are written; they determine the rough path
/// through Chen's relation. `all_pairs` writes every s < t.
inline void write_rough_path(std::ostream& os, const RoughPath& rp, bool all_pairs = false) {
    const std::size_t d = rp.dim();
    std::vector<std::string> names{"s", "t"};
    for (std::size_t c = 0; c < d; ++c) {
        names.push_back("X1_" + std::to_string(c + 1));
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            names.push_back("X2_" + std::to_string(a + 1) + std::to_string(b + 1));
        }
    }
    write_header(os, names);
    std::vector<double> row(2 + d + d * d);
    auto emit = [&](std::size_t i, std::size_t j) {
        row[0] = rp.times()[i];
        row[1] = rp.times()[j];
        for (std::size_t c = 0; c < d; ++c) {
            row[2 + c] = rp.level1(i, j, c);
        }
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                row[2 + d + a * d + b] = rp.level2(i, j, a, b);
            }
        }
        write_row(os, row);
    };
    for (std::size_t i = 0; i + 1 < rp.size(); ++i) {
        if (all_pairs) {
            for (std::size_t j = i + 1; j < rp.size(); ++j) {
                emit(i, j);
            }
        } else {
            emit(i, i + 1);
        }
    }
}

/// Reads either layout written by write_rough_path; the grid is the set of
/// times that appear, and the consecutive-pair rows must all be present.
inline RoughPath read_rough_path(std::istream& is, double p) {
    const Table table = read_table(is);
    const std::size_t cols = table.header.size();
    std::size_t d = 0;
    while (2 + d + d * d < cols) {
        ++d;
    }
    if (d == 0 || 2 + d + d * d != cols) {
        throw ParameterError("rough path CSV column count does not match any dimension");
    }
    std::map<double, std::size_t> time_set;
    for (const auto& row : table.rows) {
        time_set.emplace(row[0], 0);
        time_set.emplace(row[1], 0);
    }
    std::vector<double> times;
    for (auto& [t, idx] : time_set) {
        idx = times.size();
        times.push_back(t);
    }
    if (times.size() < 2) {
        throw ParameterError("rough path CSV needs at least one increment row");
    }
    const std::size_t n = times.size();
    std::vector<double> steps1((n - 1) * d);
    std::vector<double> steps2((n - 1) * d * d);
    std::vector<bool> seen(n - 1, false);
    for (const auto& row : table.rows) {
        const std::size_t i = time_set.at(row[0]);
        const std::size_t j = time_set.at(row[1]);
        if (j != i + 1) {
            continue;
        }
        seen[i] = true;
        std::copy(row.begin() + 2, row.begin() + 2 + static_cast<std::ptrdiff_t>(d), steps1.begin() + static_cast<std::ptrdiff_t>(i * d));
        std::copy(row.begin() + 2 + static_cast<std::ptrdiff_t>(d), row.end(), steps2.begin() + static_cast<std::ptrdiff_t>(i * d * d));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!seen[i]) {
            throw ParameterError("rough path CSV is missing the increment starting at t=" + format_number(times[i]));
        }
    }
    return RoughPath::from_increments(std::move(times), d, p, steps1, steps2);
}

} // namespace roughgron::csv
