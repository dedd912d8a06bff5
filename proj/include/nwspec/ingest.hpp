#pragma once

// Loading, transforming and standardizing a univariate series.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nwspec/error.hpp"
#include "nwspec/format.hpp"

namespace nwspec {

/// Ordered real observations with optional per-observation period labels.
struct TimeSeries {
    std::string name;
    std::vector<double> values;
    std::vector<std::string> periods;  // empty or one label per value

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

enum class TransformKind { none, diff, logdiff };

struct TransformSpec {
    TransformKind kind = TransformKind::none;
    double scale = 1.0;

    /// Default scale is 100 for logdiff (percent growth) and 1 otherwise.
    static TransformSpec make(TransformKind kind, std::optional<double> scale = std::nullopt) {
        TransformSpec spec{kind, scale.value_or(kind == TransformKind::logdiff ? 100.0 : 1.0)};
        if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
            throw ConfigError("transform scale must be a positive finite number");
        }
        return spec;
    }
};

inline std::string_view to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::none: return "none";
        case TransformKind::diff: return "diff";
        case TransformKind::logdiff: return "logdiff";
    }
    return "none";
}

inline TransformKind parse_transform_kind(std::string_view text) {
    if (text == "none") return TransformKind::none;
    if (text == "diff") return TransformKind::diff;
    if (text == "logdiff") return TransformKind::logdiff;
    throw ConfigError("unknown transform '" + std::string(text) + "' (expected none, diff or logdiff)");
}

/// Series with sample mean 0 and divisor-N variance 1, so that sum(x^2) = N.
struct StandardizedSeries {
    std::vector<double> values;
    double source_mean = 0.0;
    double source_std = 1.0;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Descriptive statistics of a growth series. `acc` is the mean first
/// difference (growth acceleration); `std` uses the N-1 divisor.
struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;
    double acc = 0.0;
};

struct CsvOptions {
    char delimiter = ',';
    bool header = true;
    /// Column holding period labels, if any.
    std::optional<std::variant<std::string, std::size_t>> period_column;
};

/// Column selector: header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

namespace detail {

// Reads one RFC-4180 record. Quoted fields may contain delimiters, doubled
// quotes and line breaks. Returns false at end of input.
inline bool read_csv_record(std::istream& in, char delim, std::vector<std::string>& fields,
                            std::size_t& line) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c = 0;
    ++line;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (any) fields.push_back(std::move(field));
    return any;
}

inline bool blank_record(const std::vector<std::string>& fields) {
    return fields.size() == 1 && trim(fields.front()).empty();
}

inline std::size_t resolve_column(const std::variant<std::string, std::size_t>& ref,
                                  const std::vector<std::string>& header) {
    if (const auto* index = std::get_if<std::size_t>(&ref)) return *index;
    const auto& name = std::get<std::string>(ref);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return i;
    }
    throw ConfigError("column '" + name + "' not found in CSV header");
}

inline std::string column_label(const std::variant<std::string, std::size_t>& ref) {
    if (const auto* index = std::get_if<std::size_t>(&ref)) return "#" + std::to_string(*index);
    return std::get<std::string>(ref);
}

}  // namespace detail

/// Reads one numeric column from delimited text, in file order.
inline TimeSeries load_series(std::istream& in, const ColumnRef& column, const CsvOptions& options = {}) {
    std::vector<std::string> fields;
    std::vector<std::string> header;
    std::size_t line = 0;

    if (options.header) {
        while (detail::read_csv_record(in, options.delimiter, header, line) && detail::blank_record(header)) {
        }
        if (header.empty()) throw TooShortError("CSV input is empty");
    } else if (std::holds_alternative<std::string>(column)) {
        throw ConfigError("column names require a header row; use a column index");
    }

    const std::size_t col = detail::resolve_column(column, header);
    if (options.header && col >= header.size()) {
        throw ConfigError("column index " + std::to_string(col) + " out of range (header has " +
                          std::to_string(header.size()) + " columns)");
    }
    std::optional<std::size_t> period_col;
    if (options.period_column) period_col = detail::resolve_column(*options.period_column, header);

    TimeSeries series;
    series.name = options.header ? std::string(trim(header[col])) : detail::column_label(column);
    const std::string label = options.header ? series.name : detail::column_label(column);

    while (detail::read_csv_record(in, options.delimiter, fields, line)) {
        if (detail::blank_record(fields)) continue;
        if (col >= fields.size()) {
            throw ParseError("line " + std::to_string(line) + ": missing value in column '" + label + "'",
                             line, label);
        }
        const auto value = parse_double(fields[col]);
        if (!value) {
            throw ParseError("line " + std::to_string(line) + ", column '" + label + "': cannot parse '" +
                                 std::string(trim(fields[col])) + "' as a finite number",
                             line, label);
        }
        series.values.push_back(*value);
        if (period_col) {
            series.periods.emplace_back(*period_col < fields.size() ? trim(fields[*period_col]) : "");
        }
    }
    if (series.size() < 2) {
        throw TooShortError("series '" + series.name + "' has " + std::to_string(series.size()) +
                            " observations; at least 2 are required");
    }
    return series;
}

inline TimeSeries load_series(const std::filesystem::path& path, const ColumnRef& column,
                              const CsvOptions& options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file '" + path.string() + "'");
    return load_series(in, column, options);
}

/// Writes `t,<name>` CSV that `load_series` reads back exactly.
inline void write_series_csv(std::ostream& out, const TimeSeries& series) {
    out << "t," << (series.name.empty() ? "value" : series.name) << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.periods.size() == series.size()) {
            out << series.periods[i];
        } else {
            out << i + 1;
        }
        out << ',' << format_double(series.values[i]) << '\n';
    }
}

inline TimeSeries transform(const TimeSeries& series, const TransformSpec& spec) {
    if (spec.kind == TransformKind::none) return series;
    if (series.size() < 2) throw TooShortError("transform needs at least 2 observations");

    TimeSeries out;
    out.name = series.name;
    out.values.reserve(series.size() - 1);
    if (spec.kind == TransformKind::logdiff) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (!(series.values[i] > 0.0)) {
                throw DomainError("logdiff requires strictly positive levels; value at index " +
                                  std::to_string(i) + " is " + format_double(series.values[i]));
            }
        }
        for (std::size_t i = 1; i < series.size(); ++i) {
            out.values.push_back(spec.scale * (std::log(series.values[i]) - std::log(series.values[i - 1])));
        }
    } else {
        for (std::size_t i = 1; i < series.size(); ++i) {
            out.values.push_back(spec.scale * (series.values[i] - series.values[i - 1]));
        }
    }
    if (series.periods.size() == series.size()) {
        out.periods.assign(series.periods.begin() + 1, series.periods.end());
    }
    return out;
}

inline StandardizedSeries standardize(std::span<const double> values) {
    const auto n = values.size();
    if (n < 2) throw TooShortError("standardize needs at least 2 observations");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
        throw DegenerateInputError("series has zero variance; cannot standardize a constant series");
    }
    StandardizedSeries out;
    out.source_mean = mean;
    out.source_std = sd;
    out.values.reserve(n);
    for (double v : values) out.values.push_back((v - mean) / sd);
    return out;
}

inline StandardizedSeries standardize(const TimeSeries& series) { return standardize(series.values); }

inline SummaryStats summary_stats(std::span<const double> growth) {
    const auto n = growth.size();
    if (n < 3) throw TooShortError("summary statistics need at least 3 observations");
    SummaryStats s;
    for (double v : growth) s.mean += v;
    s.mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : growth) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n - 1));
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) acc += growth[i] - growth[i - 1];
    s.acc = acc / static_cast<double>(n - 1);
    return s;
}

inline SummaryStats summary_stats(const TimeSeries& growth) { return summary_stats(growth.values); }

}  // namespace nwspec
