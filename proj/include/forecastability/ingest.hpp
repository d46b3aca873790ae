#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forecastability/timeseries.hpp"

namespace fcast::ingest {

/// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
/// Throws malformed_csv on an unterminated quote.
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number);

struct LongRecord {
    std::string series_id;
    std::map<std::string, std::string> level_keys;
    std::int64_t timestamp_index = 0;
    double value = 0.0;
};

/// Maps header names to roles. Level columns default to every column that is
/// not the id, time or value column, in header order.
struct CsvSchema {
    std::string id_column = "series_id";
    std::string time_column = "t";
    std::string value_column = "value";
    std::optional<std::vector<std::string>> level_columns;
};

/// Series assembled from long records, with the level keys it carries.
struct SeriesEntry {
    TimeSeries series;
    std::map<std::string, std::string> level_keys;
};

struct Dataset {
    std::vector<std::string> dimensions;  ///< level columns, header order
    std::size_t record_count = 0;
    std::vector<SeriesEntry> series;  ///< sorted by series id
};

/// Long format: one row per (series, t). Rejects missing or non-finite values,
/// unmapped columns, duplicate (id, t) and gaps in t; messages name the line.
[[nodiscard]] Dataset parse_long_csv(std::istream& in, const CsvSchema& schema = {},
                                     std::string_view source = "<stream>");
[[nodiscard]] Dataset load_long_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Wide format, one row per series with day columns named <prefix><n>
/// (as in the M5 sales files). Day n becomes t = n.
struct WideSchema {
    std::string id_column = "id";
    std::vector<std::string> level_columns{"cat_id", "dept_id", "item_id"};
    std::string value_prefix = "d_";
};

[[nodiscard]] Dataset parse_wide_csv(std::istream& in, const WideSchema& schema = {},
                                     std::string_view source = "<stream>");
[[nodiscard]] Dataset load_wide_csv(const std::filesystem::path& path, const WideSchema& schema = {});

/// Pseudo-dimension grouping by the series id itself.
inline constexpr std::string_view kSeriesIdDimension = "series_id";

struct LevelSpec {
    std::string name;
    std::vector<std::string> dimensions;
};

/// Ordered levels; each level's dimensions include all of the previous one's.
struct HierarchySpec {
    std::vector<LevelSpec> levels;

    /// Throws invalid_config on an empty list or non-nested groupings.
    void validate() const;

    /// total, then one level per cumulative prefix of `dims`; with no
    /// dimensions, total and a per-series level.
    [[nodiscard]] static HierarchySpec from_dimensions(const std::vector<std::string>& dims);
};

struct LevelSeries {
    std::string name;
    std::vector<TimeSeries> series;  ///< sorted by id
};

/// Sums series per group at every level. Group ids are the grouping values
/// joined by '/', or "total" for the empty grouping. All input series must
/// cover the same time range (misaligned_series otherwise).
[[nodiscard]] std::vector<LevelSeries> aggregate_levels(const Dataset& dataset, const HierarchySpec& hierarchy);

}  // namespace fcast::ingest
