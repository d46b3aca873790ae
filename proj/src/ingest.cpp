#include "forecastability/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "forecastability/error.hpp"

namespace fcast::ingest {
namespace {

std::string where(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line);
}

double parse_value(std::string_view text, std::string_view source, std::size_t line) {
    if (text.empty()) throw Error(Errc::malformed_csv, where(source, line) + ": missing value");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(Errc::malformed_csv, where(source, line) + ": cannot parse value '" + std::string(text) + "'");
    }
    if (!std::isfinite(v)) {
        throw Error(Errc::non_finite, where(source, line) + ": non-finite value '" + std::string(text) + "'");
    }
    return v;
}

std::int64_t parse_time(std::string_view text, std::string_view source, std::size_t line) {
    std::int64_t t = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), t);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || t < 0) {
        throw Error(Errc::malformed_csv,
                    where(source, line) + ": time index must be a non-negative integer, got '" + std::string(text) + "'");
    }
    return t;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name, std::string_view source) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw Error(Errc::unmapped_column, std::string(source) + ": header has no column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    return in;
}

struct Pending {
    std::map<std::string, std::string> keys;
    std::map<std::int64_t, double> points;
    std::size_t first_line = 0;
};

Dataset assemble(std::vector<std::string> dims, std::map<std::string, Pending>& pending, std::size_t records,
                 std::string_view source) {
    Dataset ds;
    ds.dimensions = std::move(dims);
    ds.record_count = records;
    for (auto& [id, p] : pending) {
        std::vector<double> values;
        values.reserve(p.points.size());
        std::int64_t expected = p.points.begin()->first;
        for (const auto& [t, v] : p.points) {
            if (t != expected) {
                throw Error(Errc::non_contiguous, std::string(source) + ": series '" + id + "' jumps from t=" +
                                                      std::to_string(expected - 1) + " to t=" + std::to_string(t));
            }
            values.push_back(v);
            ++expected;
        }
        ds.series.push_back({TimeSeries(id, std::move(values), p.points.begin()->first, Frequency::daily),
                             std::move(p.keys)});
    }
    return ds;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw Error(Errc::malformed_csv, "line " + std::to_string(line_number) + ": unterminated quote");
    fields.push_back(std::move(field));
    return fields;
}

Dataset parse_long_csv(std::istream& in, const CsvSchema& schema, std::string_view source) {
    std::string line;
    if (!next_line(in, line)) throw Error(Errc::malformed_csv, std::string(source) + ": empty file");
    const auto header = split_csv_line(line, 1);

    const std::size_t id_col = column_of(header, schema.id_column, source);
    const std::size_t t_col = column_of(header, schema.time_column, source);
    const std::size_t v_col = column_of(header, schema.value_column, source);

    std::vector<std::string> dims;
    if (schema.level_columns) {
        dims = *schema.level_columns;
    } else {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c != id_col && c != t_col && c != v_col) dims.push_back(header[c]);
        }
    }
    std::vector<std::size_t> dim_cols;
    for (const auto& d : dims) {
        if (d == kSeriesIdDimension) throw Error(Errc::invalid_config, "'series_id' is reserved as a level name");
        dim_cols.push_back(column_of(header, d, source));
    }

    std::map<std::string, Pending> pending;
    std::size_t records = 0;
    for (std::size_t line_no = 2; next_line(in, line); ++line_no) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line, line_no);
        if (f.size() != header.size()) {
            throw Error(Errc::malformed_csv, where(source, line_no) + ": expected " + std::to_string(header.size()) +
                                                 " fields, found " + std::to_string(f.size()));
        }
        const std::string& id = f[id_col];
        if (id.empty()) throw Error(Errc::malformed_csv, where(source, line_no) + ": empty series id");
        const std::int64_t t = parse_time(f[t_col], source, line_no);
        const double v = parse_value(f[v_col], source, line_no);

        std::map<std::string, std::string> keys;
        for (std::size_t k = 0; k < dims.size(); ++k) keys.emplace(dims[k], f[dim_cols[k]]);

        auto [it, inserted] = pending.try_emplace(id);
        Pending& p = it->second;
        if (inserted) {
            p.keys = std::move(keys);
            p.first_line = line_no;
        } else if (p.keys != keys) {
            throw Error(Errc::malformed_csv, where(source, line_no) + ": series '" + id +
                                                 "' changes its level keys (first seen on line " +
                                                 std::to_string(p.first_line) + ")");
        }
        if (!p.points.emplace(t, v).second) {
            throw Error(Errc::duplicate_key,
                        where(source, line_no) + ": duplicate (" + id + ", " + std::to_string(t) + ")");
        }
        ++records;
    }
    if (pending.empty()) throw Error(Errc::malformed_csv, std::string(source) + ": no data rows");
    return assemble(std::move(dims), pending, records, source);
}

Dataset load_long_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    auto in = open(path);
    return parse_long_csv(in, schema, path.string());
}

Dataset parse_wide_csv(std::istream& in, const WideSchema& schema, std::string_view source) {
    std::string line;
    if (!next_line(in, line)) throw Error(Errc::malformed_csv, std::string(source) + ": empty file");
    const auto header = split_csv_line(line, 1);
    const std::size_t id_col = column_of(header, schema.id_column, source);
    std::vector<std::size_t> dim_cols;
    for (const auto& d : schema.level_columns) dim_cols.push_back(column_of(header, d, source));

    std::vector<std::pair<std::size_t, std::int64_t>> day_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c].rfind(schema.value_prefix, 0) == 0) {
            day_cols.emplace_back(c, parse_time(std::string_view(header[c]).substr(schema.value_prefix.size()),
                                                source, 1));
        }
    }
    if (day_cols.empty()) {
        throw Error(Errc::unmapped_column, std::string(source) + ": no columns start with '" + schema.value_prefix + "'");
    }

    std::map<std::string, Pending> pending;
    std::size_t records = 0;
    for (std::size_t line_no = 2; next_line(in, line); ++line_no) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line, line_no);
        if (f.size() != header.size()) {
            throw Error(Errc::malformed_csv, where(source, line_no) + ": expected " + std::to_string(header.size()) +
                                                 " fields, found " + std::to_string(f.size()));
        }
        auto [it, inserted] = pending.try_emplace(f[id_col]);
        if (!inserted) throw Error(Errc::duplicate_key, where(source, line_no) + ": duplicate series '" + f[id_col] + "'");
        Pending& p = it->second;
        p.first_line = line_no;
        for (std::size_t k = 0; k < dim_cols.size(); ++k) p.keys.emplace(schema.level_columns[k], f[dim_cols[k]]);
        for (const auto& [col, t] : day_cols) {
            if (!p.points.emplace(t, parse_value(f[col], source, line_no)).second) {
                throw Error(Errc::duplicate_key, where(source, line_no) + ": duplicate day " + std::to_string(t));
            }
            ++records;
        }
    }
    if (pending.empty()) throw Error(Errc::malformed_csv, std::string(source) + ": no data rows");
    return assemble(schema.level_columns, pending, records, source);
}

Dataset load_wide_csv(const std::filesystem::path& path, const WideSchema& schema) {
    auto in = open(path);
    return parse_wide_csv(in, schema, path.string());
}

void HierarchySpec::validate() const {
    if (levels.empty()) throw Error(Errc::invalid_config, "hierarchy needs at least one level");
    for (std::size_t i = 1; i < levels.size(); ++i) {
        for (const auto& d : levels[i - 1].dimensions) {
            if (std::find(levels[i].dimensions.begin(), levels[i].dimensions.end(), d) == levels[i].dimensions.end()) {
                throw Error(Errc::invalid_config, "level '" + levels[i].name + "' drops dimension '" + d +
                                                      "' of level '" + levels[i - 1].name + "'");
            }
        }
    }
}

HierarchySpec HierarchySpec::from_dimensions(const std::vector<std::string>& dims) {
    HierarchySpec spec;
    spec.levels.push_back({"total", {}});
    if (dims.empty()) {
        spec.levels.push_back({"series", {std::string(kSeriesIdDimension)}});
        return spec;
    }
    std::vector<std::string> prefix;
    for (const auto& d : dims) {
        prefix.push_back(d);
        spec.levels.push_back({d, prefix});
    }
    return spec;
}

std::vector<LevelSeries> aggregate_levels(const Dataset& dataset, const HierarchySpec& hierarchy) {
    hierarchy.validate();
    if (dataset.series.empty()) throw Error(Errc::degenerate_input, "dataset has no series");

    const auto& first = dataset.series.front().series;
    for (const auto& e : dataset.series) {
        if (e.series.start_index() != first.start_index() || e.series.size() != first.size()) {
            throw Error(Errc::misaligned_series, "series '" + e.series.id() + "' covers t=" +
                                                     std::to_string(e.series.start_index()) + "+" +
                                                     std::to_string(e.series.size()) + ", expected t=" +
                                                     std::to_string(first.start_index()) + "+" +
                                                     std::to_string(first.size()));
        }
    }

    std::vector<LevelSeries> out;
    for (const auto& level : hierarchy.levels) {
        std::map<std::vector<std::string>, std::vector<double>> groups;
        for (const auto& e : dataset.series) {
            std::vector<std::string> key;
            for (const auto& d : level.dimensions) {
                if (d == kSeriesIdDimension) {
                    key.push_back(e.series.id());
                    continue;
                }
                const auto it = e.level_keys.find(d);
                if (it == e.level_keys.end()) {
                    throw Error(Errc::unmapped_column, "level '" + level.name + "' groups by unknown dimension '" + d + "'");
                }
                key.push_back(it->second);
            }
            auto& sum = groups[key];
            if (sum.empty()) sum.assign(first.size(), 0.0);
            for (std::size_t t = 0; t < first.size(); ++t) sum[t] += e.series[t];
        }

        LevelSeries ls{level.name, {}};
        for (auto& [key, values] : groups) {
            std::string id;
            for (const auto& part : key) id += (id.empty() ? "" : "/") + part;
            if (key.empty()) id = "total";
            ls.series.emplace_back(std::move(id), std::move(values), first.start_index(), first.frequency());
        }
        std::sort(ls.series.begin(), ls.series.end(),
                  [](const TimeSeries& a, const TimeSeries& b) { return a.id() < b.id(); });
        out.push_back(std::move(ls));
    }
    return out;
}

}  // namespace fcast::ingest
