#include "forecastability/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "forecastability/error.hpp"
#include "forecastability/random.hpp"

namespace fcast::output {

namespace {

double round9(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::strtod(buf, nullptr);
}

Json real_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json real_json(const std::optional<double>& x) { return x ? real_json(*x) : Json(nullptr); }

Json summary_json(const experiments::Summary& s) {
    return {{"count", s.count}, {"mean", real_json(s.mean)}, {"std", real_json(s.std)}};
}

std::string join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line += ',';
        line += fields[i];
    }
    line += '\n';
    return line;
}

std::vector<std::string> error_models(const report::MetricReport& r) {
    std::set<std::string> models;
    for (const auto& row : r.rows) {
        for (const auto& [m, v] : row.errors) models.insert(m);
    }
    return {models.begin(), models.end()};
}

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string format_real(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

void normalize_floats(Json& doc) {
    if (doc.is_number_float()) {
        const double x = doc.get<double>();
        doc = std::isfinite(x) ? Json(round9(x)) : Json(nullptr);
    } else if (doc.is_structured()) {
        for (auto& child : doc) normalize_floats(child);
    }
}

std::string dump(Json doc) {
    normalize_floats(doc);
    return doc.dump(2) + "\n";
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (const char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

Json metadata(const spectral::SpectralConfig& spectral, const lyapunov::EmbeddingConfig& embedding) {
    return {{"version", std::string(kVersion)},
            {"normalizer", std::string(kNormalizer)},
            {"rng", std::string(kRngIdentity)},
            {"spectral", config::to_json(spectral)},
            {"embedding", config::to_json(embedding)}};
}

std::string series_csv(const std::vector<TimeSeries>& series) {
    std::string out = "series_id,t,value\n";
    for (const auto& s : series) {
        const auto v = s.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += join({csv_field(s.id()), std::to_string(s.start_index() + static_cast<std::int64_t>(i)),
                         format_real(v[i])});
        }
    }
    return out;
}

Json series_json(const std::vector<TimeSeries>& series) {
    Json list = Json::array();
    for (const auto& s : series) {
        list.push_back({{"id", s.id()},
                        {"start_index", s.start_index()},
                        {"frequency", std::string(to_string(s.frequency()))},
                        {"values", std::vector<double>(s.values().begin(), s.values().end())}});
    }
    return {{"metadata", {{"version", std::string(kVersion)}, {"rng", std::string(kRngIdentity)}}},
            {"series", list}};
}

std::string report_csv(const report::MetricReport& r) {
    const auto models = error_models(r);
    std::vector<std::string> header{"level",         "frequency",      "series_id", "length",
                                    "sparsity",      "omega"};
    if (r.config.emit_log2pi_variant) header.emplace_back("omega_log2pi");
    for (const char* h : {"lambda", "pair_count", "skipped_pairs", "sufficiency", "baseline_omega",
                          "low_forecastability", "note"}) {
        header.emplace_back(h);
    }
    for (const auto& m : models) header.push_back(csv_field("error_" + m));
    std::string out = join(header);
    for (const auto& row : r.rows) {
        std::vector<std::string> f{csv_field(row.level),      std::string(to_string(row.frequency)),
                                   csv_field(row.series_id),  std::to_string(row.length),
                                   format_real(row.sparsity), format_real(row.omega)};
        if (r.config.emit_log2pi_variant) f.push_back(format_real(row.omega_log2pi));
        f.push_back(format_real(row.lambda));
        f.push_back(std::to_string(row.pair_count));
        f.push_back(std::to_string(row.skipped_pairs));
        f.emplace_back(lyapunov::to_string(row.sufficiency));
        f.push_back(format_real(row.baseline_omega));
        f.emplace_back(row.low_forecastability ? "true" : "false");
        f.push_back(csv_field(row.note));
        for (const auto& m : models) {
            const auto it = row.errors.find(m);
            f.push_back(it == row.errors.end() ? std::string() : format_real(it->second));
        }
        out += join(f);
    }
    return out;
}

Json report_json(const report::MetricReport& r) {
    Json meta = metadata(r.config.spectral, r.config.embedding);
    Json cfg = config::to_json(r.config);
    cfg.erase("spectral");
    cfg.erase("embedding");
    meta["report"] = cfg;

    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json j = {{"level", row.level},
                  {"frequency", std::string(to_string(row.frequency))},
                  {"series_id", row.series_id},
                  {"length", row.length},
                  {"sparsity", row.sparsity},
                  {"omega", real_json(row.omega)}};
        if (r.config.emit_log2pi_variant) j["omega_log2pi"] = real_json(row.omega_log2pi);
        j["lambda"] = real_json(row.lambda);
        j["pair_count"] = row.pair_count;
        j["skipped_pairs"] = row.skipped_pairs;
        j["sufficiency"] = std::string(lyapunov::to_string(row.sufficiency));
        j["baseline_omega"] = real_json(row.baseline_omega);
        j["low_forecastability"] = row.low_forecastability;
        j["note"] = row.note;
        Json errors = Json::object();
        for (const auto& [m, v] : row.errors) errors[m] = v;
        j["errors"] = errors;
        rows.push_back(std::move(j));
    }

    Json summaries = Json::array();
    for (const auto& s : r.level_summaries) {
        summaries.push_back({{"level", s.level},
                             {"frequency", std::string(to_string(s.frequency))},
                             {"series_count", s.series_count},
                             {"omega", summary_json(s.omega)},
                             {"lambda", summary_json(s.lambda)},
                             {"lambda_gaps", s.lambda_gaps}});
    }

    Json correlations = Json::array();
    for (const auto& c : r.correlations) {
        correlations.push_back({{"scope", c.scope},
                                {"frequency", std::string(to_string(c.frequency))},
                                {"model", c.model},
                                {"metric", c.metric},
                                {"points", c.points},
                                {"r", real_json(c.r)},
                                {"status", c.status}});
    }

    return {{"metadata", meta},
            {"levels", r.level_names},
            {"rows", rows},
            {"level_summaries", summaries},
            {"correlations", correlations},
            {"warnings", r.warnings}};
}

std::string sweep_csv(const experiments::SweepResult& result) {
    std::string out = "length,sparsity,mean,std,n,failures\n";
    for (const auto& c : result.cells) {
        out += join({std::to_string(c.length), format_real(c.sparsity_rate), format_real(c.mean), format_real(c.std),
                     std::to_string(c.replicate_count), std::to_string(c.failure_count)});
    }
    return out;
}

Json sweep_json(const experiments::SweepSpec& spec, const experiments::SweepResult& result) {
    Json cells = Json::array();
    for (const auto& c : result.cells) {
        cells.push_back({{"length", c.length},
                         {"sparsity", c.sparsity_rate},
                         {"mean", real_json(c.mean)},
                         {"std", real_json(c.std)},
                         {"n", c.replicate_count},
                         {"failures", c.failure_count},
                         {"short_series", c.short_series},
                         {"high_sparsity_replicates", c.high_sparsity_count}});
    }
    return {{"metadata", metadata(spec.spectral, spec.embedding)}, {"spec", config::to_json(spec)}, {"cells", cells}};
}

std::string segments_csv(const experiments::SegmentReport& r) {
    std::string out = "kind,name,begin,end,omega_mean,omega_std,omega_windows,lambda_mean,lambda_std,lambda_windows,"
                      "lambda_gaps\n";
    for (const auto& s : r.segments) {
        out += join({"segment", csv_field(s.name), std::to_string(s.begin), std::to_string(s.end),
                     format_real(s.omega.mean), format_real(s.omega.std), std::to_string(s.omega.count),
                     format_real(s.lambda.mean), format_real(s.lambda.std), std::to_string(s.lambda.count),
                     std::to_string(s.lambda_gaps)});
    }
    for (const auto& b : r.boundaries) {
        out += join({"boundary", "", std::to_string(b.index), std::to_string(b.index), format_real(b.omega.mean),
                     format_real(b.omega.std), std::to_string(b.omega.count), format_real(b.lambda.mean),
                     format_real(b.lambda.std), std::to_string(b.lambda.count), std::to_string(b.lambda_gaps)});
    }
    return out;
}

std::string benchmark_series_csv(const synth::Benchmark& benchmark, const experiments::SegmentReport& r) {
    const auto values = benchmark.series.values();
    std::vector<std::optional<double>> omega(values.size());
    std::vector<std::optional<double>> lambda(values.size());
    const auto place = [&](const MovingSeries& m, std::vector<std::optional<double>>& dst) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto pos = static_cast<std::size_t>(m.stamps[i] - benchmark.series.start_index());
            if (pos < dst.size()) dst[pos] = m.values[i];
        }
    };
    place(r.omega, omega);
    place(r.lambda, lambda);

    std::string out = "t,value,segment,omega,lambda\n";
    std::size_t segment = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        while (segment < benchmark.boundaries.size() && i >= benchmark.boundaries[segment]) ++segment;
        out += join({std::to_string(benchmark.series.start_index() + static_cast<std::int64_t>(i)),
                     format_real(values[i]), csv_field(benchmark.segment_names[segment]), format_real(omega[i]),
                     format_real(lambda[i])});
    }
    return out;
}

Json benchmark_json(const synth::BenchmarkSpec& spec, const experiments::SegmentConfig& config,
                    const synth::Benchmark& benchmark, const experiments::SegmentReport& r) {
    Json segments = Json::array();
    for (const auto& s : r.segments) {
        segments.push_back({{"name", s.name},
                            {"begin", s.begin},
                            {"end", s.end},
                            {"omega", summary_json(s.omega)},
                            {"lambda", summary_json(s.lambda)},
                            {"lambda_gaps", s.lambda_gaps}});
    }
    Json boundaries = Json::array();
    for (const auto& b : r.boundaries) {
        boundaries.push_back({{"index", b.index},
                              {"omega", summary_json(b.omega)},
                              {"lambda", summary_json(b.lambda)},
                              {"lambda_gaps", b.lambda_gaps}});
    }
    const auto moving = [](const MovingSeries& m) {
        Json out = Json::array();
        for (std::size_t i = 0; i < m.size(); ++i) out.push_back({{"t", m.stamps[i]}, {"value", real_json(m.values[i])}});
        return out;
    };
    Json cfg = config::to_json(config);
    cfg.erase("spectral");
    cfg.erase("embedding");
    return {{"metadata", metadata(config.spectral, config.embedding)},
            {"spec", config::to_json(spec)},
            {"windows", cfg},
            {"segments", segments},
            {"boundaries", boundaries},
            {"series", std::vector<double>(benchmark.series.values().begin(), benchmark.series.values().end())},
            {"omega", moving(r.omega)},
            {"lambda", moving(r.lambda)}};
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::io, "write failed for " + path.string());
}

}  // namespace fcast::output
