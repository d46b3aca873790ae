#include "forecastability/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <string>

#include "forecastability/error.hpp"

namespace fcast::config {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(Errc::invalid_config, where + ": " + what);
}

/// One JSON object plus its path, for error messages and key checks.
class Section {
public:
    Section(const Json& obj, std::string path, std::initializer_list<std::string_view> allowed)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail(path_, "expected an object");
        for (const auto& [key, value] : obj_.items()) {
            bool known = false;
            for (const auto a : allowed) known = known || key == a;
            if (!known) fail(path_, "unknown key '" + key + "'");
        }
    }

    [[nodiscard]] const Json* find(std::string_view key) const {
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }
    [[nodiscard]] std::string at(std::string_view key) const { return path_ + "." + std::string(key); }

    void read(std::string_view key, double& out) const {
        if (const Json* v = find(key)) {
            if (!v->is_number()) fail(at(key), "expected a number");
            out = v->get<double>();
        }
    }
    void read(std::string_view key, bool& out) const {
        if (const Json* v = find(key)) {
            if (!v->is_boolean()) fail(at(key), "expected true or false");
            out = v->get<bool>();
        }
    }
    void read(std::string_view key, std::string& out) const {
        if (const Json* v = find(key)) {
            if (!v->is_string()) fail(at(key), "expected a string");
            out = v->get<std::string>();
        }
    }
    void read(std::string_view key, std::uint64_t& out) const {
        if (const Json* v = find(key)) out = as_unsigned(*v, at(key));
    }
    void read_size(std::string_view key, std::size_t& out) const {
        if (const Json* v = find(key)) out = static_cast<std::size_t>(as_unsigned(*v, at(key)));
    }

    static std::uint64_t as_unsigned(const Json& v, const std::string& where) {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            fail(where, "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

private:
    const Json& obj_;
    std::string path_;
};

template <class Enum>
Enum parse_enum(const Json& v, const std::string& where,
                std::initializer_list<std::pair<std::string_view, Enum>> names) {
    if (!v.is_string()) fail(where, "expected a string");
    const auto text = v.get<std::string>();
    for (const auto& [name, value] : names) {
        if (text == name) return value;
    }
    std::string options;
    for (const auto& [name, value] : names) options += (options.empty() ? "" : ", ") + std::string(name);
    fail(where, "unknown value '" + text + "' (expected one of " + options + ")");
}

spectral::SpectralConfig parse_spectral(const Json& j, const std::string& path) {
    const Section s(j, path, {"log_base", "apply_hann", "apply_detrend", "include_dc"});
    spectral::SpectralConfig c;
    s.read("log_base", c.log_base);
    s.read("apply_hann", c.apply_hann);
    s.read("apply_detrend", c.apply_detrend);
    s.read("include_dc", c.include_dc);
    if (!(c.log_base > 1.0) || !std::isfinite(c.log_base)) fail(s.at("log_base"), "must be a finite number > 1");
    return c;
}

lyapunov::EmbeddingConfig parse_embedding(const Json& j, const std::string& path) {
    const Section s(j, path,
                    {"embedding_dim", "delay", "horizon", "theiler_window", "distance_floor", "norm", "search"});
    lyapunov::EmbeddingConfig c;
    s.read_size("embedding_dim", c.embedding_dim);
    s.read_size("delay", c.delay);
    s.read_size("horizon", c.horizon);
    if (const Json* v = s.find("theiler_window"); v != nullptr && !v->is_null()) {
        c.theiler_window = static_cast<std::size_t>(Section::as_unsigned(*v, s.at("theiler_window")));
    }
    s.read("distance_floor", c.distance_floor);
    if (const Json* v = s.find("norm")) {
        c.norm = parse_enum<lyapunov::Norm>(*v, s.at("norm"), {{"euclidean", lyapunov::Norm::euclidean}});
    }
    if (const Json* v = s.find("search")) {
        c.search = parse_enum<lyapunov::NeighborSearch>(
            *v, s.at("search"),
            {{"exhaustive", lyapunov::NeighborSearch::exhaustive}, {"kd_tree", lyapunov::NeighborSearch::kd_tree}});
    }
    try {
        c.validate();
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return c;
}

std::vector<std::string> parse_strings(const Json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) fail(where, "expected an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

ingest::HierarchySpec parse_hierarchy(const Json& j, const std::string& path) {
    const Section s(j, path, {"levels"});
    const Json* levels = s.find("levels");
    if (levels == nullptr || !levels->is_array()) fail(s.at("levels"), "expected an array of levels");
    ingest::HierarchySpec h;
    for (std::size_t i = 0; i < levels->size(); ++i) {
        const std::string where = s.at("levels") + "[" + std::to_string(i) + "]";
        const Section l((*levels)[i], where, {"name", "dimensions"});
        ingest::LevelSpec level;
        l.read("name", level.name);
        if (level.name.empty()) fail(where, "level needs a name");
        if (const Json* d = l.find("dimensions")) level.dimensions = parse_strings(*d, l.at("dimensions"));
        h.levels.push_back(std::move(level));
    }
    try {
        h.validate();
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return h;
}

ingest::CsvSchema parse_schema(const Json& j, const std::string& path) {
    const Section s(j, path, {"id_column", "time_column", "value_column", "level_columns"});
    ingest::CsvSchema c;
    s.read("id_column", c.id_column);
    s.read("time_column", c.time_column);
    s.read("value_column", c.value_column);
    if (const Json* v = s.find("level_columns"); v != nullptr && !v->is_null()) {
        c.level_columns = parse_strings(*v, s.at("level_columns"));
    }
    return c;
}

std::vector<synth::SineComponent> parse_components(const Json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of components");
    std::vector<synth::SineComponent> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        const Section s(v[i], at, {"frequency", "amplitude", "phase"});
        if (s.find("frequency") == nullptr) fail(at, "component needs a frequency");
        synth::SineComponent c{0.0};
        s.read("frequency", c.frequency);
        s.read("amplitude", c.amplitude);
        s.read("phase", c.phase);
        out.push_back(c);
    }
    return out;
}

synth::LorenzParams parse_lorenz(const Json& j, const std::string& path, synth::LorenzParams p) {
    const Section s(j, path,
                    {"sigma", "rho", "beta", "dt", "initial_state", "transient_steps", "observed_coordinate",
                     "sample_every"});
    s.read("sigma", p.sigma);
    s.read("rho", p.rho);
    s.read("beta", p.beta);
    s.read("dt", p.dt);
    if (const Json* v = s.find("initial_state")) {
        if (!v->is_array() || v->size() != 3) fail(s.at("initial_state"), "expected three numbers");
        for (std::size_t i = 0; i < 3; ++i) {
            if (!(*v)[i].is_number()) fail(s.at("initial_state"), "expected three numbers");
            p.initial_state[i] = (*v)[i].get<double>();
        }
    }
    s.read_size("transient_steps", p.transient_steps);
    if (const Json* v = s.find("observed_coordinate")) {
        p.observed_coordinate = parse_enum<synth::Coordinate>(
            *v, s.at("observed_coordinate"),
            {{"x", synth::Coordinate::x}, {"y", synth::Coordinate::y}, {"z", synth::Coordinate::z}});
    }
    s.read_size("sample_every", p.sample_every);
    if (!(p.dt > 0.0)) fail(s.at("dt"), "must be positive");
    if (p.sample_every == 0) fail(s.at("sample_every"), "must be at least 1");
    return p;
}

synth::SignalKind parse_kind(const Json& v, const std::string& where) {
    return parse_enum<synth::SignalKind>(v, where,
                                         {{"sine", synth::SignalKind::sine},
                                          {"multisine", synth::SignalKind::multisine},
                                          {"noisy_multisine", synth::SignalKind::noisy_multisine},
                                          {"lorenz", synth::SignalKind::lorenz},
                                          {"white_noise", synth::SignalKind::white_noise}});
}

synth::SignalSpec parse_signal(const Json& j, const std::string& path) {
    const Section s(j, path, {"kind", "length", "seed", "params"});
    synth::SignalSpec spec;
    if (const Json* v = s.find("kind")) spec.kind = parse_kind(*v, s.at("kind"));
    s.read_size("length", spec.length);
    s.read("seed", spec.seed);
    if (const Json* v = s.find("params")) {
        const Section p(*v, s.at("params"), {"components", "noise_sigma", "lorenz", "sigma"});
        if (const Json* c = p.find("components")) spec.params.components = parse_components(*c, p.at("components"));
        p.read("noise_sigma", spec.params.noise_sigma);
        if (const Json* l = p.find("lorenz")) spec.params.lorenz = parse_lorenz(*l, p.at("lorenz"), {});
        p.read("sigma", spec.params.sigma);
    }
    return spec;
}

experiments::SweepSpec parse_sweep(const Json& j, const std::string& path) {
    const Section s(j, path, {"generator", "lengths", "sparsity_rates", "replicates", "metric", "base_seed"});
    experiments::SweepSpec spec;
    if (const Json* v = s.find("generator")) spec.generator = parse_signal(*v, s.at("generator"));
    if (const Json* v = s.find("lengths")) {
        if (!v->is_array() || v->empty()) fail(s.at("lengths"), "expected a non-empty array");
        spec.lengths.clear();
        for (const auto& e : *v) spec.lengths.push_back(static_cast<std::size_t>(Section::as_unsigned(e, s.at("lengths"))));
    }
    if (const Json* v = s.find("sparsity_rates")) {
        if (!v->is_array() || v->empty()) fail(s.at("sparsity_rates"), "expected a non-empty array");
        spec.sparsity_rates.clear();
        for (const auto& e : *v) {
            if (!e.is_number()) fail(s.at("sparsity_rates"), "expected numbers");
            const double r = e.get<double>();
            if (!(r >= 0.0 && r < 1.0)) fail(s.at("sparsity_rates"), "rates must lie in [0, 1)");
            spec.sparsity_rates.push_back(r);
        }
    }
    s.read_size("replicates", spec.replicates);
    if (spec.replicates == 0) fail(s.at("replicates"), "must be at least 1");
    if (const Json* v = s.find("metric")) {
        spec.metric = parse_enum<experiments::Metric>(
            *v, s.at("metric"),
            {{"spectral_predictability", experiments::Metric::spectral_predictability},
             {"largest_lyapunov", experiments::Metric::largest_lyapunov}});
    }
    s.read("base_seed", spec.base_seed);
    return spec;
}

void parse_benchmark(const Json& j, const std::string& path, RunConfig& rc) {
    const Section s(j, path,
                    {"segment_length", "seed", "sine_frequency", "multisine", "noise_sigma", "lorenz", "omega_window",
                     "lambda_window", "stride"});
    auto& b = rc.benchmark;
    s.read_size("segment_length", b.segment_length);
    s.read("seed", b.seed);
    s.read("sine_frequency", b.sine_frequency);
    if (const Json* v = s.find("multisine")) b.multisine = parse_components(*v, s.at("multisine"));
    s.read("noise_sigma", b.noise_sigma);
    if (const Json* v = s.find("lorenz")) b.lorenz = parse_lorenz(*v, s.at("lorenz"), b.lorenz);
    s.read_size("omega_window", rc.omega_plan.window_size);
    s.read_size("lambda_window", rc.lambda_plan.window_size);
    std::size_t stride = rc.omega_plan.stride;
    s.read_size("stride", stride);
    if (stride == 0) fail(s.at("stride"), "must be at least 1");
    rc.omega_plan.stride = rc.lambda_plan.stride = stride;
}

report::ReportConfig parse_report(const Json& j, const std::string& path) {
    const Section s(j, path,
                    {"frequencies", "thresholds", "baseline_replicates", "seed", "emit_log2pi_variant"});
    report::ReportConfig c;
    if (const Json* v = s.find("frequencies")) {
        c.frequencies.clear();
        for (const auto& name : parse_strings(*v, s.at("frequencies"))) {
            const auto f = parse_frequency(name);
            if (!f || *f == Frequency::unitless) fail(s.at("frequencies"), "expected daily or weekly, got '" + name + "'");
            c.frequencies.push_back(*f);
        }
        if (c.frequencies.empty()) fail(s.at("frequencies"), "expected at least one frequency");
    }
    if (const Json* v = s.find("thresholds")) {
        const Section t(*v, s.at("thresholds"), {"omega_below", "lambda_above"});
        t.read("omega_below", c.thresholds.omega_below);
        t.read("lambda_above", c.thresholds.lambda_above);
    }
    s.read_size("baseline_replicates", c.baseline_replicates);
    s.read("seed", c.seed);
    s.read("emit_log2pi_variant", c.emit_log2pi_variant);
    return c;
}

Json components_json(const std::vector<synth::SineComponent>& cs) {
    Json out = Json::array();
    for (const auto& c : cs) out.push_back({{"frequency", c.frequency}, {"amplitude", c.amplitude}, {"phase", c.phase}});
    return out;
}

std::string_view coordinate_name(synth::Coordinate c) {
    switch (c) {
        case synth::Coordinate::x: return "x";
        case synth::Coordinate::y: return "y";
        case synth::Coordinate::z: return "z";
    }
    return "x";
}

}  // namespace

experiments::SweepSpec RunConfig::sweep_spec() const {
    auto s = sweep;
    s.spectral = spectral;
    s.embedding = embedding;
    return s;
}

experiments::SegmentConfig RunConfig::segment_config() const {
    return {omega_plan, lambda_plan, spectral, embedding};
}

report::ReportConfig RunConfig::report_config() const {
    auto r = report;
    r.spectral = spectral;
    r.embedding = embedding;
    return r;
}

RunConfig parse_config(const Json& doc) {
    const Section s(doc, "config",
                    {"spectral", "embedding", "hierarchy", "schema", "signal", "sweep", "benchmark", "report"});
    RunConfig rc;
    if (const Json* v = s.find("spectral")) rc.spectral = parse_spectral(*v, s.at("spectral"));
    if (const Json* v = s.find("embedding")) rc.embedding = parse_embedding(*v, s.at("embedding"));
    if (const Json* v = s.find("hierarchy")) rc.hierarchy = parse_hierarchy(*v, s.at("hierarchy"));
    if (const Json* v = s.find("schema")) rc.schema = parse_schema(*v, s.at("schema"));
    if (const Json* v = s.find("signal")) rc.signal = parse_signal(*v, s.at("signal"));
    if (const Json* v = s.find("sweep")) rc.sweep = parse_sweep(*v, s.at("sweep"));
    if (const Json* v = s.find("benchmark")) parse_benchmark(*v, s.at("benchmark"), rc);
    if (const Json* v = s.find("report")) rc.report = parse_report(*v, s.at("report"));
    return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open config " + path.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(Errc::invalid_config, path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

Json to_json(const spectral::SpectralConfig& c) {
    return {{"log_base", c.log_base},
            {"apply_hann", c.apply_hann},
            {"apply_detrend", c.apply_detrend},
            {"include_dc", c.include_dc}};
}

Json to_json(const lyapunov::EmbeddingConfig& c) {
    return {{"embedding_dim", c.embedding_dim},
            {"delay", c.delay},
            {"horizon", c.horizon},
            {"theiler_window", c.effective_theiler()},
            {"distance_floor", c.distance_floor},
            {"norm", "euclidean"},
            {"search", std::string(lyapunov::to_string(c.search))}};
}

Json to_json(const ingest::HierarchySpec& h) {
    Json levels = Json::array();
    for (const auto& l : h.levels) levels.push_back({{"name", l.name}, {"dimensions", l.dimensions}});
    return {{"levels", levels}};
}

Json to_json(const synth::LorenzParams& p) {
    return {{"sigma", p.sigma},
            {"rho", p.rho},
            {"beta", p.beta},
            {"dt", p.dt},
            {"initial_state", p.initial_state},
            {"transient_steps", p.transient_steps},
            {"observed_coordinate", std::string(coordinate_name(p.observed_coordinate))},
            {"sample_every", p.sample_every}};
}

Json to_json(const synth::SignalSpec& s) {
    return {{"kind", std::string(synth::to_string(s.kind))},
            {"length", s.length},
            {"seed", s.seed},
            {"params",
             {{"components", components_json(s.params.components)},
              {"noise_sigma", s.params.noise_sigma},
              {"lorenz", to_json(s.params.lorenz)},
              {"sigma", s.params.sigma}}}};
}

Json to_json(const experiments::SweepSpec& s) {
    return {{"generator", to_json(s.generator)},
            {"lengths", s.lengths},
            {"sparsity_rates", s.sparsity_rates},
            {"replicates", s.replicates},
            {"metric", std::string(experiments::to_string(s.metric))},
            {"base_seed", s.base_seed},
            {"spectral", to_json(s.spectral)},
            {"embedding", to_json(s.embedding)}};
}

Json to_json(const synth::BenchmarkSpec& b) {
    return {{"segment_length", b.segment_length},
            {"seed", b.seed},
            {"sine_frequency", b.sine_frequency},
            {"multisine", components_json(b.multisine)},
            {"noise_sigma", b.noise_sigma},
            {"lorenz", to_json(b.lorenz)}};
}

Json to_json(const experiments::SegmentConfig& c) {
    return {{"omega_window", c.omega_plan.window_size},
            {"lambda_window", c.lambda_plan.window_size},
            {"stride", c.omega_plan.stride},
            {"spectral", to_json(c.spectral)},
            {"embedding", to_json(c.embedding)}};
}

Json to_json(const report::ReportConfig& c) {
    Json freqs = Json::array();
    for (const auto f : c.frequencies) freqs.push_back(std::string(to_string(f)));
    return {{"frequencies", freqs},
            {"thresholds", {{"omega_below", c.thresholds.omega_below}, {"lambda_above", c.thresholds.lambda_above}}},
            {"baseline_replicates", c.baseline_replicates},
            {"seed", c.seed},
            {"emit_log2pi_variant", c.emit_log2pi_variant},
            {"spectral", to_json(c.spectral)},
            {"embedding", to_json(c.embedding)}};
}

Json to_json(const RunConfig& c) {
    Json out = {{"spectral", to_json(c.spectral)}, {"embedding", to_json(c.embedding)}};
    if (c.hierarchy) out["hierarchy"] = to_json(*c.hierarchy);
    Json schema = {{"id_column", c.schema.id_column},
                   {"time_column", c.schema.time_column},
                   {"value_column", c.schema.value_column}};
    if (c.schema.level_columns) schema["level_columns"] = *c.schema.level_columns;
    out["schema"] = schema;
    out["signal"] = to_json(c.signal);
    Json sweep = to_json(c.sweep);
    sweep.erase("spectral");
    sweep.erase("embedding");
    out["sweep"] = sweep;
    Json bench = to_json(c.benchmark);
    bench["omega_window"] = c.omega_plan.window_size;
    bench["lambda_window"] = c.lambda_plan.window_size;
    bench["stride"] = c.omega_plan.stride;
    out["benchmark"] = bench;
    Json rep = to_json(c.report);
    rep.erase("spectral");
    rep.erase("embedding");
    out["report"] = rep;
    return out;
}

}  // namespace fcast::config
