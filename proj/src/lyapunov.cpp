#include "forecastability/lyapunov.hpp"

#include <cmath>
#include <limits>

#include "forecastability/error.hpp"
#include "forecastability/neighbor_index.hpp"

namespace fcast::lyapunov {

Embedding::Embedding(std::size_t dim, std::vector<double> data) : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0) throw Error(Errc::degenerate_input, "embedding dimension must be at least 1");
    if (data_.size() % dim_ != 0) throw Error(Errc::degenerate_input, "ragged embedding data");
}

Embedding delay_embed(std::span<const double> values, std::size_t dim, std::size_t delay) {
    if (dim == 0 || delay == 0) {
        throw Error(Errc::invalid_config, "embedding dimension and delay must be at least 1");
    }
    const std::size_t span = (dim - 1) * delay;
    if (values.size() < span + 1) {
        throw Error(Errc::embedding_infeasible,
                    "series of length " + std::to_string(values.size()) + " cannot be embedded with m=" +
                        std::to_string(dim) + ", tau=" + std::to_string(delay));
    }
    const std::size_t count = values.size() - span;
    std::vector<double> data(count * dim);
    for (std::size_t t = 0; t < count; ++t) {
        for (std::size_t j = 0; j < dim; ++j) data[t * dim + j] = values[t + j * delay];
    }
    return Embedding(dim, std::move(data));
}

Embedding delay_embed(const TimeSeries& series, std::size_t dim, std::size_t delay) {
    return delay_embed(series.values(), dim, delay);
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

std::string_view to_string(NeighborSearch s) noexcept {
    return s == NeighborSearch::exhaustive ? "exhaustive" : "kd_tree";
}

namespace {

std::optional<std::size_t> scan_nearest(const Embedding& states, std::size_t count, std::size_t index,
                                        const NeighborQuery& query) {
    const auto q = states.state(index);
    double best_d2 = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t gap = index > j ? index - j : j - index;
        if (gap <= query.theiler_window) continue;
        const double d2 = squared_distance(q, states.state(j));
        if (std::sqrt(d2) < query.distance_floor) continue;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

}  // namespace

std::optional<std::size_t> nearest_neighbor(const Embedding& states, std::size_t index,
                                            std::size_t theiler_window, double distance_floor) {
    if (index >= states.size()) return std::nullopt;
    return scan_nearest(states, states.size(), index, {theiler_window, distance_floor});
}

std::vector<std::optional<std::size_t>> all_nearest_neighbors(const Embedding& states, std::size_t count,
                                                              const NeighborQuery& query,
                                                              NeighborSearch search, Parallelism par) {
    count = std::min(count, states.size());
    std::vector<std::optional<std::size_t>> result(count);
    if (search == NeighborSearch::exhaustive) {
        parallel_for(count, par, [&](std::size_t i) { result[i] = scan_nearest(states, count, i, query); });
    } else {
        const KdTree tree(states, count);
        parallel_for(count, par, [&](std::size_t i) { result[i] = tree.nearest(i, query); });
    }
    return result;
}

void EmbeddingConfig::validate() const {
    if (embedding_dim < 2) throw Error(Errc::invalid_config, "embedding_dim must be at least 2");
    if (delay < 1) throw Error(Errc::invalid_config, "delay must be at least 1");
    if (horizon < 1) throw Error(Errc::invalid_config, "horizon must be at least 1");
    if (!(distance_floor > 0.0)) throw Error(Errc::invalid_config, "distance_floor must be positive");
}

std::string_view to_string(Sufficiency s) noexcept {
    switch (s) {
        case Sufficiency::ok: return "ok";
        case Sufficiency::short_series: return "short_series";
        case Sufficiency::high_sparsity: return "high_sparsity";
    }
    return "ok";
}

Sufficiency sufficiency_check(std::span<const double> values, const EmbeddingConfig& config) {
    if (values.size() < kSamplesPerDimension * config.embedding_dim) return Sufficiency::short_series;
    if (sparsity_of(values) > kMaxSparsity) return Sufficiency::high_sparsity;
    return Sufficiency::ok;
}

Sufficiency sufficiency_check(const TimeSeries& series, const EmbeddingConfig& config) {
    return sufficiency_check(series.values(), config);
}

std::vector<DivergencePair> divergence_pairs(std::span<const double> values, const EmbeddingConfig& config,
                                             Parallelism par) {
    config.validate();
    const Embedding states = delay_embed(values, config.embedding_dim, config.delay);
    if (states.size() <= config.horizon) return {};

    // Only states with a defined future `horizon` steps ahead take part, as
    // references and as neighbors.
    const std::size_t usable = states.size() - config.horizon;
    const NeighborQuery query{config.effective_theiler(), config.distance_floor};
    const auto neighbors = all_nearest_neighbors(states, usable, query, config.search, par);

    std::vector<DivergencePair> pairs;
    for (std::size_t t = 0; t < usable; ++t) {
        if (!neighbors[t]) continue;
        const std::size_t u = *neighbors[t];
        const double d0 = std::sqrt(squared_distance(states.state(t), states.state(u)));
        const double d1 = std::sqrt(
            squared_distance(states.state(t + config.horizon), states.state(u + config.horizon)));
        pairs.push_back({t, u, d0, d1, d1 < config.distance_floor});
    }
    return pairs;
}

LyapunovEstimate largest_lyapunov(std::span<const double> values, const EmbeddingConfig& config,
                                  Parallelism par) {
    const auto pairs = divergence_pairs(values, config, par);
    LyapunovEstimate est;
    est.sufficiency = sufficiency_check(values, config);
    const double horizon = static_cast<double>(config.horizon);
    double sum = 0.0;
    for (const auto& p : pairs) {
        if (p.skipped) {
            ++est.skipped_pairs;
            continue;
        }
        sum += std::log(p.final_distance / p.initial_distance) / horizon;
        ++est.pair_count;
    }
    if (est.pair_count == 0) {
        throw Error(Errc::estimation_impossible,
                    "no admissible state pair (" + std::to_string(est.skipped_pairs) + " skipped)");
    }
    est.lambda = sum / static_cast<double>(est.pair_count);
    return est;
}

LyapunovEstimate largest_lyapunov(const TimeSeries& series, const EmbeddingConfig& config, Parallelism par) {
    return largest_lyapunov(series.values(), config, par);
}

std::size_t minimum_window(const EmbeddingConfig& config) noexcept {
    return (config.embedding_dim - 1) * config.delay + config.horizon + 2;
}

MovingSeries moving_lyapunov(const TimeSeries& series, const WindowPlan& plan, const EmbeddingConfig& config,
                             Parallelism par) {
    config.validate();
    if (plan.window_size < minimum_window(config)) {
        throw Error(Errc::window_too_small, "window of " + std::to_string(plan.window_size) +
                                                " is below the minimum " +
                                                std::to_string(minimum_window(config)));
    }
    const auto windows = iterate_windows(series, plan);
    MovingSeries out;
    out.stamps.reserve(windows.size());
    for (const auto& w : windows) out.stamps.push_back(w.stamp);
    out.values.resize(windows.size());
    parallel_for(windows.size(), par, [&](std::size_t k) {
        try {
            out.values[k] = largest_lyapunov(windows[k].values, config).lambda;
        } catch (const Error& e) {
            if (e.code() != Errc::estimation_impossible) throw;
        }
    });
    return out;
}

}  // namespace fcast::lyapunov
