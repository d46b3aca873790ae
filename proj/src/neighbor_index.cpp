#include "forecastability/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fcast::lyapunov {
namespace {

bool admissible(std::size_t i, std::size_t j, double d2, const NeighborQuery& query) {
    const std::size_t gap = i > j ? i - j : j - i;
    return gap > query.theiler_window && std::sqrt(d2) >= query.distance_floor;
}

}  // namespace

KdTree::KdTree(const Embedding& states, std::size_t count, std::size_t leaf_size)
    : states_(states), leaf_size_(std::max<std::size_t>(leaf_size, 1)), order_(count) {
    for (std::size_t i = 0; i < count; ++i) order_[i] = i;
    nodes_.reserve(2 * (count / leaf_size_ + 1));
    if (count > 0) build(0, count);
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({begin, end, 0, 0.0, 0, 0});
    if (end - begin <= leaf_size_) return id;

    const std::size_t dim = states_.dim();
    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < dim; ++d) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t k = begin; k < end; ++k) {
            const double v = states_.state(order_[k])[d];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            best_dim = d;
        }
    }
    if (best_spread <= 0.0) return id;  // all points coincide: keep as a leaf

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                         return states_.state(a)[best_dim] < states_.state(b)[best_dim];
                     });
    const double split = states_.state(order_[mid])[best_dim];

    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[id].split_dim = best_dim;
    nodes_[id].split_value = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void KdTree::search(std::size_t node_id, std::size_t query_index, const NeighborQuery& query,
                    Best& best) const {
    const Node& node = nodes_[node_id];
    const auto q = states_.state(query_index);
    if (node.left == 0) {
        for (std::size_t k = node.begin; k < node.end; ++k) {
            const std::size_t j = order_[k];
            const double d2 = squared_distance(q, states_.state(j));
            if (!admissible(query_index, j, d2, query)) continue;
            if (d2 < best.d2 || (d2 == best.d2 && j < best.index)) best = {d2, j};
        }
        return;
    }
    const double diff = q[node.split_dim] - node.split_value;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    search(near, query_index, query, best);
    // Keep equal-distance subtrees: they may hold a tie with a smaller index.
    if (diff * diff <= best.d2) search(far, query_index, query, best);
}

std::optional<std::size_t> KdTree::nearest(std::size_t index, const NeighborQuery& query) const {
    if (nodes_.empty()) return std::nullopt;
    Best best{std::numeric_limits<double>::infinity(), std::numeric_limits<std::size_t>::max()};
    search(0, index, query, best);
    if (best.index == std::numeric_limits<std::size_t>::max()) return std::nullopt;
    return best.index;
}

}  // namespace fcast::lyapunov
