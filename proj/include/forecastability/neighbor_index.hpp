#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "forecastability/lyapunov.hpp"

namespace fcast::lyapunov {

/// Static kd-tree over the first `count` states of an embedding. Queries
/// apply the same admissibility and ranking rule as the exhaustive scan, so
/// answers match it exactly.
class KdTree {
public:
    KdTree(const Embedding& states, std::size_t count, std::size_t leaf_size = 8);

    [[nodiscard]] std::optional<std::size_t> nearest(std::size_t index, const NeighborQuery& query) const;

private:
    struct Node {
        std::size_t begin;
        std::size_t end;
        std::size_t split_dim;
        double split_value;
        std::size_t left;   // 0 => leaf
        std::size_t right;
    };

    struct Best {
        double d2;
        std::size_t index;
    };

    std::size_t build(std::size_t begin, std::size_t end);
    void search(std::size_t node, std::size_t query_index, const NeighborQuery& query, Best& best) const;

    const Embedding& states_;
    std::size_t leaf_size_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace fcast::lyapunov
