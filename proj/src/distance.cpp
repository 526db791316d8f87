#include "hetalign/distance.hpp"

#include <algorithm>
#include <string>

#include "hetalign/error.hpp"

namespace hetalign {

DistanceCache::DistanceCache(const ColoredGraph& graph, std::uint32_t delta)
    : graph_(&graph), delta_(delta), tables_(graph.node_count()), computed_(graph.node_count(), 0) {
    if (delta < 1) {
        throw Error(ErrorCode::InvalidParameter, "gap threshold must be at least 1");
    }
}

void DistanceCache::check_node(NodeId u) const {
    if (u >= graph_->node_count()) {
        throw Error(ErrorCode::InvalidNode, "node id " + std::to_string(u) + " out of range");
    }
}

void DistanceCache::compute(NodeId source) {
    const std::size_t n = graph_->node_count();
    if (depth_.size() != n) {
        depth_.assign(n, BoundedDistance::kBeyond);
    }
    Table table;
    std::vector<NodeId> visited{source};
    depth_[source] = 0;
    frontier_.assign(1, source);
    std::vector<NodeId> next;
    for (std::uint32_t d = 1; d <= delta_ && !frontier_.empty(); ++d) {
        next.clear();
        for (NodeId u : frontier_) {
            for (NodeId v : graph_->neighbors(u)) {
                if (depth_[v] == BoundedDistance::kBeyond) {
                    depth_[v] = d;
                    next.push_back(v);
                    visited.push_back(v);
                }
            }
        }
        if (d >= 2) {
            std::size_t begin = table.nodes.size();
            for (NodeId v : next) {
                if (v > source) {
                    table.nodes.push_back(v);
                }
            }
            std::sort(table.nodes.begin() + static_cast<std::ptrdiff_t>(begin), table.nodes.end());
            table.level_end.push_back(static_cast<std::uint32_t>(table.nodes.size()));
        }
        frontier_.swap(next);
    }
    for (NodeId v : visited) {
        depth_[v] = BoundedDistance::kBeyond;
    }
    table.nodes.shrink_to_fit();
    tables_[source] = std::move(table);
    computed_[source] = 1;
}

BoundedDistance DistanceCache::answer(NodeId u, NodeId v) const {
    if (u == v) {
        return BoundedDistance(0);
    }
    if (graph_->adjacent(u, v)) {
        return BoundedDistance(1);
    }
    const Table& t = tables_[std::min(u, v)];
    const NodeId target = std::max(u, v);
    std::uint32_t begin = 0;
    for (std::size_t k = 0; k < t.level_end.size(); ++k) {
        auto first = t.nodes.begin() + begin;
        auto last = t.nodes.begin() + t.level_end[k];
        if (std::binary_search(first, last, target)) {
            return BoundedDistance(static_cast<std::uint32_t>(k + 2));
        }
        begin = t.level_end[k];
    }
    return BoundedDistance::beyond();
}

BoundedDistance DistanceCache::query(NodeId u, NodeId v) {
    check_node(u);
    check_node(v);
    const NodeId source = std::min(u, v);
    if (u != v && delta_ >= 2 && !computed_[source]) {
        compute(source);
    }
    return answer(u, v);
}

BoundedDistance DistanceCache::lookup(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const NodeId source = std::min(u, v);
    if (u != v && delta_ >= 2 && !computed_[source] && !graph_->adjacent(u, v)) {
        throw Error(ErrorCode::UnwarmedSource, "no table for node " + std::to_string(source));
    }
    return answer(u, v);
}

void DistanceCache::warm(std::span<const NodeId> nodes) {
    if (delta_ < 2) {
        return;
    }
    // Pairs drawn from `nodes` resolve to the smaller endpoint, so the
    // largest id never serves as a source.
    NodeId largest = 0;
    for (NodeId u : nodes) {
        check_node(u);
        largest = std::max(largest, u);
    }
    for (NodeId u : nodes) {
        if (u != largest && !computed_[u]) {
            compute(u);
        }
    }
}

std::size_t DistanceCache::warmed_count() const noexcept {
    return static_cast<std::size_t>(std::count(computed_.begin(), computed_.end(), std::uint8_t{1}));
}

}  // namespace hetalign
