#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hetalign/colored_graph.hpp"

namespace hetalign {

/// Hop distance capped at the gap threshold. Anything farther, including
/// disconnected pairs, collapses to `beyond()`.
class BoundedDistance {
public:
    static constexpr std::uint32_t kBeyond = std::numeric_limits<std::uint32_t>::max();

    constexpr BoundedDistance() = default;
    constexpr explicit BoundedDistance(std::uint32_t hops) : hops_(hops) {}
    static constexpr BoundedDistance beyond() { return BoundedDistance(kBeyond); }

    constexpr bool is_beyond() const { return hops_ == kBeyond; }
    constexpr std::uint32_t hops() const { return hops_; }

    friend constexpr bool operator==(BoundedDistance, BoundedDistance) = default;

private:
    std::uint32_t hops_ = kBeyond;
};

/// Memoized breadth-first distances truncated at depth `delta`.
///
/// A query (u, v) is answered from the table of min(u, v); each table keeps
/// only nodes with a larger id than its source, split into one sorted run per
/// depth in [2, delta]. Depth 1 comes straight from the graph's adjacency.
///
/// `query` fills tables on demand and is single-threaded. After `warm`, the
/// const `lookup` is safe for concurrent use and throws UnwarmedSource for
/// sources that were never computed.
class DistanceCache {
public:
    DistanceCache(const ColoredGraph& graph, std::uint32_t delta);

    const ColoredGraph& graph() const noexcept { return *graph_; }
    std::uint32_t delta() const noexcept { return delta_; }

    BoundedDistance query(NodeId u, NodeId v);
    BoundedDistance lookup(NodeId u, NodeId v) const;

    /// Precomputes tables so that every pair drawn from `nodes` can be
    /// answered by `lookup`.
    void warm(std::span<const NodeId> nodes);

    bool is_warm(NodeId source) const { return computed_[source] != 0; }
    std::size_t warmed_count() const noexcept;

private:
    struct Table {
        std::vector<NodeId> nodes;
        std::vector<std::uint32_t> level_end;  // level_end[k]: end of depth k + 2
    };

    void check_node(NodeId u) const;
    void compute(NodeId source);
    BoundedDistance answer(NodeId u, NodeId v) const;

    const ColoredGraph* graph_;
    std::uint32_t delta_;
    std::vector<Table> tables_;
    std::vector<std::uint8_t> computed_;
    // BFS scratch, reused between computes.
    std::vector<std::uint32_t> depth_;
    std::vector<NodeId> frontier_;
};

/// Free-function form of `DistanceCache::query`.
inline BoundedDistance bounded_distance(DistanceCache& cache, NodeId u, NodeId v) {
    return cache.query(u, v);
}

}  // namespace hetalign
