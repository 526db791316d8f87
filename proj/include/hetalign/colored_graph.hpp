#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hetalign {

using NodeId = std::uint32_t;
using ColorId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph with one color per node.
///
/// Nodes are dense ids in [0, n) with a bijective string label table. Colors
/// are dense ids into a per-graph color-label table. Adjacency is stored in
/// CSR form with each neighbor list sorted ascending. Instances are immutable
/// once built and may be shared across threads.
class ColoredGraph {
public:
    ColoredGraph() = default;

    /// Builds and validates a graph. Throws Error on self-loops, duplicate
    /// edges, out-of-range ids or colors, and duplicate labels.
    static ColoredGraph from_parts(std::vector<std::string> labels,
                                   std::vector<std::string> color_labels,
                                   std::vector<ColorId> colors,
                                   std::span<const Edge> edges);

    std::size_t node_count() const noexcept { return colors_.size(); }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    std::size_t color_count() const noexcept { return color_labels_.size(); }

    std::span<const NodeId> neighbors(NodeId u) const {
        return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
    }
    std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
    bool adjacent(NodeId u, NodeId v) const;

    ColorId color(NodeId u) const { return colors_[u]; }
    std::span<const ColorId> colors() const noexcept { return colors_; }
    const std::string& color_label(ColorId c) const { return color_labels_[c]; }
    const std::vector<std::string>& color_labels() const noexcept { return color_labels_; }

    const std::string& label(NodeId u) const { return labels_[u]; }
    std::optional<NodeId> find(const std::string& label) const;

    /// All edges as (u, v) with u < v, sorted lexicographically.
    std::vector<Edge> edges() const;

    /// Full scan of the structural invariants (symmetry, no loops, no
    /// duplicates, sorted lists, color coverage). Throws Error on violation.
    void validate() const;

    /// Label-level equality: same node labels in the same order, same edges,
    /// same color label per node. Color id numbering is not compared.
    friend bool operator==(const ColoredGraph& a, const ColoredGraph& b);

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<ColorId> colors_;
    std::vector<std::string> labels_;
    std::vector<std::string> color_labels_;
    std::unordered_map<std::string, NodeId> index_;
};

struct GraphSpec {
    std::uint64_t nodes = 0;
    std::uint64_t edges = 0;
    std::uint32_t num_colors = 1;
    std::uint64_t rng_seed = 0;
};

/// Largest edge count of a simple undirected graph on `nodes` nodes.
std::uint64_t max_edges(std::uint64_t nodes);

/// Reads an edge list and a node-color table. Node ids follow first
/// appearance in the color stream; color ids follow first appearance of
/// each color label.
ColoredGraph parse_colored_graph(std::istream& edge_stream, std::istream& color_stream);

void write_colored_graph(const ColoredGraph& g, std::ostream& edge_sink, std::ostream& color_sink);

/// Erdos-Renyi G(n, m) graph: exactly `spec.edges` distinct edges drawn
/// uniformly, each node colored uniformly over `spec.num_colors`. The
/// output depends only on `spec`.
ColoredGraph generate_er_colored(const GraphSpec& spec);

}  // namespace hetalign
