#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetalign/colored_graph.hpp"
#include "hetalign/distance.hpp"

namespace hetalign {

enum class EdgeKind : std::uint8_t { Match = 0, Mismatch = 1, Gap = 2 };
enum class Flavor : std::uint8_t { Homogeneous = 0, Heterogeneous = 1 };

/// One of the six alignment-edge classes: kind comes from the adjacency and
/// distance pattern, flavor from whether all four endpoints share a color.
struct EdgeClass {
    EdgeKind kind = EdgeKind::Match;
    Flavor flavor = Flavor::Homogeneous;

    static constexpr std::size_t kCount = 6;

    constexpr std::size_t index() const {
        return static_cast<std::size_t>(kind) * 2 + static_cast<std::size_t>(flavor);
    }
    static constexpr EdgeClass from_index(std::size_t i) {
        return {static_cast<EdgeKind>(i / 2), static_cast<Flavor>(i % 2)};
    }

    /// match_hom, match_het, mismatch_hom, mismatch_het, gap_hom, gap_het
    std::string_view name() const;
    static std::optional<EdgeClass> from_name(std::string_view name);

    friend constexpr bool operator==(EdgeClass, EdgeClass) = default;
};

struct SeedPair {
    NodeId u1 = 0;
    NodeId u2 = 0;
    double similarity = 1.0;

    friend bool operator==(const SeedPair&, const SeedPair&) = default;
};

using SeedPairList = std::vector<SeedPair>;

struct WeightSchema {
    /// Indexed by EdgeClass::index().
    std::array<double, EdgeClass::kCount> weights{1.0, 0.9, 0.5, 0.4, 0.2, 0.1};
    std::uint32_t delta = 2;
    bool similarity_blend = false;
    /// Gaps require d < delta instead of d <= delta.
    bool strict_gap = false;

    double weight(EdgeClass cls) const { return weights[cls.index()]; }

    /// Checks every weight lies in (0, 1], delta >= 1 and, unless
    /// `allow_unordered`, that the weights strictly decrease in class order.
    void validate(bool allow_unordered = false) const;
};

/// Reads `<class> <weight>` lines naming each of the six classes exactly
/// once; delta and flags are taken from `base`.
WeightSchema parse_weight_schema(std::istream& in, const WeightSchema& base = {}, bool allow_unordered = false);

struct AlignedEdge {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    double weight = 0.0;
    EdgeClass cls;

    friend bool operator==(const AlignedEdge&, const AlignedEdge&) = default;
};

/// Weighted graph over seed pairs. Edges are stored as a flat list sorted by
/// (i, j) with i < j, plus a CSR index from node to incident edge ids.
class AlignmentGraph {
public:
    AlignmentGraph() = default;
    /// Validates edge ordering, range and weights. `labels` may be empty;
    /// otherwise it must hold one (label1, label2) entry per node.
    AlignmentGraph(SeedPairList nodes, std::vector<AlignedEdge> edges,
                   std::vector<std::pair<std::string, std::string>> labels = {});

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const SeedPairList& nodes() const noexcept { return nodes_; }
    const std::vector<AlignedEdge>& edges() const noexcept { return edges_; }
    const std::vector<std::pair<std::string, std::string>>& labels() const noexcept { return labels_; }

    /// Ids of the edges incident to node `i`.
    std::span<const std::uint32_t> incident(std::uint32_t i) const {
        return {incident_.data() + offsets_[i], incident_.data() + offsets_[i + 1]};
    }

    double total_weight() const;
    std::array<std::size_t, EdgeClass::kCount> class_histogram() const;

    /// Compares nodes and edges; labels are metadata and ignored.
    friend bool operator==(const AlignmentGraph& a, const AlignmentGraph& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    SeedPairList nodes_;
    std::vector<AlignedEdge> edges_;
    std::vector<std::pair<std::string, std::string>> labels_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> incident_;
};

/// Lines `<label1> <label2> [similarity]`; similarity defaults to 1.0.
SeedPairList parse_seed_pairs(std::istream& in, const ColoredGraph& g1, const ColoredGraph& g2);

/// (v, v) for every node, used for self-alignment.
SeedPairList identity_seeds(const ColoredGraph& g);

/// Throws ColorInconsistentSeed for the first seed whose two nodes carry
/// different color labels.
void check_color_consistent_seeds(const SeedPairList& seeds, const ColoredGraph& g1, const ColoredGraph& g2);

/// Classifies the alignment edge between seeds `a` and `b`, or returns
/// nullopt when no edge is induced. Both caches must share one delta.
std::optional<EdgeClass> classify_pair(const SeedPair& a, const SeedPair& b, const ColoredGraph& g1,
                                       const ColoredGraph& g2, DistanceCache& cache1, DistanceCache& cache2,
                                       bool strict_gap = false);

double edge_weight(EdgeClass cls, const SeedPair& a, const SeedPair& b, const WeightSchema& schema);

/// Two-phase construction. The constructor validates the inputs and warms
/// the distance caches; `build` runs only the pair classification. The
/// builder keeps references to both graphs, which must outlive it.
class AlignmentBuilder {
public:
    AlignmentBuilder(const ColoredGraph& g1, const ColoredGraph& g2, SeedPairList seeds, WeightSchema schema);
    ~AlignmentBuilder();
    AlignmentBuilder(AlignmentBuilder&&) noexcept;
    AlignmentBuilder& operator=(AlignmentBuilder&&) noexcept;

    /// Output is identical for every `workers` value.
    AlignmentGraph build(std::size_t workers) const;

    const SeedPairList& seeds() const noexcept { return seeds_; }
    const WeightSchema& schema() const noexcept { return schema_; }

private:
    const ColoredGraph* g1_;
    const ColoredGraph* g2_;
    SeedPairList seeds_;
    WeightSchema schema_;
    std::vector<std::uint32_t> color1_;  // shared color key of seeds_[i].u1
    std::vector<std::uint32_t> color2_;
    std::unique_ptr<DistanceCache> cache1_;
    std::unique_ptr<DistanceCache> cache2_;  // null when g1 and g2 are the same object
};

AlignmentGraph build_alignment_graph(const ColoredGraph& g1, const ColoredGraph& g2, const SeedPairList& seeds,
                                     const WeightSchema& schema, std::size_t workers);

/// FNV-1a over node pairs, similarities and edges, with doubles hashed by
/// bit pattern.
std::uint64_t content_hash(const AlignmentGraph& ag);

/// Text form: a `nodes <N>` section of `<i> <label1> <label2> <similarity>`
/// lines, then an `edges <M>` section of `<i> <j> <weight> <class>` lines.
void write_alignment_graph(const AlignmentGraph& ag, std::ostream& out);
AlignmentGraph read_alignment_graph(std::istream& in);

}  // namespace hetalign
