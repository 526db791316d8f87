#include "hetalign/alignment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "hetalign/error.hpp"
#include "hetalign/parallel.hpp"
#include "records.hpp"

namespace hetalign {

namespace {

constexpr std::array<std::string_view, EdgeClass::kCount> kClassNames{
    "match_hom", "match_het", "mismatch_hom", "mismatch_het", "gap_hom", "gap_het"};

bool within_gap(BoundedDistance d, std::uint32_t delta, bool strict) {
    if (d.is_beyond() || d.hops() < 2) {
        return false;
    }
    return strict ? d.hops() < delta : d.hops() <= delta;
}

// Kind from the two sides' distances; nullopt when no edge is induced.
std::optional<EdgeKind> classify_kind(BoundedDistance d1, BoundedDistance d2, std::uint32_t delta, bool strict) {
    if (d1.hops() == 0 || d2.hops() == 0) {
        return std::nullopt;
    }
    const bool adj1 = d1.hops() == 1;
    const bool adj2 = d2.hops() == 1;
    if (adj1 && adj2) {
        return EdgeKind::Match;
    }
    if (!adj1 && !adj2) {
        return std::nullopt;
    }
    return within_gap(adj1 ? d2 : d1, delta, strict) ? EdgeKind::Gap : EdgeKind::Mismatch;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view EdgeClass::name() const { return kClassNames[index()]; }

std::optional<EdgeClass> EdgeClass::from_name(std::string_view name) {
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (kClassNames[i] == name) {
            return from_index(i);
        }
    }
    return std::nullopt;
}

void WeightSchema::validate(bool allow_unordered) const {
    if (delta < 1) {
        throw Error(ErrorCode::InvalidSchema, "gap threshold must be at least 1");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i];
        if (!(w > 0.0 && w <= 1.0)) {
            throw Error(ErrorCode::InvalidSchema,
                        std::string(kClassNames[i]) + " weight " + format_double(w) + " outside (0, 1]");
        }
        if (!allow_unordered && i > 0 && !(weights[i - 1] > w)) {
            throw Error(ErrorCode::InvalidSchema, std::string(kClassNames[i - 1]) + " must outweigh " +
                                                      std::string(kClassNames[i]));
        }
    }
}

WeightSchema parse_weight_schema(std::istream& in, const WeightSchema& base, bool allow_unordered) {
    WeightSchema schema = base;
    std::array<bool, EdgeClass::kCount> seen{};
    detail::for_each_record(in, [&](std::size_t line, const auto& tok) {
        if (tok.size() != 2) {
            throw Error(ErrorCode::MalformedLine, "expected '<class> <weight>'", line);
        }
        auto cls = EdgeClass::from_name(tok[0]);
        if (!cls) {
            throw Error(ErrorCode::InvalidSchema, "unknown class '" + std::string(tok[0]) + "'", line);
        }
        double w = 0;
        if (!detail::parse_double(tok[1], w)) {
            throw Error(ErrorCode::MalformedLine, "bad weight '" + std::string(tok[1]) + "'", line);
        }
        if (seen[cls->index()]) {
            throw Error(ErrorCode::InvalidSchema, "class '" + std::string(tok[0]) + "' repeated", line);
        }
        seen[cls->index()] = true;
        schema.weights[cls->index()] = w;
    });
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            throw Error(ErrorCode::InvalidSchema, "missing class '" + std::string(kClassNames[i]) + "'");
        }
    }
    schema.validate(allow_unordered);
    return schema;
}

AlignmentGraph::AlignmentGraph(SeedPairList nodes, std::vector<AlignedEdge> edges,
                               std::vector<std::pair<std::string, std::string>> labels)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), labels_(std::move(labels)) {
    const std::size_t n = nodes_.size();
    if (!labels_.empty() && labels_.size() != n) {
        throw Error(ErrorCode::InvalidParameter, "label table size differs from node count");
    }
    std::vector<std::size_t> degree(n + 1, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const AlignedEdge& edge = edges_[e];
        if (!(edge.i < edge.j) || edge.j >= n) {
            throw Error(ErrorCode::InvalidParameter, "edge endpoints must satisfy i < j < node count");
        }
        if (e > 0 && !(std::pair(edges_[e - 1].i, edges_[e - 1].j) < std::pair(edge.i, edge.j))) {
            throw Error(ErrorCode::InvalidParameter, "edges must be sorted by (i, j) without repeats");
        }
        if (!(edge.weight > 0.0 && edge.weight <= 1.0)) {
            throw Error(ErrorCode::InvalidParameter, "edge weight outside (0, 1]");
        }
        ++degree[edge.i + 1];
        ++degree[edge.j + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        degree[i + 1] += degree[i];
    }
    offsets_ = degree;
    incident_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(degree.begin(), degree.end() - 1);
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        incident_[fill[edges_[e].i]++] = e;
        incident_[fill[edges_[e].j]++] = e;
    }
}

double AlignmentGraph::total_weight() const {
    double sum = 0.0;
    for (const auto& e : edges_) {
        sum += e.weight;
    }
    return sum;
}

std::array<std::size_t, EdgeClass::kCount> AlignmentGraph::class_histogram() const {
    std::array<std::size_t, EdgeClass::kCount> hist{};
    for (const auto& e : edges_) {
        ++hist[e.cls.index()];
    }
    return hist;
}

SeedPairList parse_seed_pairs(std::istream& in, const ColoredGraph& g1, const ColoredGraph& g2) {
    SeedPairList seeds;
    std::unordered_set<std::uint64_t> seen;
    detail::for_each_record(in, [&](std::size_t line, const auto& tok) {
        if (tok.size() != 2 && tok.size() != 3) {
            throw Error(ErrorCode::MalformedLine, "expected '<label1> <label2> [similarity]'", line);
        }
        auto u1 = g1.find(std::string(tok[0]));
        if (!u1) {
            throw Error(ErrorCode::UnknownNode, "'" + std::string(tok[0]) + "' not in first graph", line);
        }
        auto u2 = g2.find(std::string(tok[1]));
        if (!u2) {
            throw Error(ErrorCode::UnknownNode, "'" + std::string(tok[1]) + "' not in second graph", line);
        }
        double similarity = 1.0;
        if (tok.size() == 3) {
            if (!detail::parse_double(tok[2], similarity)) {
                throw Error(ErrorCode::MalformedLine, "bad similarity '" + std::string(tok[2]) + "'", line);
            }
            if (!(similarity >= 0.0 && similarity <= 1.0)) {
                throw Error(ErrorCode::SimilarityOutOfRange, std::string(tok[2]), line);
            }
        }
        if (!seen.insert((static_cast<std::uint64_t>(*u1) << 32) | *u2).second) {
            throw Error(ErrorCode::DuplicatePair, "'" + std::string(tok[0]) + "' '" + std::string(tok[1]) + "'",
                        line);
        }
        seeds.push_back({*u1, *u2, similarity});
    });
    if (in.bad()) {
        throw Error(ErrorCode::IoFailure, "reading seed pairs");
    }
    return seeds;
}

SeedPairList identity_seeds(const ColoredGraph& g) {
    SeedPairList seeds(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        seeds[v] = {v, v, 1.0};
    }
    return seeds;
}

void check_color_consistent_seeds(const SeedPairList& seeds, const ColoredGraph& g1, const ColoredGraph& g2) {
    for (const auto& s : seeds) {
        if (g1.color_label(g1.color(s.u1)) != g2.color_label(g2.color(s.u2))) {
            throw Error(ErrorCode::ColorInconsistentSeed, "'" + g1.label(s.u1) + "' (" +
                                                              g1.color_label(g1.color(s.u1)) + ") vs '" +
                                                              g2.label(s.u2) + "' (" +
                                                              g2.color_label(g2.color(s.u2)) + ")");
        }
    }
}

std::optional<EdgeClass> classify_pair(const SeedPair& a, const SeedPair& b, const ColoredGraph& g1,
                                       const ColoredGraph& g2, DistanceCache& cache1, DistanceCache& cache2,
                                       bool strict_gap) {
    if (cache1.delta() != cache2.delta()) {
        throw Error(ErrorCode::InvalidParameter, "distance caches disagree on the gap threshold");
    }
    auto kind = classify_kind(cache1.query(a.u1, b.u1), cache2.query(a.u2, b.u2), cache1.delta(), strict_gap);
    if (!kind) {
        return std::nullopt;
    }
    const std::string& c = g1.color_label(g1.color(a.u1));
    const bool homogeneous = c == g1.color_label(g1.color(b.u1)) && c == g2.color_label(g2.color(a.u2)) &&
                             c == g2.color_label(g2.color(b.u2));
    return EdgeClass{*kind, homogeneous ? Flavor::Homogeneous : Flavor::Heterogeneous};
}

double edge_weight(EdgeClass cls, const SeedPair& a, const SeedPair& b, const WeightSchema& schema) {
    const double w = schema.weight(cls);
    if (!schema.similarity_blend) {
        return w;
    }
    return w * (a.similarity + b.similarity) / 2.0;
}

AlignmentBuilder::AlignmentBuilder(const ColoredGraph& g1, const ColoredGraph& g2, SeedPairList seeds,
                                   WeightSchema schema)
    : g1_(&g1), g2_(&g2), seeds_(std::move(seeds)), schema_(schema) {
    schema_.validate(true);
    if (seeds_.empty()) {
        throw Error(ErrorCode::EmptySeedList, "at least one seed pair is required");
    }
    if (seeds_.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::InvalidParameter, "too many seed pairs");
    }
    std::unordered_set<std::uint64_t> seen;
    for (const auto& s : seeds_) {
        if (s.u1 >= g1.node_count() || s.u2 >= g2.node_count()) {
            throw Error(ErrorCode::InvalidNode, "seed references a node outside its graph");
        }
        const bool in_range = schema_.similarity_blend ? (s.similarity > 0.0 && s.similarity <= 1.0)
                                                       : (s.similarity >= 0.0 && s.similarity <= 1.0);
        if (!in_range) {
            throw Error(ErrorCode::SimilarityOutOfRange,
                        "similarity " + format_double(s.similarity) +
                            (schema_.similarity_blend ? " outside (0, 1] with blending" : " outside [0, 1]"));
        }
        if (!seen.insert((static_cast<std::uint64_t>(s.u1) << 32) | s.u2).second) {
            throw Error(ErrorCode::DuplicatePair, "'" + g1.label(s.u1) + "' '" + g2.label(s.u2) + "'");
        }
    }

    // Shared color keys across both graphs, matched by label.
    std::unordered_map<std::string, std::uint32_t> color_key;
    auto key_of = [&](const std::string& label) {
        return color_key.emplace(label, static_cast<std::uint32_t>(color_key.size())).first->second;
    };
    color1_.reserve(seeds_.size());
    color2_.reserve(seeds_.size());
    for (const auto& s : seeds_) {
        color1_.push_back(key_of(g1.color_label(g1.color(s.u1))));
        color2_.push_back(key_of(g2.color_label(g2.color(s.u2))));
    }

    std::vector<NodeId> sources1;
    std::vector<NodeId> sources2;
    sources1.reserve(seeds_.size());
    sources2.reserve(seeds_.size());
    for (const auto& s : seeds_) {
        sources1.push_back(s.u1);
        sources2.push_back(s.u2);
    }
    auto dedupe = [](std::vector<NodeId>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    cache1_ = std::make_unique<DistanceCache>(g1, schema_.delta);
    if (g1_ == g2_) {
        sources1.insert(sources1.end(), sources2.begin(), sources2.end());
        dedupe(sources1);
        cache1_->warm(sources1);
    } else {
        dedupe(sources1);
        dedupe(sources2);
        cache1_->warm(sources1);
        cache2_ = std::make_unique<DistanceCache>(g2, schema_.delta);
        cache2_->warm(sources2);
    }
}

AlignmentBuilder::~AlignmentBuilder() = default;
AlignmentBuilder::AlignmentBuilder(AlignmentBuilder&&) noexcept = default;
AlignmentBuilder& AlignmentBuilder::operator=(AlignmentBuilder&&) noexcept = default;

AlignmentGraph AlignmentBuilder::build(std::size_t workers) const {
    if (workers < 1) {
        throw Error(ErrorCode::InvalidParameter, "workers must be at least 1");
    }
    const std::size_t n = seeds_.size();
    const DistanceCache& cache1 = *cache1_;
    const DistanceCache& cache2 = cache2_ ? *cache2_ : *cache1_;

    // Contiguous row ranges with roughly equal pair counts. More blocks than
    // workers keeps the dynamic scheduler balanced; the block layout never
    // changes the output because each block emits its rows in order.
    const std::size_t num_blocks = std::min<std::size_t>(n, workers == 1 ? 1 : workers * 8);
    std::vector<std::size_t> row_begin{0};
    {
        const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
        double acc = 0.0;
        std::size_t b = 1;
        for (std::size_t i = 0; i < n && b < num_blocks; ++i) {
            acc += static_cast<double>(n - 1 - i);
            if (acc >= total * static_cast<double>(b) / static_cast<double>(num_blocks)) {
                row_begin.push_back(i + 1);
                ++b;
            }
        }
        row_begin.push_back(n);
    }
    const std::size_t blocks = row_begin.size() - 1;
    std::vector<std::vector<AlignedEdge>> buffers(blocks);

    const std::uint32_t delta = schema_.delta;
    const bool strict = schema_.strict_gap;
    parallel_blocks(workers, blocks, [&](std::size_t block) {
        std::vector<std::uint8_t> near1(g1_->node_count(), 0);
        std::vector<std::uint8_t> near2(g2_->node_count(), 0);
        auto& out = buffers[block];
        for (std::size_t i = row_begin[block]; i < row_begin[block + 1]; ++i) {
            const SeedPair& a = seeds_[i];
            for (NodeId v : g1_->neighbors(a.u1)) near1[v] = 1;
            for (NodeId v : g2_->neighbors(a.u2)) near2[v] = 1;
            for (std::size_t j = i + 1; j < n; ++j) {
                const SeedPair& b = seeds_[j];
                if (a.u1 == b.u1 || a.u2 == b.u2) {
                    continue;
                }
                const bool adj1 = near1[b.u1] != 0;
                const bool adj2 = near2[b.u2] != 0;
                if (!adj1 && !adj2) {
                    continue;
                }
                EdgeKind kind = EdgeKind::Match;
                if (!(adj1 && adj2)) {
                    const BoundedDistance other = adj1 ? cache2.lookup(a.u2, b.u2) : cache1.lookup(a.u1, b.u1);
                    kind = within_gap(other, delta, strict) ? EdgeKind::Gap : EdgeKind::Mismatch;
                }
                const bool homogeneous =
                    color1_[i] == color2_[i] && color1_[i] == color1_[j] && color1_[i] == color2_[j];
                const EdgeClass cls{kind, homogeneous ? Flavor::Homogeneous : Flavor::Heterogeneous};
                out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                               edge_weight(cls, a, b, schema_), cls});
            }
            for (NodeId v : g1_->neighbors(a.u1)) near1[v] = 0;
            for (NodeId v : g2_->neighbors(a.u2)) near2[v] = 0;
        }
    });

    std::size_t total = 0;
    for (const auto& buf : buffers) {
        total += buf.size();
    }
    std::vector<AlignedEdge> edges;
    edges.reserve(total);
    for (auto& buf : buffers) {
        edges.insert(edges.end(), buf.begin(), buf.end());
        std::vector<AlignedEdge>().swap(buf);
    }

    std::vector<std::pair<std::string, std::string>> labels;
    labels.reserve(n);
    for (const auto& s : seeds_) {
        labels.emplace_back(g1_->label(s.u1), g2_->label(s.u2));
    }
    return AlignmentGraph(seeds_, std::move(edges), std::move(labels));
}

AlignmentGraph build_alignment_graph(const ColoredGraph& g1, const ColoredGraph& g2, const SeedPairList& seeds,
                                     const WeightSchema& schema, std::size_t workers) {
    if (workers < 1) {
        throw Error(ErrorCode::InvalidParameter, "workers must be at least 1");
    }
    return AlignmentBuilder(g1, g2, seeds, schema).build(workers);
}

std::uint64_t content_hash(const AlignmentGraph& ag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int k = 0; k < 8; ++k) {
            h ^= (word >> (8 * k)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(ag.node_count());
    for (const auto& s : ag.nodes()) {
        mix(s.u1);
        mix(s.u2);
        mix(std::bit_cast<std::uint64_t>(s.similarity));
    }
    mix(ag.edge_count());
    for (const auto& e : ag.edges()) {
        mix((static_cast<std::uint64_t>(e.i) << 32) | e.j);
        mix(std::bit_cast<std::uint64_t>(e.weight));
        mix(e.cls.index());
    }
    return h;
}

void write_alignment_graph(const AlignmentGraph& ag, std::ostream& out) {
    out << "# alignment graph: node table then weighted edges\n";
    out << "nodes " << ag.node_count() << '\n';
    const auto& labels = ag.labels();
    for (std::size_t i = 0; i < ag.node_count(); ++i) {
        const SeedPair& s = ag.nodes()[i];
        out << i << '\t' << s.u1 << '\t' << s.u2 << '\t';
        if (labels.empty()) {
            out << s.u1 << '\t' << s.u2;
        } else {
            out << labels[i].first << '\t' << labels[i].second;
        }
        out << '\t' << format_double(s.similarity) << '\n';
    }
    out << "edges " << ag.edge_count() << '\n';
    for (const auto& e : ag.edges()) {
        out << e.i << '\t' << e.j << '\t' << format_double(e.weight) << '\t' << e.cls.name() << '\n';
    }
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoFailure, "writing alignment graph");
    }
}

AlignmentGraph read_alignment_graph(std::istream& in) {
    enum class Section { Start, Nodes, Edges } section = Section::Start;
    unsigned long long expected_nodes = 0;
    unsigned long long expected_edges = 0;
    SeedPairList nodes;
    std::vector<std::pair<std::string, std::string>> labels;
    std::vector<AlignedEdge> edges;
    auto number = [](std::string_view tok, std::size_t line) {
        unsigned long long v = 0;
        if (!detail::parse_unsigned(tok, v)) {
            throw Error(ErrorCode::MalformedLine, "expected a non-negative integer, got '" + std::string(tok) + "'",
                        line);
        }
        return v;
    };

    detail::for_each_record(in, [&](std::size_t line, const auto& tok) {
        if (tok.size() == 2 && tok[0] == "nodes" && section == Section::Start) {
            expected_nodes = number(tok[1], line);
            section = Section::Nodes;
            return;
        }
        if (tok.size() == 2 && tok[0] == "edges" && section == Section::Nodes) {
            if (nodes.size() != expected_nodes) {
                throw Error(ErrorCode::MalformedLine, "node table has " + std::to_string(nodes.size()) +
                                                          " rows, header says " + std::to_string(expected_nodes),
                            line);
            }
            expected_edges = number(tok[1], line);
            section = Section::Edges;
            return;
        }
        if (section == Section::Nodes) {
            if (tok.size() != 6 || number(tok[0], line) != nodes.size()) {
                throw Error(ErrorCode::MalformedLine, "expected '<i> <id1> <id2> <label1> <label2> <similarity>'",
                            line);
            }
            double sim = 0;
            if (!detail::parse_double(tok[5], sim)) {
                throw Error(ErrorCode::MalformedLine, "bad similarity", line);
            }
            nodes.push_back({static_cast<NodeId>(number(tok[1], line)), static_cast<NodeId>(number(tok[2], line)),
                             sim});
            labels.emplace_back(std::string(tok[3]), std::string(tok[4]));
            return;
        }
        if (section == Section::Edges) {
            if (tok.size() != 4) {
                throw Error(ErrorCode::MalformedLine, "expected '<i> <j> <weight> <class>'", line);
            }
            double w = 0;
            if (!detail::parse_double(tok[2], w)) {
                throw Error(ErrorCode::MalformedLine, "bad weight", line);
            }
            auto cls = EdgeClass::from_name(tok[3]);
            if (!cls) {
                throw Error(ErrorCode::MalformedLine, "unknown class '" + std::string(tok[3]) + "'", line);
            }
            const auto i = number(tok[0], line);
            const auto j = number(tok[1], line);
            if (i >= j || j >= nodes.size()) {
                throw Error(ErrorCode::MalformedLine, "edge endpoints must satisfy i < j < node count", line);
            }
            if (!edges.empty() && std::pair<unsigned long long, unsigned long long>(edges.back().i, edges.back().j) >=
                                      std::pair(i, j)) {
                throw Error(ErrorCode::MalformedLine, "edges out of order or repeated", line);
            }
            if (!(w > 0.0 && w <= 1.0)) {
                throw Error(ErrorCode::MalformedLine, "edge weight outside (0, 1]", line);
            }
            edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), w, *cls});
            return;
        }
        throw Error(ErrorCode::MalformedLine, "expected 'nodes <N>' header", line);
    });
    if (in.bad()) {
        throw Error(ErrorCode::IoFailure, "reading alignment graph");
    }
    if (section != Section::Edges) {
        throw Error(ErrorCode::MalformedLine, "missing 'nodes' or 'edges' section");
    }
    if (edges.size() != expected_edges) {
        throw Error(ErrorCode::MalformedLine, "edge section has " + std::to_string(edges.size()) +
                                                  " rows, header says " + std::to_string(expected_edges));
    }
    return AlignmentGraph(std::move(nodes), std::move(edges), std::move(labels));
}

}  // namespace hetalign
