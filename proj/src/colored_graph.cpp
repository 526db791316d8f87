#include "hetalign/colored_graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_set>

#include "hetalign/error.hpp"
#include "records.hpp"

namespace hetalign {

namespace detail {

bool parse_double(std::string_view token, double& out) {
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_unsigned(std::string_view token, unsigned long long& out) {
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace detail

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v) {
        std::swap(u, v);
    }
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

// Unbiased draw in [0, bound) from a 64-bit engine. std::uniform_int_distribution
// is implementation-defined, which would break cross-platform reproducibility.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return x % bound;
}

}  // namespace

ColoredGraph ColoredGraph::from_parts(std::vector<std::string> labels,
                                      std::vector<std::string> color_labels,
                                      std::vector<ColorId> colors,
                                      std::span<const Edge> edges) {
    const std::size_t n = labels.size();
    if (colors.size() != n) {
        throw Error(ErrorCode::InvalidParameter, "color vector length differs from node count");
    }
    ColoredGraph g;
    g.index_.reserve(n);
    for (NodeId u = 0; u < n; ++u) {
        if (colors[u] >= color_labels.size()) {
            throw Error(ErrorCode::InvalidParameter, "color id out of range for node '" + labels[u] + "'");
        }
        if (!g.index_.emplace(labels[u], u).second) {
            throw Error(ErrorCode::DuplicateColorAssignment, "label '" + labels[u] + "' appears twice");
        }
    }

    std::vector<std::size_t> degree(n + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw Error(ErrorCode::InvalidNode, "edge endpoint out of range");
        }
        if (u == v) {
            throw Error(ErrorCode::SelfLoop, "'" + labels[u] + "'");
        }
        ++degree[u + 1];
        ++degree[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        degree[i + 1] += degree[i];
    }
    g.offsets_ = degree;
    g.targets_.resize(2 * edges.size());
    std::vector<std::size_t> fill(degree.begin(), degree.end() - 1);
    for (const auto& [u, v] : edges) {
        g.targets_[fill[u]++] = v;
        g.targets_[fill[v]++] = u;
    }
    for (NodeId u = 0; u < n; ++u) {
        auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]);
        auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]);
        std::sort(first, last);
        auto dup = std::adjacent_find(first, last);
        if (dup != last) {
            throw Error(ErrorCode::DuplicateEdge, "'" + labels[u] + "' - '" + labels[*dup] + "'");
        }
    }
    g.colors_ = std::move(colors);
    g.labels_ = std::move(labels);
    g.color_labels_ = std::move(color_labels);
    return g;
}

bool ColoredGraph::adjacent(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeId> ColoredGraph::find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<Edge> ColoredGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

void ColoredGraph::validate() const {
    const std::size_t n = node_count();
    if (labels_.size() != n || offsets_.size() != n + 1 || index_.size() != n) {
        throw Error(ErrorCode::InvalidParameter, "inconsistent table sizes");
    }
    for (NodeId u = 0; u < n; ++u) {
        if (colors_[u] >= color_labels_.size()) {
            throw Error(ErrorCode::InvalidParameter, "color out of range at node " + labels_[u]);
        }
        auto nb = neighbors(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (nb[i] == u) {
                throw Error(ErrorCode::SelfLoop, labels_[u]);
            }
            if (i > 0 && nb[i - 1] >= nb[i]) {
                throw Error(ErrorCode::DuplicateEdge, "unsorted or repeated neighbor at " + labels_[u]);
            }
            if (!adjacent(nb[i], u)) {
                throw Error(ErrorCode::InvalidParameter, "asymmetric adjacency at " + labels_[u]);
            }
        }
    }
}

bool operator==(const ColoredGraph& a, const ColoredGraph& b) {
    if (a.labels_ != b.labels_ || a.offsets_ != b.offsets_ || a.targets_ != b.targets_) {
        return false;
    }
    for (NodeId u = 0; u < a.node_count(); ++u) {
        if (a.color_label(a.color(u)) != b.color_label(b.color(u))) {
            return false;
        }
    }
    return true;
}

std::uint64_t max_edges(std::uint64_t nodes) {
    return nodes < 2 ? 0 : nodes * (nodes - 1) / 2;
}

ColoredGraph parse_colored_graph(std::istream& edge_stream, std::istream& color_stream) {
    std::vector<std::string> labels;
    std::vector<std::string> color_labels;
    std::vector<ColorId> colors;
    std::unordered_map<std::string, NodeId> node_index;
    std::unordered_map<std::string, ColorId> color_index;

    detail::for_each_record(color_stream, [&](std::size_t line, const auto& tok) {
        if (tok.size() != 2) {
            throw Error(ErrorCode::MalformedLine, "expected '<label> <color>'", line, "colors");
        }
        std::string label(tok[0]);
        auto [it, fresh] = node_index.emplace(label, static_cast<NodeId>(labels.size()));
        if (!fresh) {
            throw Error(ErrorCode::DuplicateColorAssignment, "'" + label + "'", line, "colors");
        }
        std::string color(tok[1]);
        auto [cit, new_color] = color_index.emplace(color, static_cast<ColorId>(color_labels.size()));
        if (new_color) {
            color_labels.push_back(color);
        }
        labels.push_back(std::move(label));
        colors.push_back(cit->second);
    });
    if (color_stream.bad()) {
        throw Error(ErrorCode::IoFailure, "reading color stream", 0, "colors");
    }

    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen;
    detail::for_each_record(edge_stream, [&](std::size_t line, const auto& tok) {
        if (tok.size() != 2) {
            throw Error(ErrorCode::MalformedLine, "expected '<label> <label>'", line, "edges");
        }
        NodeId ends[2];
        for (int k = 0; k < 2; ++k) {
            auto it = node_index.find(std::string(tok[k]));
            if (it == node_index.end()) {
                throw Error(ErrorCode::UnknownNode, "'" + std::string(tok[k]) + "'", line, "edges");
            }
            ends[k] = it->second;
        }
        if (ends[0] == ends[1]) {
            throw Error(ErrorCode::SelfLoop, "'" + std::string(tok[0]) + "'", line, "edges");
        }
        if (!seen.insert(edge_key(ends[0], ends[1])).second) {
            throw Error(ErrorCode::DuplicateEdge,
                        "'" + std::string(tok[0]) + "' - '" + std::string(tok[1]) + "'", line, "edges");
        }
        edges.emplace_back(ends[0], ends[1]);
    });
    if (edge_stream.bad()) {
        throw Error(ErrorCode::IoFailure, "reading edge stream", 0, "edges");
    }

    return ColoredGraph::from_parts(std::move(labels), std::move(color_labels), std::move(colors), edges);
}

void write_colored_graph(const ColoredGraph& g, std::ostream& edge_sink, std::ostream& color_sink) {
    for (const auto& [u, v] : g.edges()) {
        edge_sink << g.label(u) << '\t' << g.label(v) << '\n';
    }
    for (NodeId u = 0; u < g.node_count(); ++u) {
        color_sink << g.label(u) << '\t' << g.color_label(g.color(u)) << '\n';
    }
    edge_sink.flush();
    color_sink.flush();
    if (!edge_sink || !color_sink) {
        throw Error(ErrorCode::IoFailure, "writing colored graph");
    }
}

ColoredGraph generate_er_colored(const GraphSpec& spec) {
    if (spec.num_colors == 0) {
        throw Error(ErrorCode::InfeasibleSpec, "num_colors must be at least 1");
    }
    if (spec.nodes > std::uint64_t{0xffffffffu}) {
        throw Error(ErrorCode::InfeasibleSpec, "node count exceeds 32-bit id range");
    }
    const std::uint64_t limit = max_edges(spec.nodes);
    if (spec.edges > limit) {
        throw Error(ErrorCode::InfeasibleSpec, std::to_string(spec.edges) + " edges requested but at most " +
                                                   std::to_string(limit) + " fit on " +
                                                   std::to_string(spec.nodes) + " nodes");
    }

    std::mt19937_64 rng(spec.rng_seed);
    const auto n = static_cast<NodeId>(spec.nodes);

    std::vector<ColorId> colors(n);
    for (auto& c : colors) {
        c = static_cast<ColorId>(uniform_below(rng, spec.num_colors));
    }

    // Dense requests sample the complement so rejection stays cheap.
    const bool complement = spec.edges > limit / 2;
    const std::uint64_t draws = complement ? limit - spec.edges : spec.edges;
    std::unordered_set<std::uint64_t> picked;
    picked.reserve(draws);
    std::vector<Edge> edges;
    edges.reserve(spec.edges);
    while (picked.size() < draws) {
        auto u = static_cast<NodeId>(uniform_below(rng, n));
        auto v = static_cast<NodeId>(uniform_below(rng, n));
        if (u == v) {
            continue;
        }
        if (picked.insert(edge_key(u, v)).second && !complement) {
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
    }
    if (complement) {
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = u + 1; v < n; ++v) {
                if (!picked.contains(edge_key(u, v))) {
                    edges.emplace_back(u, v);
                }
            }
        }
    }

    std::vector<std::string> labels(n);
    for (NodeId u = 0; u < n; ++u) {
        labels[u] = std::to_string(u);
    }
    std::vector<std::string> color_labels(spec.num_colors);
    for (std::uint32_t c = 0; c < spec.num_colors; ++c) {
        color_labels[c] = "c" + std::to_string(c);
    }
    return ColoredGraph::from_parts(std::move(labels), std::move(color_labels), std::move(colors), edges);
}

}  // namespace hetalign
