#pragma once

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hetalign/alignment.hpp"
#include "hetalign/colored_graph.hpp"

namespace fixtures {

inline hetalign::ColoredGraph graph(const std::string& edges, const std::string& colors) {
    std::istringstream e(edges);
    std::istringstream c(colors);
    return hetalign::parse_colored_graph(e, c);
}

/// Alignment graph from an explicit weighted edge list over `n` identity
/// seeds; edges need not be sorted.
inline hetalign::AlignmentGraph alignment(std::size_t n,
                                          std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges) {
    hetalign::SeedPairList nodes(n);
    for (std::uint32_t i = 0; i < n; ++i) nodes[i] = {i, i, 1.0};
    std::vector<hetalign::AlignedEdge> list;
    for (auto [i, j, w] : edges) {
        if (i > j) std::swap(i, j);
        list.push_back({i, j, w, hetalign::EdgeClass{}});
    }
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    return hetalign::AlignmentGraph(nodes, list);
}

inline std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> clique(std::uint32_t first, std::uint32_t size,
                                                                           double w = 1.0) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> out;
    for (std::uint32_t a = first; a < first + size; ++a)
        for (std::uint32_t b = a + 1; b < first + size; ++b) out.emplace_back(a, b, w);
    return out;
}

}  // namespace fixtures
