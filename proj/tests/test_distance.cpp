#include <random>

#include "doctest.h"
#include "hetalign/distance.hpp"
#include "hetalign/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hetalign;

namespace {

BoundedDistance capped(int d, std::uint32_t delta) {
    return d <= static_cast<int>(delta) ? BoundedDistance(static_cast<std::uint32_t>(d)) : BoundedDistance::beyond();
}

}  // namespace

TEST_CASE("distance to self is zero") {
    auto g = fixtures::graph("a b", "a r\nb r\nc r");
    DistanceCache cache(g, 2);
    for (NodeId u = 0; u < 3; ++u) CHECK(bounded_distance(cache, u, u) == BoundedDistance(0));
}

TEST_CASE("path a-b-c") {
    auto g = fixtures::graph("a b\nb c", "a r\nb r\nc r");
    DistanceCache two(g, 2);
    CHECK(bounded_distance(two, 0, 2) == BoundedDistance(2));
    CHECK(bounded_distance(two, 2, 0) == BoundedDistance(2));
    CHECK(bounded_distance(two, 0, 1) == BoundedDistance(1));
    DistanceCache one(g, 1);
    CHECK(bounded_distance(one, 0, 2).is_beyond());
}

TEST_CASE("disconnected pair is beyond") {
    auto g = fixtures::graph("a b\nc d", "a r\nb r\nc r\nd r");
    DistanceCache cache(g, 5);
    CHECK(cache.query(0, 3).is_beyond());
}

TEST_CASE("random G(50,100), delta 4: agrees with Floyd-Warshall") {
    std::mt19937_64 rng(50100);
    auto g = oracle::random_graph(rng, 50, 100, 2);
    const auto fw = oracle::floyd_warshall(g);
    DistanceCache cache(g, 4);
    for (NodeId u = 0; u < 50; ++u)
        for (NodeId v = 0; v < 50; ++v) CHECK(cache.query(u, v) == capped(fw[u][v], 4));
}

TEST_CASE("property: exhaustive agreement, symmetry and triangle consistency for n <= 64") {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 2 + rng() % 63;
        const std::size_t m = rng() % (2 * n + 1);
        const auto delta = static_cast<std::uint32_t>(1 + rng() % 5);
        auto g = oracle::random_graph(rng, n, m, 2);
        const auto fw = oracle::floyd_warshall(g);
        DistanceCache cache(g, delta);
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = 0; v < n; ++v) {
                const auto d = cache.query(u, v);
                REQUIRE(d == capped(fw[u][v], delta));
                REQUIRE(d == cache.query(v, u));
            }
        }
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = 0; v < n; ++v)
                for (NodeId w = 0; w < n; ++w) {
                    auto uv = cache.query(u, v), vw = cache.query(v, w);
                    if (uv.is_beyond() || vw.is_beyond() || uv.hops() + vw.hops() > delta) continue;
                    auto uw = cache.query(u, w);
                    REQUIRE_FALSE(uw.is_beyond());
                    REQUIRE(uw.hops() <= uv.hops() + vw.hops());
                }
    }
}

TEST_CASE("warm then lookup matches query; unwarmed lookup throws") {
    std::mt19937_64 rng(7);
    auto g = oracle::random_graph(rng, 40, 60, 2);
    std::vector<NodeId> subset{1, 3, 5, 8, 13, 21, 34};
    DistanceCache warmed(g, 3);
    warmed.warm(subset);
    CHECK(warmed.warmed_count() == subset.size() - 1);
    DistanceCache lazy(g, 3);
    for (NodeId u : subset)
        for (NodeId v : subset) CHECK(warmed.lookup(u, v) == lazy.query(u, v));

    DistanceCache cold(g, 3);
    bool threw = false;
    for (NodeId v = 1; v < 40 && !threw; ++v) {
        if (g.adjacent(0, v)) continue;
        try {
            cold.lookup(0, v);
        } catch (const Error& e) {
            threw = e.code() == ErrorCode::UnwarmedSource;
        }
    }
    CHECK(threw);
}

TEST_CASE("delta 1 never needs tables") {
    auto g = fixtures::graph("a b\nb c", "a r\nb r\nc r");
    const DistanceCache cache(g, 1);
    CHECK(cache.lookup(0, 2).is_beyond());
    CHECK(cache.lookup(0, 1) == BoundedDistance(1));
}

TEST_CASE("invalid node and invalid delta") {
    auto g = fixtures::graph("a b", "a r\nb r");
    DistanceCache cache(g, 2);
    try {
        cache.query(0, 7);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidNode);
    }
    CHECK_THROWS_AS(DistanceCache(g, 0), Error);
}
