#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hetalign/colored_graph.hpp"

namespace hetalign {

struct NamedSpec {
    std::string name;
    GraphSpec spec;
};

/// The twelve synthetic networks of the scalability suite: 9500 nodes each,
/// 2 colors, edge counts from 320000 to 449000. Sizes are multiplied by
/// `scale` (rounded) and network k is seeded with `seed + k`.
std::vector<NamedSpec> benchmark_networks(double scale = 1.0, std::uint64_t seed = 1, std::uint32_t colors = 2);

struct BenchConfig {
    std::vector<NamedSpec> networks = benchmark_networks();
    std::vector<std::size_t> worker_counts{1, 2, 4, 8, 16};
    std::uint32_t delta = 2;
    std::size_t repetitions = 3;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Flat settings as read from the command line or a `key=value` file.
/// Keys: scale, workers (comma list), repetitions, delta, seed, colors, and
/// repeatable `network=<name> <nodes> <edges>` which replaces the default
/// suite.
struct BenchOptions {
    double scale = 1.0;
    std::vector<std::size_t> workers{1, 2, 4, 8, 16};
    std::size_t repetitions = 3;
    std::uint32_t delta = 2;
    std::uint64_t seed = 1;
    std::uint32_t colors = 2;
    std::vector<NamedSpec> networks;
};

BenchOptions parse_bench_options(std::istream& in, BenchOptions base = {});
BenchConfig make_bench_config(const BenchOptions& options);

struct BenchRow {
    std::string network;
    std::uint64_t nodes = 0;
    std::uint64_t edges = 0;
    std::size_t workers = 0;
    std::size_t repetition = 0;
    double seconds = 0.0;
    std::size_t alignment_edges = 0;
    double speedup = 0.0;
    std::uint64_t content_hash = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::uint32_t delta = 2;
    std::vector<std::string> assumptions;
};

/// Self-aligns every network with identity seeds at each worker count. Only
/// the classification pass is timed; generation, seed construction, cache
/// warm-up and result teardown fall outside the timer. Throws
/// DeterminismViolation if any run's content hash differs from the first
/// run of the same network. `progress` receives one line per finished run.
BenchReport run_benchmark(const BenchConfig& cfg, const std::function<void(const std::string&)>& progress = {});

double median(std::vector<double> values);

inline constexpr const char* kBenchCsvHeader = "network,n,m,workers,rep,seconds,edges,speedup";

void write_report_csv(const BenchReport& report, std::ostream& out);
void write_report_json(const BenchReport& report, std::ostream& out);

/// Physical cores from /proc/cpuinfo, falling back to the logical count.
std::size_t physical_core_count();

}  // namespace hetalign
