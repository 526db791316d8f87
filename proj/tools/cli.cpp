#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hetalign/alignment.hpp"
#include "hetalign/bench.hpp"
#include "hetalign/colored_graph.hpp"
#include "hetalign/error.hpp"
#include "hetalign/mcl.hpp"

namespace hetalign::cli {

namespace {

/// Error already carrying its exit status and a file-qualified message.
struct Failure {
    int status;
    std::string message;
};

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoFailure: return kIoFailure;
        case ErrorCode::DeterminismViolation: return kDeterminism;
        default: return kValidation;
    }
}

Failure failure_from(const Error& e, const std::string& path = {}) {
    std::string where = path;
    if (!where.empty() && e.line() != 0) {
        where += ":" + std::to_string(e.line());
    }
    return {status_for(e.code()), where.empty() ? e.what() : where + ": " + e.what()};
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Failure{kIoFailure, path + ": cannot open for reading"};
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Failure{kIoFailure, path + ": cannot open for writing"};
    }
    return out;
}

template <typename Fn>
auto attributed(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw failure_from(e, path);
    }
}

ColoredGraph load_graph(const std::string& edges_path, const std::string& colors_path) {
    auto edges = open_input(edges_path);
    auto colors = open_input(colors_path);
    try {
        return parse_colored_graph(edges, colors);
    } catch (const Error& e) {
        throw failure_from(e, e.source() == "colors" ? colors_path : edges_path);
    }
}

struct GenerateArgs {
    std::uint64_t nodes = 0;
    std::uint64_t edges = 0;
    std::uint32_t colors = 2;
    std::uint64_t seed = 0;
    std::string out_edges;
    std::string out_colors;
};

struct AlignArgs {
    std::string g1_edges, g1_colors, g2_edges, g2_colors, seeds, schema, out;
    std::uint32_t delta = 2;
    std::size_t workers = 1;
    bool blend = false;
    bool gap_strict = false;
    bool color_consistent = false;
    bool allow_unordered = false;
};

struct ClusterArgs {
    std::string alignment, out;
    MclParams params;
    bool no_self_loops = false;
};

struct BenchArgs {
    std::string config;
    double scale = 1.0;
    std::string workers;
    std::size_t reps = 3;
    std::uint32_t delta = 2;
    std::uint64_t seed = 1;
    std::string out_csv = "bench_report.csv";
    std::string out_json = "bench_report.json";
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    ColoredGraph g;
    try {
        g = generate_er_colored(GraphSpec{a.nodes, a.edges, a.colors, a.seed});
    } catch (const Error& e) {
        throw failure_from(e);
    }
    auto edges = open_output(a.out_edges);
    auto colors = open_output(a.out_colors);
    try {
        write_colored_graph(g, edges, colors);
    } catch (const Error& e) {
        throw Failure{kIoFailure, a.out_edges + ", " + a.out_colors + ": " + e.what()};
    }
    std::vector<std::size_t> histogram(g.color_count(), 0);
    for (ColorId c : g.colors()) {
        ++histogram[c];
    }
    out << "nodes " << g.node_count() << '\n' << "edges " << g.edge_count() << '\n';
    for (ColorId c = 0; c < g.color_count(); ++c) {
        out << "color " << g.color_label(c) << ' ' << histogram[c] << '\n';
    }
    return kOk;
}

int cmd_align(const AlignArgs& a, std::ostream& out) {
    const ColoredGraph g1 = load_graph(a.g1_edges, a.g1_colors);
    const ColoredGraph g2 = load_graph(a.g2_edges, a.g2_colors);

    WeightSchema schema;
    schema.delta = a.delta;
    schema.similarity_blend = a.blend;
    schema.strict_gap = a.gap_strict;
    if (!a.schema.empty()) {
        auto in = open_input(a.schema);
        schema = attributed(a.schema, [&] { return parse_weight_schema(in, schema, a.allow_unordered); });
    } else {
        attributed("", [&] { schema.validate(a.allow_unordered); });
    }

    auto seed_stream = open_input(a.seeds);
    const SeedPairList seeds = attributed(a.seeds, [&] { return parse_seed_pairs(seed_stream, g1, g2); });
    if (a.color_consistent) {
        attributed(a.seeds, [&] { check_color_consistent_seeds(seeds, g1, g2); });
    }

    const AlignmentGraph ag =
        attributed(a.seeds, [&] { return build_alignment_graph(g1, g2, seeds, schema, a.workers); });

    auto sink = open_output(a.out);
    try {
        write_alignment_graph(ag, sink);
    } catch (const Error& e) {
        throw failure_from(e, a.out);
    }

    const auto hist = ag.class_histogram();
    out << "nodes " << ag.node_count() << '\n' << "edges " << ag.edge_count() << '\n';
    for (std::size_t k = 0; k < EdgeClass::kCount; ++k) {
        out << EdgeClass::from_index(k).name() << ' ' << hist[k] << '\n';
    }
    out << "total_weight " << std::setprecision(12) << ag.total_weight() << '\n';
    return kOk;
}

int cmd_cluster(const ClusterArgs& a, std::ostream& out) {
    MclParams params = a.params;
    params.add_self_loops = !a.no_self_loops;
    attributed("", [&] { params.validate(); });

    auto in = open_input(a.alignment);
    const AlignmentGraph ag = attributed(a.alignment, [&] { return read_alignment_graph(in); });
    if (ag.node_count() == 0) {
        throw Failure{kValidation, a.alignment + ": EmptySeedList: alignment graph has no nodes"};
    }
    const ClusterResult result = attributed(a.alignment, [&] { return mcl_cluster(ag, params); });

    auto sink = open_output(a.out);
    try {
        write_clusters(result, ag, sink);
    } catch (const Error& e) {
        throw failure_from(e, a.out);
    }

    std::map<std::size_t, std::size_t> sizes;
    for (const auto& c : result.clusters.clusters) {
        ++sizes[c.size()];
    }
    out << "clusters " << result.clusters.clusters.size() << '\n';
    out << "iterations " << result.iterations << '\n';
    out << "converged " << (result.converged ? "true" : "false") << '\n';
    if (!result.converged) {
        out << "warning: no convergence after " << result.iterations << " iterations; clusters read from last iterate\n";
    }
    out << "size_distribution";
    for (const auto& [size, count] : sizes) {
        out << ' ' << size << ':' << count;
    }
    out << '\n';
    return kOk;
}

int cmd_bench(const BenchArgs& a, const CLI::App& sub, std::ostream& out) {
    BenchOptions options;
    if (!a.config.empty()) {
        auto in = open_input(a.config);
        options = attributed(a.config, [&] { return parse_bench_options(in); });
    }
    // Explicit flags override the config file.
    if (sub.count("--scale")) options.scale = a.scale;
    if (sub.count("--reps")) options.repetitions = a.reps;
    if (sub.count("--delta")) options.delta = a.delta;
    if (sub.count("--seed")) options.seed = a.seed;
    if (sub.count("--workers")) {
        std::istringstream line("workers=" + a.workers);
        options = attributed("--workers", [&] { return parse_bench_options(line, options); });
    }
    const BenchConfig cfg = attributed("", [&] { return make_bench_config(options); });

    out << "# assumptions: identity seed pairs, delta=" << cfg.delta << '\n';
    const BenchReport report = attributed("", [&] {
        return run_benchmark(cfg, [&](const std::string& line) { out << line << '\n' << std::flush; });
    });

    {
        auto csv = open_output(a.out_csv);
        attributed(a.out_csv, [&] { write_report_csv(report, csv); });
        auto json = open_output(a.out_json);
        attributed(a.out_json, [&] { write_report_json(report, json); });
    }

    out << "\nnetwork      n        m  workers  median_s  speedup\n";
    for (const auto& net : cfg.networks) {
        for (std::size_t w : cfg.worker_counts) {
            std::vector<double> times;
            double speedup = 0.0;
            std::uint64_t n = 0;
            std::uint64_t m = 0;
            for (const auto& r : report.rows) {
                if (r.network == net.name && r.workers == w) {
                    times.push_back(r.seconds);
                    speedup = r.speedup;
                    n = r.nodes;
                    m = r.edges;
                }
            }
            out << std::left << std::setw(8) << net.name << std::right << std::setw(6) << n << std::setw(9) << m
                << std::setw(9) << w << std::setw(10) << std::fixed << std::setprecision(4) << median(times)
                << std::setw(9) << std::setprecision(2) << speedup << '\n';
            out.unsetf(std::ios::floatfield);
        }
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heterogeneous network alignment toolkit", "hetalign"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate a seeded Erdos-Renyi colored graph");
    generate->add_option("--nodes", gen.nodes, "Node count")->required();
    generate->add_option("--edges", gen.edges, "Edge count")->required();
    generate->add_option("--colors", gen.colors, "Number of colors")->required();
    generate->add_option("--seed", gen.seed, "RNG seed")->required();
    generate->add_option("--out-edges", gen.out_edges, "Edge-list output file")->required();
    generate->add_option("--out-colors", gen.out_colors, "Color-table output file")->required();

    AlignArgs al;
    auto* align = app.add_subcommand("align", "Build the alignment graph of two colored graphs");
    align->add_option("--g1-edges", al.g1_edges, "First graph edge list")->required();
    align->add_option("--g1-colors", al.g1_colors, "First graph color table")->required();
    align->add_option("--g2-edges", al.g2_edges, "Second graph edge list")->required();
    align->add_option("--g2-colors", al.g2_colors, "Second graph color table")->required();
    align->add_option("--seeds", al.seeds, "Seed pair file")->required();
    align->add_option("--delta", al.delta, "Gap threshold")->required();
    align->add_option("--out", al.out, "Alignment graph output file")->required();
    align->add_option("--schema", al.schema, "Weight schema file");
    align->add_option("--workers", al.workers, "Worker threads")->default_val(1);
    align->add_flag("--blend", al.blend, "Scale weights by mean seed similarity");
    align->add_flag("--gap-strict", al.gap_strict, "Gaps require distance < delta");
    align->add_flag("--require-color-consistent-seeds", al.color_consistent,
                    "Reject seeds pairing nodes of different colors");
    align->add_flag("--allow-unordered-weights", al.allow_unordered, "Skip the weight ordering check");

    ClusterArgs cl;
    auto* cluster = app.add_subcommand("cluster", "Markov-cluster an alignment graph");
    cluster->add_option("--alignment", cl.alignment, "Alignment graph file")->required();
    cluster->add_option("--out", cl.out, "Cluster output file")->required();
    cluster->add_option("--inflation", cl.params.inflation, "Inflation exponent (> 1)")->default_val(2.0);
    cluster->add_option("--expansion", cl.params.expansion, "Expansion power (>= 2)")->default_val(2);
    cluster->add_option("--prune", cl.params.prune_threshold, "Prune threshold")->default_val(1e-5);
    cluster->add_option("--max-iters", cl.params.max_iters, "Iteration cap")->default_val(100);
    cluster->add_option("--eps", cl.params.convergence_eps, "Convergence threshold")->default_val(1e-6);
    cluster->add_option("--self-loop-weight", cl.params.self_loop_weight, "Self-loop weight")->default_val(1.0);
    cluster->add_flag("--no-self-loops", cl.no_self_loops, "Do not add self-loops");
    cluster->add_option("--workers", cl.params.workers, "Worker threads")->default_val(1);

    BenchArgs be;
    auto* bench = app.add_subcommand("bench", "Self-alignment scalability benchmark");
    bench->add_option("--config", be.config, "key=value config file");
    bench->add_option("--scale", be.scale, "Size factor applied to nodes and edges");
    bench->add_option("--workers", be.workers, "Comma-separated worker counts");
    bench->add_option("--reps", be.reps, "Repetitions per worker count");
    bench->add_option("--delta", be.delta, "Gap threshold");
    bench->add_option("--seed", be.seed, "Base RNG seed");
    bench->add_option("--out-csv", be.out_csv, "CSV report path");
    bench->add_option("--out-json", be.out_json, "JSON report path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*generate) return cmd_generate(gen, out);
        if (*align) return cmd_align(al, out);
        if (*cluster) return cmd_cluster(cl, out);
        if (*bench) return cmd_bench(be, *bench, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << '\n';
        return f.status;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return status_for(e.code());
    }
    return kValidation;
}

}  // namespace hetalign::cli
