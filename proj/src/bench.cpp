#include "hetalign/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "hetalign/alignment.hpp"
#include "hetalign/error.hpp"
#include "records.hpp"

namespace hetalign {

namespace {

struct SuiteRow {
    const char* name;
    std::uint64_t edges;
};

constexpr std::uint64_t kSuiteNodes = 9500;
constexpr SuiteRow kSuite[] = {
    {"N1", 341000}, {"N2", 342000}, {"N3", 334000},  {"N4", 320000},  {"N5", 353000},  {"N6", 333000},
    {"N7", 333000}, {"N8", 338000}, {"N9", 449000}, {"N10", 406000}, {"N11", 438000}, {"N12", 416000},
};

std::uint64_t scaled(std::uint64_t x, double scale) {
    return static_cast<std::uint64_t>(std::llround(static_cast<double>(x) * scale));
}

std::vector<std::size_t> parse_worker_list(std::string_view text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        unsigned long long w = 0;
        if (!detail::parse_unsigned(text.substr(pos, comma - pos), w)) {
            throw Error(ErrorCode::InvalidParameter, "bad worker list '" + std::string(text) + "'");
        }
        out.push_back(static_cast<std::size_t>(w));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

std::vector<NamedSpec> benchmark_networks(double scale, std::uint64_t seed, std::uint32_t colors) {
    if (!(scale > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "scale must be positive");
    }
    std::vector<NamedSpec> out;
    std::uint64_t k = 0;
    for (const auto& row : kSuite) {
        out.push_back({row.name, GraphSpec{scaled(kSuiteNodes, scale), scaled(row.edges, scale), colors, seed + k}});
        ++k;
    }
    return out;
}

void BenchConfig::validate() const {
    if (networks.empty()) {
        throw Error(ErrorCode::InvalidParameter, "no networks to benchmark");
    }
    if (worker_counts.empty()) {
        throw Error(ErrorCode::InvalidParameter, "no worker counts");
    }
    for (std::size_t k = 0; k < worker_counts.size(); ++k) {
        if (worker_counts[k] < 1 || (k > 0 && worker_counts[k - 1] >= worker_counts[k])) {
            throw Error(ErrorCode::InvalidParameter, "worker counts must be >= 1 and strictly ascending");
        }
    }
    if (repetitions < 1) {
        throw Error(ErrorCode::InvalidParameter, "repetitions must be at least 1");
    }
    if (delta < 1) {
        throw Error(ErrorCode::InvalidParameter, "delta must be at least 1");
    }
    for (const auto& net : networks) {
        if (net.spec.edges > max_edges(net.spec.nodes)) {
            throw Error(ErrorCode::InfeasibleSpec, net.name + ": too many edges for " +
                                                       std::to_string(net.spec.nodes) + " nodes");
        }
        if (net.spec.nodes == 0) {
            throw Error(ErrorCode::InfeasibleSpec, net.name + ": no nodes");
        }
    }
}

BenchOptions parse_bench_options(std::istream& in, BenchOptions base) {
    bool networks_reset = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::MalformedLine, "expected key=value", line_no);
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        unsigned long long u = 0;
        auto need_unsigned = [&]() {
            if (!detail::parse_unsigned(value, u)) {
                throw Error(ErrorCode::MalformedLine, key + " expects a non-negative integer", line_no);
            }
            return u;
        };
        if (key == "scale") {
            if (!detail::parse_double(value, base.scale)) {
                throw Error(ErrorCode::MalformedLine, "scale expects a number", line_no);
            }
        } else if (key == "workers") {
            base.workers = parse_worker_list(value);
        } else if (key == "repetitions" || key == "reps") {
            base.repetitions = need_unsigned();
        } else if (key == "delta") {
            base.delta = static_cast<std::uint32_t>(need_unsigned());
        } else if (key == "seed") {
            base.seed = need_unsigned();
        } else if (key == "colors") {
            base.colors = static_cast<std::uint32_t>(need_unsigned());
        } else if (key == "network") {
            std::istringstream fields(value);
            NamedSpec net;
            std::string extra;
            if (!(fields >> net.name >> net.spec.nodes >> net.spec.edges) || (fields >> extra)) {
                throw Error(ErrorCode::MalformedLine, "network expects '<name> <nodes> <edges>'", line_no);
            }
            if (!networks_reset) {
                base.networks.clear();
                networks_reset = true;
            }
            base.networks.push_back(net);
        } else {
            throw Error(ErrorCode::MalformedLine, "unknown key '" + key + "'", line_no);
        }
    }
    return base;
}

BenchConfig make_bench_config(const BenchOptions& options) {
    BenchConfig cfg;
    if (options.networks.empty()) {
        cfg.networks = benchmark_networks(options.scale, options.seed, options.colors);
    } else {
        if (!(options.scale > 0.0)) {
            throw Error(ErrorCode::InvalidParameter, "scale must be positive");
        }
        cfg.networks.clear();
        std::uint64_t k = 0;
        for (const auto& net : options.networks) {
            cfg.networks.push_back({net.name, GraphSpec{scaled(net.spec.nodes, options.scale),
                                                        scaled(net.spec.edges, options.scale), options.colors,
                                                        options.seed + k++}});
        }
    }
    cfg.worker_counts = options.workers;
    cfg.repetitions = options.repetitions;
    cfg.delta = options.delta;
    cfg.rng_seed = options.seed;
    cfg.validate();
    return cfg;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

BenchReport run_benchmark(const BenchConfig& cfg, const std::function<void(const std::string&)>& progress) {
    cfg.validate();
    BenchReport report;
    report.delta = cfg.delta;
    report.assumptions = {
        "seed pairs: identity (each network aligned with itself)",
        "gap threshold delta = " + std::to_string(cfg.delta),
        "speedup baseline: median time at " + std::to_string(cfg.worker_counts.front()) + " worker(s)",
    };
    WeightSchema schema;
    schema.delta = cfg.delta;

    for (const auto& net : cfg.networks) {
        const ColoredGraph g = generate_er_colored(net.spec);
        const AlignmentBuilder builder(g, g, identity_seeds(g), schema);

        const std::size_t first_row = report.rows.size();
        std::uint64_t reference_hash = 0;
        bool have_reference = false;
        std::map<std::size_t, std::vector<double>> times;
        for (std::size_t workers : cfg.worker_counts) {
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
                AlignmentGraph ag;
                const auto start = std::chrono::steady_clock::now();
                ag = builder.build(workers);
                const auto stop = std::chrono::steady_clock::now();
                const double seconds = std::chrono::duration<double>(stop - start).count();

                const std::uint64_t hash = content_hash(ag);
                if (!have_reference) {
                    reference_hash = hash;
                    have_reference = true;
                } else if (hash != reference_hash) {
                    throw Error(ErrorCode::DeterminismViolation,
                                net.name + ": alignment graph at " + std::to_string(workers) +
                                    " workers differs from the first run");
                }
                times[workers].push_back(seconds);
                report.rows.push_back({net.name, g.node_count(), g.edge_count(), workers, rep, seconds,
                                       ag.edge_count(), 0.0, hash});
                if (progress) {
                    std::ostringstream msg;
                    msg << net.name << " workers=" << workers << " rep=" << rep << " seconds=" << seconds
                        << " edges=" << ag.edge_count();
                    progress(msg.str());
                }
            }
        }
        const double baseline = median(times[cfg.worker_counts.front()]);
        for (std::size_t r = first_row; r < report.rows.size(); ++r) {
            const double t = median(times[report.rows[r].workers]);
            report.rows[r].speedup = t > 0.0 ? baseline / t : 1.0;
        }
    }
    return report;
}

void write_report_csv(const BenchReport& report, std::ostream& out) {
    out << kBenchCsvHeader << '\n';
    out.precision(9);
    for (const auto& r : report.rows) {
        out << r.network << ',' << r.nodes << ',' << r.edges << ',' << r.workers << ',' << r.repetition << ','
            << r.seconds << ',' << r.alignment_edges << ',' << r.speedup << '\n';
    }
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoFailure, "writing CSV report");
    }
}

void write_report_json(const BenchReport& report, std::ostream& out) {
    nlohmann::json doc;
    doc["delta"] = report.delta;
    doc["assumptions"] = report.assumptions;
    doc["rows"] = nlohmann::json::array();
    for (const auto& r : report.rows) {
        char hash[17];
        std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(r.content_hash));
        doc["rows"].push_back({{"network", r.network},
                               {"n", r.nodes},
                               {"m", r.edges},
                               {"workers", r.workers},
                               {"rep", r.repetition},
                               {"seconds", r.seconds},
                               {"edges", r.alignment_edges},
                               {"speedup", r.speedup},
                               {"hash", hash}});
    }
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoFailure, "writing JSON report");
    }
}

std::size_t physical_core_count() {
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::set<std::pair<std::string, std::string>> cores;
    std::string line;
    std::string physical_id = "0";
    while (std::getline(cpuinfo, line)) {
        auto value = [&]() {
            const auto colon = line.find(':');
            return colon == std::string::npos ? std::string() : line.substr(colon + 1);
        };
        if (line.rfind("physical id", 0) == 0) {
            physical_id = value();
        } else if (line.rfind("core id", 0) == 0) {
            cores.emplace(physical_id, value());
        }
    }
    if (!cores.empty()) {
        return cores.size();
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace hetalign
