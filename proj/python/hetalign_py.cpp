#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "hetalign/alignment.hpp"
#include "hetalign/bench.hpp"
#include "hetalign/distance.hpp"
#include "hetalign/error.hpp"
#include "hetalign/mcl.hpp"

namespace py = pybind11;
using namespace hetalign;

namespace {

std::string class_name(EdgeClass cls) { return std::string(cls.name()); }

ColoredGraph graph_from_text(const std::string& edges, const std::string& colors) {
    std::istringstream e(edges), c(colors);
    return parse_colored_graph(e, c);
}

ColoredGraph graph_from_files(const std::string& edges_path, const std::string& colors_path) {
    std::ifstream e(edges_path), c(colors_path);
    if (!e) throw Error(ErrorCode::IoFailure, "cannot open " + edges_path);
    if (!c) throw Error(ErrorCode::IoFailure, "cannot open " + colors_path);
    return parse_colored_graph(e, c);
}

std::pair<std::string, std::string> graph_to_text(const ColoredGraph& g) {
    std::ostringstream e, c;
    write_colored_graph(g, e, c);
    return {e.str(), c.str()};
}

py::dict histogram(const AlignmentGraph& ag) {
    py::dict out;
    const auto h = ag.class_histogram();
    for (std::size_t k = 0; k < EdgeClass::kCount; ++k) out[py::str(class_name(EdgeClass::from_index(k)))] = h[k];
    return out;
}

}  // namespace

PYBIND11_MODULE(hetalign, m) {
    m.doc() = "Seeded alignment of colored graphs with Markov clustering";

    static py::handle error_type = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error_type(py::str(e.what()));
            exc.attr("code") = std::string(to_string(e.code()));
            exc.attr("line") = e.line();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<ColoredGraph>(m, "ColoredGraph")
        .def_static("parse", &graph_from_text, py::arg("edges"), py::arg("colors"),
                    "Build a graph from edge-list and color-list text.")
        .def_static("read", &graph_from_files, py::arg("edges_path"), py::arg("colors_path"))
        .def_static(
            "generate",
            [](std::uint64_t nodes, std::uint64_t edges, std::uint32_t colors, std::uint64_t seed) {
                return generate_er_colored({nodes, edges, colors, seed});
            },
            py::arg("nodes"), py::arg("edges"), py::arg("colors") = 2, py::arg("seed") = 1)
        .def_property_readonly("node_count", &ColoredGraph::node_count)
        .def_property_readonly("edge_count", &ColoredGraph::edge_count)
        .def_property_readonly("color_count", &ColoredGraph::color_count)
        .def("edges", &ColoredGraph::edges)
        .def("neighbors",
             [](const ColoredGraph& g, NodeId u) {
                 if (u >= g.node_count()) throw py::index_error("node out of range");
                 auto s = g.neighbors(u);
                 return std::vector<NodeId>(s.begin(), s.end());
             })
        .def("label", [](const ColoredGraph& g, NodeId u) {
            if (u >= g.node_count()) throw py::index_error("node out of range");
            return g.label(u);
        })
        .def("color", [](const ColoredGraph& g, NodeId u) {
            if (u >= g.node_count()) throw py::index_error("node out of range");
            return g.color_label(g.color(u));
        })
        .def("find", &ColoredGraph::find)
        .def("to_text", &graph_to_text, "Return (edges_text, colors_text).")
        .def(py::self == py::self);

    py::class_<SeedPair>(m, "SeedPair")
        .def(py::init<NodeId, NodeId, double>(), py::arg("u1"), py::arg("u2"), py::arg("similarity") = 1.0)
        .def_readwrite("u1", &SeedPair::u1)
        .def_readwrite("u2", &SeedPair::u2)
        .def_readwrite("similarity", &SeedPair::similarity)
        .def("__repr__", [](const SeedPair& s) {
            return "SeedPair(" + std::to_string(s.u1) + ", " + std::to_string(s.u2) + ", " +
                   std::to_string(s.similarity) + ")";
        });

    m.def(
        "parse_seeds",
        [](const std::string& text, const ColoredGraph& g1, const ColoredGraph& g2) {
            std::istringstream in(text);
            return parse_seed_pairs(in, g1, g2);
        },
        py::arg("text"), py::arg("g1"), py::arg("g2"));
    m.def("identity_seeds", &identity_seeds, py::arg("graph"));

    py::class_<WeightSchema>(m, "WeightSchema")
        .def(py::init<>())
        .def_readwrite("weights", &WeightSchema::weights)
        .def_readwrite("delta", &WeightSchema::delta)
        .def_readwrite("similarity_blend", &WeightSchema::similarity_blend)
        .def_readwrite("strict_gap", &WeightSchema::strict_gap)
        .def("weight", [](const WeightSchema& s, const std::string& name) {
            auto cls = EdgeClass::from_name(name);
            if (!cls) throw py::value_error("unknown edge class " + name);
            return s.weight(*cls);
        })
        .def("validate", &WeightSchema::validate, py::arg("allow_unordered") = false);

    m.def(
        "parse_weight_schema",
        [](const std::string& text, bool allow_unordered) {
            std::istringstream in(text);
            return parse_weight_schema(in, {}, allow_unordered);
        },
        py::arg("text"), py::arg("allow_unordered") = false);

    m.def(
        "classify",
        [](const SeedPair& a, const SeedPair& b, const ColoredGraph& g1, const ColoredGraph& g2, std::uint32_t delta,
           bool strict_gap) -> std::optional<std::string> {
            DistanceCache c1(g1, delta), c2(g2, delta);
            auto cls = classify_pair(a, b, g1, g2, c1, c2, strict_gap);
            if (!cls) return std::nullopt;
            return class_name(*cls);
        },
        py::arg("a"), py::arg("b"), py::arg("g1"), py::arg("g2"), py::arg("delta") = 2, py::arg("strict_gap") = false,
        "Edge class name for one seed pair couple, or None.");

    py::class_<AlignmentGraph>(m, "AlignmentGraph")
        .def_static("parse",
                    [](const std::string& text) {
                        std::istringstream in(text);
                        return read_alignment_graph(in);
                    })
        .def_property_readonly("node_count", &AlignmentGraph::node_count)
        .def_property_readonly("edge_count", &AlignmentGraph::edge_count)
        .def_property_readonly("nodes", &AlignmentGraph::nodes)
        .def("edges",
             [](const AlignmentGraph& ag) {
                 std::vector<std::tuple<std::uint32_t, std::uint32_t, double, std::string>> out;
                 out.reserve(ag.edge_count());
                 for (const auto& e : ag.edges()) out.emplace_back(e.i, e.j, e.weight, class_name(e.cls));
                 return out;
             })
        .def_property_readonly("total_weight", &AlignmentGraph::total_weight)
        .def("class_histogram", &histogram)
        .def("content_hash", &content_hash)
        .def("to_text",
             [](const AlignmentGraph& ag) {
                 std::ostringstream out;
                 write_alignment_graph(ag, out);
                 return out.str();
             })
        .def(py::self == py::self);

    m.def("align", &build_alignment_graph, py::arg("g1"), py::arg("g2"), py::arg("seeds"),
          py::arg("schema") = WeightSchema{}, py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

    py::class_<MclParams>(m, "MclParams")
        .def(py::init<>())
        .def_readwrite("inflation", &MclParams::inflation)
        .def_readwrite("expansion", &MclParams::expansion)
        .def_readwrite("prune_threshold", &MclParams::prune_threshold)
        .def_readwrite("max_iters", &MclParams::max_iters)
        .def_readwrite("convergence_eps", &MclParams::convergence_eps)
        .def_readwrite("add_self_loops", &MclParams::add_self_loops)
        .def_readwrite("self_loop_weight", &MclParams::self_loop_weight)
        .def_readwrite("workers", &MclParams::workers);

    py::class_<ClusterResult>(m, "ClusterResult")
        .def_property_readonly("clusters", [](const ClusterResult& r) { return r.clusters.clusters; })
        .def_readonly("iterations", &ClusterResult::iterations)
        .def_readonly("converged", &ClusterResult::converged);

    m.def("cluster", &mcl_cluster, py::arg("alignment"), py::arg("params") = MclParams{},
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "intra_cluster_weights",
        [](const AlignmentGraph& ag, const ClusterResult& r) { return intra_cluster_weights(ag, r.clusters); },
        py::arg("alignment"), py::arg("result"));

    m.def(
        "benchmark_networks",
        [](double scale, std::uint64_t seed, std::uint32_t colors) {
            std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>> out;
            for (const auto& n : benchmark_networks(scale, seed, colors))
                out.emplace_back(n.name, n.spec.nodes, n.spec.edges);
            return out;
        },
        py::arg("scale") = 1.0, py::arg("seed") = 1, py::arg("colors") = 2);

    m.def(
        "run_benchmark",
        [](double scale, std::vector<std::size_t> workers, std::size_t repetitions, std::uint32_t delta,
           std::uint64_t seed) {
            BenchOptions opts;
            opts.scale = scale;
            opts.workers = std::move(workers);
            opts.repetitions = repetitions;
            opts.delta = delta;
            opts.seed = seed;
            BenchReport report;
            {
                py::gil_scoped_release release;
                report = run_benchmark(make_bench_config(opts));
            }
            py::list rows;
            for (const auto& r : report.rows) {
                py::dict d;
                d["network"] = r.network;
                d["nodes"] = r.nodes;
                d["edges"] = r.edges;
                d["workers"] = r.workers;
                d["repetition"] = r.repetition;
                d["seconds"] = r.seconds;
                d["alignment_edges"] = r.alignment_edges;
                d["speedup"] = r.speedup;
                d["content_hash"] = r.content_hash;
                rows.append(d);
            }
            return rows;
        },
        py::arg("scale") = 1.0, py::arg("workers") = std::vector<std::size_t>{1, 2, 4, 8, 16},
        py::arg("repetitions") = 3, py::arg("delta") = 2, py::arg("seed") = 1);

    m.def("physical_core_count", &physical_core_count);
}
