#include "hetalign/mcl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "hetalign/error.hpp"
#include "hetalign/parallel.hpp"

namespace hetalign {

namespace {

using Column = StochasticMatrix::Column;

// Columns per parallel block; small enough to balance, large enough to
// amortize scratch allocation.
constexpr std::size_t kColumnsPerBlock = 64;

template <typename Fn>
std::vector<Column> map_columns(std::size_t n, std::size_t workers, Fn&& fn) {
    std::vector<Column> out(n);
    const std::size_t blocks = (n + kColumnsPerBlock - 1) / kColumnsPerBlock;
    parallel_blocks(workers, blocks, [&](std::size_t b) {
        const std::size_t end = std::min(n, (b + 1) * kColumnsPerBlock);
        for (std::size_t j = b * kColumnsPerBlock; j < end; ++j) {
            out[j] = fn(j);
        }
    });
    return out;
}

void normalize(Column& col) {
    double sum = 0.0;
    for (const auto& e : col) {
        sum += e.value;
    }
    for (auto& e : col) {
        e.value /= sum;
    }
}

// Column j of a * b, accumulated in fixed order: b's entries by row, then
// a's column entries by row.
Column multiply_column(const StochasticMatrix& a, const Column& bcol, std::vector<double>& acc,
                       std::vector<std::uint32_t>& touched) {
    touched.clear();
    for (const auto& [k, bk] : bcol) {
        for (const auto& [row, v] : a.column(k)) {
            if (acc[row] == 0.0) {
                touched.push_back(row);
            }
            acc[row] += v * bk;
        }
    }
    std::sort(touched.begin(), touched.end());
    Column out;
    out.reserve(touched.size());
    for (std::uint32_t row : touched) {
        if (acc[row] > 0.0) {
            out.push_back({row, acc[row]});
        }
        acc[row] = 0.0;
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

struct DisjointSets {
    std::vector<std::uint32_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0U); }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

}  // namespace

StochasticMatrix::StochasticMatrix(std::size_t n, std::vector<Column> columns) : n_(n), columns_(std::move(columns)) {
    if (columns_.size() != n_) {
        throw Error(ErrorCode::InvalidParameter, "column count differs from dimension");
    }
    for (const auto& col : columns_) {
        for (std::size_t k = 0; k < col.size(); ++k) {
            if (col[k].row >= n_ || !(col[k].value > 0.0) || (k > 0 && col[k - 1].row >= col[k].row)) {
                throw Error(ErrorCode::InvalidParameter, "column entries must be positive, in range and sorted");
            }
        }
    }
}

StochasticMatrix StochasticMatrix::from_dense(std::size_t n, std::span<const double> column_major) {
    if (column_major.size() != n * n) {
        throw Error(ErrorCode::InvalidParameter, "dense array size mismatch");
    }
    std::vector<Column> cols(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = column_major[j * n + i];
            if (v != 0.0) {
                cols[j].push_back({static_cast<std::uint32_t>(i), v});
            }
        }
    }
    return StochasticMatrix(n, std::move(cols));
}

std::vector<double> StochasticMatrix::to_dense() const {
    std::vector<double> out(n_ * n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        for (const auto& [row, v] : columns_[j]) {
            out[j * n_ + row] = v;
        }
    }
    return out;
}

std::size_t StochasticMatrix::nonzeros() const {
    std::size_t nnz = 0;
    for (const auto& col : columns_) {
        nnz += col.size();
    }
    return nnz;
}

double StochasticMatrix::column_sum(std::size_t j) const {
    double sum = 0.0;
    for (const auto& e : columns_[j]) {
        sum += e.value;
    }
    return sum;
}

double StochasticMatrix::at(std::size_t row, std::size_t col) const {
    const auto& c = columns_[col];
    auto it = std::lower_bound(c.begin(), c.end(), row, [](const Entry& e, std::size_t r) { return e.row < r; });
    return (it != c.end() && it->row == row) ? it->value : 0.0;
}

void MclParams::validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
    if (!(inflation > 1.0)) bad("inflation must be greater than 1, got " + format_double(inflation));
    if (expansion < 2) bad("expansion must be at least 2");
    if (!(prune_threshold >= 0.0)) bad("prune threshold must be non-negative");
    if (max_iters < 1) bad("max_iters must be at least 1");
    if (!(convergence_eps > 0.0)) bad("convergence epsilon must be positive");
    if (add_self_loops && !(self_loop_weight > 0.0)) bad("self-loop weight must be positive");
    if (workers < 1) bad("workers must be at least 1");
}

StochasticMatrix to_stochastic(const AlignmentGraph& ag, const MclParams& params) {
    const std::size_t n = ag.node_count();
    if (n == 0) {
        throw Error(ErrorCode::EmptySeedList, "alignment graph has no nodes");
    }
    std::vector<Column> cols(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        Column& col = cols[j];
        if (params.add_self_loops) {
            col.push_back({j, params.self_loop_weight});
        }
        for (std::uint32_t e : ag.incident(j)) {
            const AlignedEdge& edge = ag.edges()[e];
            col.push_back({edge.i == j ? edge.j : edge.i, edge.weight});
        }
        if (col.empty()) {
            throw Error(ErrorCode::IsolatedNodeWithoutSelfLoop, "node " + std::to_string(j));
        }
        std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.row < b.row; });
        normalize(col);
    }
    return StochasticMatrix(n, std::move(cols));
}

StochasticMatrix expand(const StochasticMatrix& m, unsigned power, std::size_t workers) {
    if (power < 1) {
        throw Error(ErrorCode::InvalidParameter, "expansion power must be at least 1");
    }
    const std::size_t n = m.size();
    StochasticMatrix result = m;
    for (unsigned p = 1; p < power; ++p) {
        const StochasticMatrix& prev = result;
        std::vector<Column> cols(n);
        const std::size_t blocks = (n + kColumnsPerBlock - 1) / kColumnsPerBlock;
        parallel_blocks(workers, blocks, [&](std::size_t b) {
            std::vector<double> dense(n, 0.0);
            std::vector<std::uint32_t> touched;
            const std::size_t end = std::min(n, (b + 1) * kColumnsPerBlock);
            for (std::size_t j = b * kColumnsPerBlock; j < end; ++j) {
                cols[j] = multiply_column(m, prev.column(j), dense, touched);
            }
        });
        result = StochasticMatrix(n, std::move(cols));
    }
    return result;
}

StochasticMatrix inflate(const StochasticMatrix& m, double power, std::size_t workers) {
    auto cols = map_columns(m.size(), workers, [&](std::size_t j) {
        Column col = m.column(j);
        for (auto& e : col) {
            e.value = std::pow(e.value, power);
        }
        // Entries that underflow are dropped to keep storage strictly positive.
        std::erase_if(col, [](const auto& e) { return !(e.value > 0.0); });
        if (col.empty()) {
            // Every entry underflowed; keep the original maxima as a point mass.
            const auto& src = m.column(j);
            auto top = std::max_element(src.begin(), src.end(),
                                        [](const auto& a, const auto& b) { return a.value < b.value; });
            for (const auto& e : src) {
                if (e.value == top->value) col.push_back({e.row, 1.0});
            }
        }
        normalize(col);
        return col;
    });
    return StochasticMatrix(m.size(), std::move(cols));
}

StochasticMatrix prune(const StochasticMatrix& m, double threshold, std::size_t workers) {
    if (!(threshold >= 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "prune threshold must be non-negative");
    }
    auto cols = map_columns(m.size(), workers, [&](std::size_t j) {
        const Column& src = m.column(j);
        if (src.empty()) {
            return Column{};
        }
        double top = 0.0;
        for (const auto& e : src) {
            top = std::max(top, e.value);
        }
        Column col;
        col.reserve(src.size());
        for (const auto& e : src) {
            if (e.value >= threshold || e.value == top) {
                col.push_back(e);
            }
        }
        if (col.size() != src.size()) {
            normalize(col);
        }
        return col;
    });
    return StochasticMatrix(m.size(), std::move(cols));
}

double max_abs_difference(const StochasticMatrix& a, const StochasticMatrix& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::InvalidParameter, "dimension mismatch");
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const auto& ca = a.column(j);
        const auto& cb = b.column(j);
        std::size_t p = 0;
        std::size_t q = 0;
        while (p < ca.size() || q < cb.size()) {
            if (q == cb.size() || (p < ca.size() && ca[p].row < cb[q].row)) {
                diff = std::max(diff, std::abs(ca[p++].value));
            } else if (p == ca.size() || cb[q].row < ca[p].row) {
                diff = std::max(diff, std::abs(cb[q++].value));
            } else {
                diff = std::max(diff, std::abs(ca[p++].value - cb[q++].value));
            }
        }
    }
    return diff;
}

ClusterSet interpret_clusters(const StochasticMatrix& limit) {
    const std::size_t n = limit.size();
    std::vector<bool> attractor(n);
    for (std::size_t i = 0; i < n; ++i) {
        attractor[i] = limit.at(i, i) > 0.0;
    }

    DisjointSets sets(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::int64_t first = -1;
        for (const auto& [row, v] : limit.column(j)) {
            if (!attractor[row]) continue;
            if (first < 0) {
                first = row;
            } else {
                sets.unite(static_cast<std::uint32_t>(first), row);
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (attractor[j]) continue;
        std::int64_t best = -1;
        double best_value = 0.0;
        for (const auto& [row, v] : limit.column(j)) {
            // Rows ascend, so strict '>' keeps the smaller index on ties.
            if (attractor[row] && v > best_value) {
                best = row;
                best_value = v;
            }
        }
        if (best >= 0) {
            sets.unite(static_cast<std::uint32_t>(best), static_cast<std::uint32_t>(j));
        }
    }

    // Roots are the smallest member of each set, so ordering by root orders
    // clusters by smallest member.
    std::vector<std::int64_t> slot(n, -1);
    ClusterSet out;
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t root = sets.find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::int64_t>(out.clusters.size());
            out.clusters.emplace_back();
        }
        out.clusters[static_cast<std::size_t>(slot[root])].push_back(i);
    }
    return out;
}

bool ClusterSet::is_partition_of(std::size_t n) const {
    std::vector<bool> seen(n, false);
    std::size_t count = 0;
    for (const auto& c : clusters) {
        if (c.empty()) return false;
        for (std::uint32_t v : c) {
            if (v >= n || seen[v]) return false;
            seen[v] = true;
            ++count;
        }
    }
    return count == n;
}

ClusterResult mcl_cluster(const AlignmentGraph& ag, const MclParams& params) {
    params.validate();
    StochasticMatrix current = to_stochastic(ag, params);
    ClusterResult result;
    for (std::size_t it = 1; it <= params.max_iters; ++it) {
        StochasticMatrix next = prune(inflate(expand(current, params.expansion, params.workers), params.inflation,
                                              params.workers),
                                      params.prune_threshold, params.workers);
        const double change = max_abs_difference(next, current);
        current = std::move(next);
        result.iterations = it;
        if (change < params.convergence_eps) {
            result.converged = true;
            break;
        }
    }
    result.clusters = interpret_clusters(current);
    return result;
}

std::vector<double> intra_cluster_weights(const AlignmentGraph& ag, const ClusterSet& clusters) {
    std::vector<std::size_t> owner(ag.node_count(), clusters.clusters.size());
    for (std::size_t c = 0; c < clusters.clusters.size(); ++c) {
        for (std::uint32_t v : clusters.clusters[c]) {
            if (v < owner.size()) owner[v] = c;
        }
    }
    std::vector<double> weights(clusters.clusters.size(), 0.0);
    for (const auto& e : ag.edges()) {
        if (owner[e.i] == owner[e.j] && owner[e.i] < weights.size()) {
            weights[owner[e.i]] += e.weight;
        }
    }
    return weights;
}

void write_clusters(const ClusterResult& result, const AlignmentGraph& ag, std::ostream& out) {
    const auto weights = intra_cluster_weights(ag, result.clusters);
    double total = 0.0;
    for (double w : weights) total += w;
    out << "# iterations " << result.iterations << '\n';
    out << "# converged " << (result.converged ? "true" : "false") << '\n';
    out << "# clusters " << result.clusters.clusters.size() << '\n';
    out << "# intra_cluster_weight " << format_double(total) << '\n';
    out << "# cluster_weights";
    for (double w : weights) out << ' ' << format_double(w);
    out << '\n';
    for (const auto& c : result.clusters.clusters) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            out << (k ? " " : "") << c[k];
        }
        out << '\n';
    }
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoFailure, "writing clusters");
    }
}

}  // namespace hetalign
