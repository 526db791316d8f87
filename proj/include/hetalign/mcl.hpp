#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hetalign/alignment.hpp"

namespace hetalign {

/// Sparse column-major matrix whose columns are probability distributions.
/// Each column holds strictly positive entries sorted by row.
class StochasticMatrix {
public:
    struct Entry {
        std::uint32_t row = 0;
        double value = 0.0;

        friend bool operator==(const Entry&, const Entry&) = default;
    };
    using Column = std::vector<Entry>;

    StochasticMatrix() = default;
    /// Takes ownership of `columns`; throws InvalidParameter if an entry is
    /// non-positive, out of range or out of order. Does not normalize.
    StochasticMatrix(std::size_t n, std::vector<Column> columns);

    /// Builds from a dense column-major array, dropping zeros. Test helper.
    static StochasticMatrix from_dense(std::size_t n, std::span<const double> column_major);
    std::vector<double> to_dense() const;

    std::size_t size() const noexcept { return n_; }
    const Column& column(std::size_t j) const { return columns_[j]; }
    std::size_t nonzeros() const;
    double column_sum(std::size_t j) const;
    /// Value at (row, col), zero when absent.
    double at(std::size_t row, std::size_t col) const;

    friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Column> columns_;
};

struct MclParams {
    double inflation = 2.0;
    unsigned expansion = 2;
    double prune_threshold = 1e-5;
    std::size_t max_iters = 100;
    double convergence_eps = 1e-6;
    bool add_self_loops = true;
    double self_loop_weight = 1.0;
    /// Column-parallel workers; results do not depend on this.
    std::size_t workers = 1;

    void validate() const;
};

struct ClusterSet {
    /// Each cluster sorted ascending; clusters ordered by smallest member.
    std::vector<std::vector<std::uint32_t>> clusters;

    /// Pairwise disjoint, non-empty, and covering [0, n).
    bool is_partition_of(std::size_t n) const;

    friend bool operator==(const ClusterSet&, const ClusterSet&) = default;
};

struct ClusterResult {
    ClusterSet clusters;
    std::size_t iterations = 0;
    /// False when max_iters ran out; clusters then come from the last iterate.
    bool converged = false;
};

/// Symmetric weighted adjacency of `ag`, with optional self-loops, scaled so
/// every column sums to one.
StochasticMatrix to_stochastic(const AlignmentGraph& ag, const MclParams& params);

/// Matrix power `m^power`.
StochasticMatrix expand(const StochasticMatrix& m, unsigned power, std::size_t workers = 1);

/// Entrywise power followed by column renormalization.
StochasticMatrix inflate(const StochasticMatrix& m, double power, std::size_t workers = 1);

/// Drops entries below `threshold` except the column maximum (all tied
/// maxima are kept). Only columns that lost entries are renormalized, so a
/// zero threshold returns `m` unchanged.
StochasticMatrix prune(const StochasticMatrix& m, double threshold, std::size_t workers = 1);

/// Largest |a - b| over all positions, treating absent entries as zero.
double max_abs_difference(const StochasticMatrix& a, const StochasticMatrix& b);

/// Reads clusters off an (approximately) idempotent MCL iterate.
///
/// Nodes with positive diagonal are attractors. Attractors that share
/// positive support in any column, including each other's, merge into one
/// cluster. Every other node joins the attractor holding the largest value
/// in its column, ties going to the smaller index. A node whose column has
/// no attractor support stays a singleton.
ClusterSet interpret_clusters(const StochasticMatrix& limit);

/// Expand, inflate, prune until the largest entrywise change drops below
/// `convergence_eps` or `max_iters` is reached.
ClusterResult mcl_cluster(const AlignmentGraph& ag, const MclParams& params);

/// Sum of edge weights with both endpoints inside each cluster.
std::vector<double> intra_cluster_weights(const AlignmentGraph& ag, const ClusterSet& clusters);

/// `#`-prefixed metadata header, then one line of node indices per cluster.
void write_clusters(const ClusterResult& result, const AlignmentGraph& ag, std::ostream& out);

}  // namespace hetalign
