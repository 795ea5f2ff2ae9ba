#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "simfuse/runio.hpp"
#include "simfuse/similarity.hpp"

namespace simfuse {

/// How retrieved documents become graph nodes.
enum class NodeSetKind {
    /// One node per distinct document.
    Set,
    /// One node per (list, document) occurrence.
    Bag,
    /// Each occurrence duplicated once per occurrence of its document,
    /// so a document retrieved by n lists yields n*n nodes.
    BagDup,
};

/// Query affinity attached to each node.
enum class QuerySimMode {
    Uniform,
    CombSumScore,
    CombMnzScore,
    InstanceScore,
};

struct GraphNode {
    std::uint32_t node_id;
    std::string doc_id;
    /// Index of the run list the underlying occurrence came from.
    std::uint32_t list_index;
    /// 1-based rank of that occurrence. For Set nodes, the first
    /// occurrence in list order.
    std::uint32_t rank;
    /// Distinguishes BagDup copies of one occurrence; 0 otherwise.
    std::uint32_t copy_index;
    /// Unnormalized query affinity of the node.
    double query_sim;
};

/// Materializes graph nodes from normalized lists. Node ids are assigned
/// in construction order: lists in input order, entries in rank order,
/// copies in copy order (Set nodes: first occurrence wins, later
/// occurrences of the same document add nothing).
std::vector<GraphNode> build_nodes(const std::vector<NormalizedRunList>& lists,
                                   NodeSetKind kind, QuerySimMode mode);

/// Stationary distribution over graph nodes, indexed by node id.
struct PrestigeVector {
    std::vector<double> values;
    std::size_t iterations = 0;
    double residual = 0.0;
};

struct NotConverged : std::runtime_error {
    std::size_t iterations;
    double residual;
    NotConverged(std::size_t iters, double res);
};

/// Directed similarity graph over retrieval nodes with query-biased
/// transition smoothing. Edges connect each node to its alpha nearest
/// neighbours by document similarity; transition weights mix normalized
/// edge weight with normalized query affinity via lambda.
class FusionGraph {
  public:
    /// The matrix must outlive the graph. lambda is clamped from below
    /// to 1e-6 so the chain stays irreducible.
    FusionGraph(std::vector<GraphNode> nodes, const SimilarityMatrix& sims,
                double lambda, std::size_t alpha);

    const std::vector<GraphNode>& nodes() const { return nodes_; }
    const NeighborhoodIndex& neighborhoods() const { return nbhd_; }
    double lambda() const { return lambda_; }
    double effective_lambda() const { return lambda_eff_; }
    std::size_t alpha() const { return alpha_; }

    /// Raw edge weight wt(v1 -> v2): similarity of the documents when v2
    /// is in v1's neighbourhood, else 0.
    double base_weight(std::uint32_t v1, std::uint32_t v2) const;

    /// Full transition probability row of v1. Rows sum to 1; a node with
    /// no outgoing edges spreads its structural mass uniformly.
    std::vector<double> transition_row(std::uint32_t v1) const;

    /// Power iteration from the uniform vector until the L1 change drops
    /// below tol, throwing NotConverged after max_iterations.
    PrestigeVector stationary_distribution(double tol = 1e-10,
                                           std::size_t max_iterations = 200) const;

    /// Human-readable dump of nodes, neighbourhoods and transition rows.
    void dump(std::ostream& out) const;

  private:
    std::vector<GraphNode> nodes_;
    const SimilarityMatrix* sims_;
    std::vector<std::size_t> node_doc_index_;
    NeighborhoodIndex nbhd_;
    std::vector<double> row_sums_;
    std::vector<double> teleport_;
    double lambda_ = 0.0;
    double lambda_eff_ = 0.0;
    std::size_t alpha_ = 0;
};

}  // namespace simfuse
