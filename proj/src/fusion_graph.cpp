#include "simfuse/fusion_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "simfuse/fusion.hpp"

namespace simfuse {

namespace {

constexpr double kLambdaFloor = 1e-6;

double node_affinity(QuerySimMode mode, const CombScore& comb, double instance_score) {
    switch (mode) {
        case QuerySimMode::Uniform:
            return 1.0;
        case QuerySimMode::CombSumScore:
            return comb.sum;
        case QuerySimMode::CombMnzScore:
            return static_cast<double>(comb.count) * comb.sum;
        case QuerySimMode::InstanceScore:
            return instance_score;
    }
    return 1.0;
}

}  // namespace

NotConverged::NotConverged(std::size_t iters, double res)
    : std::runtime_error("power iteration did not converge after " + std::to_string(iters) +
                         " iterations (residual " + std::to_string(res) + ")"),
      iterations(iters),
      residual(res) {}

std::vector<GraphNode> build_nodes(const std::vector<NormalizedRunList>& lists,
                                   NodeSetKind kind, QuerySimMode mode) {
    auto comb = comb_scores(lists);

    std::map<std::string, std::uint32_t> list_count;
    for (const auto& list : lists)
        for (const auto& e : list.entries) ++list_count[e.doc_id];

    std::vector<GraphNode> nodes;
    auto add_node = [&](const std::string& doc, std::uint32_t list_index, std::uint32_t rank,
                        std::uint32_t copy, double score) {
        nodes.push_back({static_cast<std::uint32_t>(nodes.size()), doc, list_index, rank, copy,
                         node_affinity(mode, comb[doc], score)});
    };

    for (std::size_t i = 0; i < lists.size(); ++i) {
        for (const auto& e : lists[i].entries) {
            auto list_index = static_cast<std::uint32_t>(i);
            if (kind == NodeSetKind::Set) {
                bool seen = std::any_of(nodes.begin(), nodes.end(),
                                        [&](const GraphNode& n) { return n.doc_id == e.doc_id; });
                if (!seen) add_node(e.doc_id, list_index, e.rank, 0, e.norm_score);
            } else if (kind == NodeSetKind::Bag) {
                add_node(e.doc_id, list_index, e.rank, 0, e.norm_score);
            } else {
                std::uint32_t copies = list_count[e.doc_id];
                for (std::uint32_t c = 0; c < copies; ++c)
                    add_node(e.doc_id, list_index, e.rank, c, e.norm_score);
            }
        }
    }
    return nodes;
}

FusionGraph::FusionGraph(std::vector<GraphNode> nodes, const SimilarityMatrix& sims,
                         double lambda, std::size_t alpha)
    : nodes_(std::move(nodes)),
      sims_(&sims),
      lambda_(lambda),
      lambda_eff_(std::max(lambda, kLambdaFloor)),
      alpha_(alpha) {
    if (nodes_.empty()) throw std::invalid_argument("graph needs at least one node");
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0,1]");
    if (alpha == 0) throw std::invalid_argument("alpha must be at least 1");

    node_doc_index_.reserve(nodes_.size());
    for (const auto& n : nodes_) {
        auto idx = sims_->index_of(n.doc_id);
        if (!idx) throw MissingDocumentText(n.doc_id);
        node_doc_index_.push_back(*idx);
    }

    nbhd_ = build_neighborhoods(node_doc_index_, *sims_, alpha_);

    row_sums_.assign(nodes_.size(), 0.0);
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        for (std::uint32_t u : nbhd_.neighbors[v])
            row_sums_[v] += sims_->at(node_doc_index_[v], node_doc_index_[u]);

    double affinity_total = 0.0;
    for (const auto& n : nodes_) {
        if (n.query_sim < 0.0) throw std::invalid_argument("negative query affinity");
        affinity_total += n.query_sim;
    }
    if (affinity_total <= 0.0) throw std::invalid_argument("query affinities sum to zero");
    teleport_.reserve(nodes_.size());
    for (const auto& n : nodes_) teleport_.push_back(n.query_sim / affinity_total);
}

double FusionGraph::base_weight(std::uint32_t v1, std::uint32_t v2) const {
    const auto& nbrs = nbhd_.neighbors[v1];
    if (std::find(nbrs.begin(), nbrs.end(), v2) == nbrs.end()) return 0.0;
    return sims_->at(node_doc_index_[v1], node_doc_index_[v2]);
}

std::vector<double> FusionGraph::transition_row(std::uint32_t v1) const {
    std::size_t n = nodes_.size();
    std::vector<double> row(n, 0.0);
    double structural = 1.0 - lambda_eff_;
    if (row_sums_[v1] > 0.0) {
        for (std::uint32_t u : nbhd_.neighbors[v1])
            row[u] = structural * sims_->at(node_doc_index_[v1], node_doc_index_[u]) / row_sums_[v1];
    } else {
        for (std::size_t u = 0; u < n; ++u) row[u] = structural / static_cast<double>(n);
    }
    for (std::size_t u = 0; u < n; ++u) row[u] += lambda_eff_ * teleport_[u];
    return row;
}

PrestigeVector FusionGraph::stationary_distribution(double tol, std::size_t max_iterations) const {
    std::size_t n = nodes_.size();
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    double structural = 1.0 - lambda_eff_;
    double residual = 0.0;

    for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            if (row_sums_[v] <= 0.0) {
                dangling += p[v];
                continue;
            }
            double share = p[v] / row_sums_[v];
            for (std::uint32_t u : nbhd_.neighbors[v])
                next[u] += share * sims_->at(node_doc_index_[v], node_doc_index_[u]);
        }
        double uniform_mass = dangling / static_cast<double>(n);
        for (std::size_t u = 0; u < n; ++u)
            next[u] = lambda_eff_ * teleport_[u] + structural * (next[u] + uniform_mass);

        residual = 0.0;
        for (std::size_t u = 0; u < n; ++u) residual += std::abs(next[u] - p[u]);
        p.swap(next);
        if (residual < tol) return {std::move(p), iter, residual};
    }
    throw NotConverged(max_iterations, residual);
}

void FusionGraph::dump(std::ostream& out) const {
    out << "nodes " << nodes_.size() << " lambda " << lambda_ << " alpha " << alpha_ << '\n';
    for (const auto& node : nodes_) {
        out << "node " << node.node_id << ' ' << node.doc_id << " list " << node.list_index
            << " rank " << node.rank << " copy " << node.copy_index << " qsim " << node.query_sim
            << '\n';
    }
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        for (std::uint32_t u : nbhd_.neighbors[v])
            out << "edge " << v << ' ' << u << ' '
                << sims_->at(node_doc_index_[v], node_doc_index_[u]) << '\n';
}

}  // namespace simfuse
