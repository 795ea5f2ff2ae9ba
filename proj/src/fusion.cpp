#include "simfuse/fusion.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace simfuse {

namespace {

struct MethodInfo {
    FusionMethod method;
    std::string_view token;
};

constexpr MethodInfo kMethods[] = {
    {FusionMethod::CombSum, "combsum"},
    {FusionMethod::CombMnz, "combmnz"},
    {FusionMethod::Borda, "borda"},
    {FusionMethod::RoundRobin, "roundrobin"},
    {FusionMethod::SetUni, "setuni"},
    {FusionMethod::SetSum, "setsum"},
    {FusionMethod::SetMnz, "setmnz"},
    {FusionMethod::BagUni, "baguni"},
    {FusionMethod::BagSum, "bagsum"},
    {FusionMethod::BagDupUni, "bagdupuni"},
    {FusionMethod::BagDupMnz, "bagdupmnz"},
};

FusedRanking ranking_from_scores(std::string query_id, std::vector<ScoredDoc> docs) {
    sort_ranking(docs);
    return {std::move(query_id), std::move(docs)};
}

std::string query_of(const std::vector<NormalizedRunList>& lists) {
    return lists.empty() ? std::string() : lists.front().query_id;
}

FusedRanking fold_prestige(const std::vector<GraphNode>& nodes, const PrestigeVector& pv,
                           std::string query_id) {
    std::vector<ScoredDoc> docs;
    std::unordered_map<std::string, std::size_t> position;
    for (const auto& node : nodes) {
        auto [it, inserted] = position.try_emplace(node.doc_id, docs.size());
        if (inserted)
            docs.push_back({node.doc_id, pv.values[node.node_id]});
        else
            docs[it->second].score += pv.values[node.node_id];
    }
    return ranking_from_scores(std::move(query_id), std::move(docs));
}

FusedRanking run_graph(std::vector<GraphNode> nodes, const SimilarityMatrix& sims,
                       double lambda, std::size_t alpha, std::string query_id) {
    FusionGraph graph(std::move(nodes), sims, lambda, alpha);
    PrestigeVector pv = graph.stationary_distribution();
    return fold_prestige(graph.nodes(), pv, std::move(query_id));
}

}  // namespace

std::string_view method_token(FusionMethod method) {
    for (const auto& info : kMethods)
        if (info.method == method) return info.token;
    return "";
}

std::optional<FusionMethod> parse_method(std::string_view token) {
    for (const auto& info : kMethods)
        if (info.token == token) return info.method;
    return std::nullopt;
}

const std::vector<FusionMethod>& all_methods() {
    static const std::vector<FusionMethod> methods = [] {
        std::vector<FusionMethod> ms;
        for (const auto& info : kMethods) ms.push_back(info.method);
        return ms;
    }();
    return methods;
}

bool is_graph_method(FusionMethod method) {
    switch (method) {
        case FusionMethod::CombSum:
        case FusionMethod::CombMnz:
        case FusionMethod::Borda:
        case FusionMethod::RoundRobin:
            return false;
        default:
            return true;
    }
}

NodeSetKind method_node_kind(FusionMethod method) {
    switch (method) {
        case FusionMethod::SetUni:
        case FusionMethod::SetSum:
        case FusionMethod::SetMnz:
            return NodeSetKind::Set;
        case FusionMethod::BagUni:
        case FusionMethod::BagSum:
            return NodeSetKind::Bag;
        case FusionMethod::BagDupUni:
        case FusionMethod::BagDupMnz:
            return NodeSetKind::BagDup;
        default:
            throw std::invalid_argument("not a graph method");
    }
}

QuerySimMode method_query_sim(FusionMethod method) {
    switch (method) {
        case FusionMethod::SetUni:
        case FusionMethod::BagUni:
        case FusionMethod::BagDupUni:
            return QuerySimMode::Uniform;
        case FusionMethod::SetSum:
            return QuerySimMode::CombSumScore;
        case FusionMethod::SetMnz:
            return QuerySimMode::CombMnzScore;
        case FusionMethod::BagSum:
        case FusionMethod::BagDupMnz:
            return QuerySimMode::InstanceScore;
        default:
            throw std::invalid_argument("not a graph method");
    }
}

std::map<std::string, CombScore> comb_scores(const std::vector<NormalizedRunList>& lists) {
    std::map<std::string, CombScore> scores;
    for (const auto& list : lists) {
        for (const auto& e : list.entries) {
            auto& cs = scores[e.doc_id];
            cs.sum += e.norm_score;
            cs.count += 1;
        }
    }
    return scores;
}

FusedRanking comb_sum(const std::vector<NormalizedRunList>& lists) {
    std::vector<ScoredDoc> docs;
    for (const auto& [doc, cs] : comb_scores(lists)) docs.push_back({doc, cs.sum});
    return ranking_from_scores(query_of(lists), std::move(docs));
}

FusedRanking comb_mnz(const std::vector<NormalizedRunList>& lists) {
    std::vector<ScoredDoc> docs;
    for (const auto& [doc, cs] : comb_scores(lists))
        docs.push_back({doc, static_cast<double>(cs.count) * cs.sum});
    return ranking_from_scores(query_of(lists), std::move(docs));
}

FusedRanking borda(const std::vector<RunList>& lists) {
    std::map<std::string, double> scores;
    for (const auto& list : lists) {
        for (const auto& e : list.entries) {
            std::size_t not_higher = 0;
            for (const auto& other : list.entries)
                if (other.score <= e.score) ++not_higher;
            scores[e.doc_id] += static_cast<double>(not_higher);
        }
    }
    std::vector<ScoredDoc> docs;
    for (const auto& [doc, score] : scores) docs.push_back({doc, score});
    std::string query_id = lists.empty() ? std::string() : lists.front().query_id;
    return ranking_from_scores(std::move(query_id), std::move(docs));
}

FusedRanking round_robin(const std::vector<RunList>& lists) {
    FusedRanking out;
    out.query_id = lists.empty() ? std::string() : lists.front().query_id;
    std::unordered_set<std::string> emitted;
    std::size_t longest = 0;
    for (const auto& list : lists) longest = std::max(longest, list.entries.size());
    for (std::size_t depth = 0; depth < longest; ++depth) {
        for (const auto& list : lists) {
            if (depth >= list.entries.size()) continue;
            const auto& doc = list.entries[depth].doc_id;
            if (!emitted.insert(doc).second) continue;
            out.docs.push_back({doc, 1.0 / static_cast<double>(out.docs.size() + 1)});
        }
    }
    return out;
}

FusedRanking graph_fuse(const std::vector<NormalizedRunList>& lists, FusionMethod method,
                        double lambda, std::size_t alpha, const SimilarityMatrix& sims) {
    if (!is_graph_method(method)) throw std::invalid_argument("not a graph method");
    auto nodes = build_nodes(lists, method_node_kind(method), method_query_sim(method));
    return run_graph(std::move(nodes), sims, lambda, alpha, query_of(lists));
}

FusedRanking set_graph_fuse(const std::vector<NormalizedRunList>& lists,
                            const std::function<double(const std::string&)>& doc_affinity,
                            double lambda, std::size_t alpha, const SimilarityMatrix& sims) {
    auto nodes = build_nodes(lists, NodeSetKind::Set, QuerySimMode::Uniform);
    for (auto& node : nodes) node.query_sim = doc_affinity(node.doc_id);
    return run_graph(std::move(nodes), sims, lambda, alpha, query_of(lists));
}

FusedRanking fuse(const std::vector<RunList>& lists, FusionMethod method, double lambda,
                  std::size_t alpha, const SimilarityMatrix* sims) {
    if (lists.empty()) throw std::invalid_argument("no lists to fuse");
    switch (method) {
        case FusionMethod::Borda:
            return borda(lists);
        case FusionMethod::RoundRobin:
            return round_robin(lists);
        default:
            break;
    }
    std::vector<NormalizedRunList> normalized;
    normalized.reserve(lists.size());
    for (const auto& list : lists) normalized.push_back(normalize_scores(list));
    if (method == FusionMethod::CombSum) return comb_sum(normalized);
    if (method == FusionMethod::CombMnz) return comb_mnz(normalized);
    if (sims == nullptr) throw std::invalid_argument("graph methods need a similarity matrix");
    return graph_fuse(normalized, method, lambda, alpha, *sims);
}

}  // namespace simfuse
