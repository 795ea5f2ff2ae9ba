#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simfuse/fusion_graph.hpp"
#include "simfuse/ranking.hpp"
#include "simfuse/runio.hpp"
#include "simfuse/similarity.hpp"

namespace simfuse {

enum class FusionMethod {
    CombSum,
    CombMnz,
    Borda,
    RoundRobin,
    SetUni,
    SetSum,
    SetMnz,
    BagUni,
    BagSum,
    BagDupUni,
    BagDupMnz,
};

/// Token used on the command line and in reports (combsum, combmnz,
/// borda, roundrobin, setuni, setsum, setmnz, baguni, bagsum,
/// bagdupuni, bagdupmnz).
std::string_view method_token(FusionMethod method);
std::optional<FusionMethod> parse_method(std::string_view token);
const std::vector<FusionMethod>& all_methods();

/// True for the graph-based methods (the last seven).
bool is_graph_method(FusionMethod method);
NodeSetKind method_node_kind(FusionMethod method);
QuerySimMode method_query_sim(FusionMethod method);

/// Per-document aggregate over normalized lists.
struct CombScore {
    double sum = 0.0;
    std::uint32_t count = 0;
};

/// Sum of normalized scores and occurrence count per document, over all
/// lists. Keys are ordered so downstream accumulation is reproducible.
std::map<std::string, CombScore> comb_scores(const std::vector<NormalizedRunList>& lists);

FusedRanking comb_sum(const std::vector<NormalizedRunList>& lists);
FusedRanking comb_mnz(const std::vector<NormalizedRunList>& lists);

/// Positional fusion: each list awards a document the number of entries
/// ranked at or below it (by score), absent documents contribute 0.
FusedRanking borda(const std::vector<RunList>& lists);

/// Interleaves lists rank by rank in list order, skipping documents
/// already emitted; scores are 1/position of emission.
FusedRanking round_robin(const std::vector<RunList>& lists);

/// Runs one of the seven graph methods: builds nodes, computes the
/// stationary distribution, folds node prestige back onto documents
/// (sum over a document's nodes for bag kinds).
FusedRanking graph_fuse(const std::vector<NormalizedRunList>& lists, FusionMethod method,
                        double lambda, std::size_t alpha, const SimilarityMatrix& sims);

/// Set-node graph with caller-supplied query affinity per document,
/// letting any scoring function take the place of the built-in ones.
FusedRanking set_graph_fuse(const std::vector<NormalizedRunList>& lists,
                            const std::function<double(const std::string&)>& doc_affinity,
                            double lambda, std::size_t alpha, const SimilarityMatrix& sims);

/// Dispatches on is_graph_method; sims may be null for the first four.
FusedRanking fuse(const std::vector<RunList>& lists, FusionMethod method, double lambda,
                  std::size_t alpha, const SimilarityMatrix* sims);

}  // namespace simfuse
