#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "simfuse/corpus.hpp"
#include "simfuse/eval.hpp"
#include "simfuse/fusion.hpp"
#include "simfuse/runio.hpp"
#include "simfuse/similarity.hpp"

namespace simfuse {

struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooFewQueries : HarnessError {
    TooFewQueries() : HarnessError("cross-validation needs at least two queries") {}
};

struct SweepGrid {
    /// Interpolation weights; 0 is admissible (computed with a 1e-6
    /// floor downstream).
    std::vector<double> lambda_values;
    std::vector<std::size_t> alpha_values;
    std::size_t k = 20;

    static SweepGrid defaults();
};

/// Retrieval runs and judgments assembled for one experiment.
struct Track {
    /// Tag of each run, in input order.
    std::vector<std::string> run_tags;
    std::vector<RunSet> runs;
    QrelSet qrels;
    /// Sorted union of the query ids appearing in any run.
    std::vector<std::string> query_ids;

    static Track assemble(std::vector<RunSet> runs, QrelSet qrels);

    /// The non-empty lists of the given query, in run order.
    std::vector<RunList> lists_for(const std::string& query_id) const;
};

/// Prepares per-query inputs (truncation, normalization, similarity
/// matrices) and runs fusion methods over them. The corpus pointer may
/// be null when only baseline methods are used.
class FusionEngine {
  public:
    FusionEngine(const TokenizedCorpus* corpus, SmoothingParams smoothing,
                 bool pool_stats = false, SimilarityCache* cache = nullptr);

    struct PreparedQuery {
        std::string query_id;
        std::vector<RunList> truncated;
        std::vector<NormalizedRunList> normalized;
        SimilarityMatrix sims;
        bool has_sims = false;
    };

    /// Throws MissingDocumentText when need_sims is set and a pooled doc
    /// has no text.
    PreparedQuery prepare(const std::string& query_id, const std::vector<RunList>& lists,
                          std::size_t k, bool need_sims) const;

    FusedRanking run(const PreparedQuery& q, FusionMethod method, double lambda,
                     std::size_t alpha) const;

  private:
    const TokenizedCorpus* corpus_;
    SmoothingParams smoothing_;
    bool pool_stats_;
    SimilarityCache* cache_;
};

struct GridPoint {
    double lambda = 0.0;
    std::size_t alpha = 0;
};

/// Per-query metrics of every grid point, the raw material for sweeps,
/// cross-validation and oracle selection.
struct GridEvaluation {
    /// Lambda-major order: all alphas of the first lambda first.
    std::vector<GridPoint> points;
    /// Queries actually evaluated (had at least one non-empty list).
    std::vector<std::string> query_ids;
    /// metrics[point][query].
    std::vector<std::vector<QueryMetrics>> metrics;
};

GridEvaluation evaluate_grid(const FusionEngine& engine, const Track& track,
                             FusionMethod method, const SweepGrid& grid);

/// Index of the winning point: max mean p@5, then min mean p@10, then
/// smallest lambda, then smallest alpha. mean_p5/mean_p10 are parallel
/// to points.
std::size_t select_grid_point(const std::vector<GridPoint>& points,
                              const std::vector<double>& mean_p5,
                              const std::vector<double>& mean_p10);

struct GridCell {
    GridPoint point;
    double mean_p5 = 0.0;
    double mean_p10 = 0.0;
    double mean_ap = 0.0;
};

struct SweepResult {
    GridPoint best;
    std::size_t best_index = 0;
    std::vector<GridCell> table;
};

SweepResult sweep(const GridEvaluation& ge);

struct CvFold {
    std::string query_id;
    GridPoint chosen;
    QueryMetrics held_out;
};

struct CvResult {
    std::vector<CvFold> folds;
    QueryMetrics mean;
};

/// Leave-one-out: parameters for each query are selected on the other
/// queries with the sweep tie-break rule, then applied to the held-out
/// query. Throws TooFewQueries below two queries.
CvResult loo_cross_validation(const GridEvaluation& ge);

struct OracleChoice {
    std::string query_id;
    GridPoint chosen;
    QueryMetrics metrics;
};

struct OracleResult {
    std::vector<OracleChoice> choices;
    QueryMetrics mean;
};

/// Per-query best grid point by p@5 (ties: min p@10, then smallest
/// lambda, alpha); an upper bound on any single-point selection.
OracleResult per_query_upper_bound(const GridEvaluation& ge);

struct RunRanking {
    /// Position in the input sequence.
    std::size_t index = 0;
    std::string tag;
    double map = 0.0;
};

/// All runs ordered by mean AP@k descending, ties by tag ascending.
/// The mean is over the qrels queries with at least one relevant doc;
/// queries missing from a run score 0.
std::vector<RunRanking> rank_runs_by_map(const std::vector<const RunSet*>& runs,
                                         const std::vector<std::string>& tags,
                                         const QrelSet& qrels, std::size_t k);

/// Run indices of each sampled triple, ordered best-first by the
/// ranking given (sampling is uniform without replacement within a
/// triple; triples may repeat across samples). Deterministic in the
/// seed across platforms.
std::vector<std::array<std::size_t, 3>> random_triplets(const std::vector<RunRanking>& ranked,
                                                        std::uint64_t seed,
                                                        std::size_t samples);

}  // namespace simfuse
