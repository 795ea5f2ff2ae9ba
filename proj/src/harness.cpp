#include "simfuse/harness.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

namespace simfuse {

namespace {

void validate_grid(const SweepGrid& grid) {
    if (grid.lambda_values.empty() || grid.alpha_values.empty())
        throw std::invalid_argument("grid must not be empty");
    if (grid.k == 0) throw std::invalid_argument("k must be at least 1");
    for (double l : grid.lambda_values)
        if (l < 0.0 || l > 1.0) throw std::invalid_argument("lambda values must lie in [0,1]");
    for (std::size_t a : grid.alpha_values)
        if (a == 0) throw std::invalid_argument("alpha values must be at least 1");
}

// Uniform draw from [0, bound) by rejection, identical on every
// platform (std::uniform_int_distribution is not portable).
std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
    std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::vector<double> point_means(const GridEvaluation& ge, double QueryMetrics::* field) {
    std::vector<double> means(ge.points.size(), 0.0);
    auto q = static_cast<double>(ge.query_ids.size());
    for (std::size_t p = 0; p < ge.points.size(); ++p) {
        double sum = 0.0;
        for (const auto& qm : ge.metrics[p]) sum += qm.*field;
        means[p] = sum / q;
    }
    return means;
}

}  // namespace

SweepGrid SweepGrid::defaults() {
    SweepGrid grid;
    for (int i = 1; i <= 10; ++i) grid.lambda_values.push_back(static_cast<double>(i) / 10.0);
    grid.alpha_values = {5, 10, 20, 30, 40, 50};
    grid.k = 20;
    return grid;
}

Track Track::assemble(std::vector<RunSet> runs, QrelSet qrels) {
    Track track;
    track.qrels = std::move(qrels);
    std::set<std::string> queries;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string tag = "run" + std::to_string(i + 1);
        for (const auto& [qid, list] : runs[i]) {
            queries.insert(qid);
            if (!list.run_tag.empty()) tag = list.run_tag;
        }
        track.run_tags.push_back(std::move(tag));
    }
    track.runs = std::move(runs);
    track.query_ids.assign(queries.begin(), queries.end());
    return track;
}

std::vector<RunList> Track::lists_for(const std::string& query_id) const {
    std::vector<RunList> lists;
    for (const auto& run : runs) {
        auto it = run.find(query_id);
        if (it != run.end() && !it->second.entries.empty()) lists.push_back(it->second);
    }
    return lists;
}

FusionEngine::FusionEngine(const TokenizedCorpus* corpus, SmoothingParams smoothing,
                           bool pool_stats, SimilarityCache* cache)
    : corpus_(corpus), smoothing_(smoothing), pool_stats_(pool_stats), cache_(cache) {}

FusionEngine::PreparedQuery FusionEngine::prepare(const std::string& query_id,
                                                  const std::vector<RunList>& lists,
                                                  std::size_t k, bool need_sims) const {
    if (lists.empty()) throw std::invalid_argument("no lists for query " + query_id);
    PreparedQuery q;
    q.query_id = query_id;
    q.truncated.reserve(lists.size());
    for (const auto& list : lists) q.truncated.push_back(truncate(list, k));
    q.normalized.reserve(lists.size());
    for (const auto& list : q.truncated) q.normalized.push_back(normalize_scores(list));

    if (need_sims) {
        if (corpus_ == nullptr) throw std::invalid_argument("graph fusion needs a corpus");
        std::vector<std::string> pool;
        std::set<std::string> seen;
        for (const auto& list : q.truncated)
            for (const auto& e : list.entries)
                if (seen.insert(e.doc_id).second) pool.push_back(e.doc_id);

        if (pool_stats_) {
            TokenizedCorpus pooled;
            std::vector<const TermVector*> refs;
            for (const auto& id : pool) {
                auto it = corpus_->vectors.find(id);
                if (it == corpus_->vectors.end()) throw MissingDocumentText(id);
                auto [slot, inserted] = pooled.vectors.emplace(id, it->second);
                (void)inserted;
                refs.push_back(&slot->second);
            }
            pooled.stats = build_collection_stats(refs);
            q.sims = SimilarityMatrix::compute(pool, pooled, smoothing_, cache_);
        } else {
            q.sims = SimilarityMatrix::compute(pool, *corpus_, smoothing_, cache_);
        }
        q.has_sims = true;
    }
    return q;
}

FusedRanking FusionEngine::run(const PreparedQuery& q, FusionMethod method, double lambda,
                               std::size_t alpha) const {
    return fuse(q.truncated, method, lambda, alpha, q.has_sims ? &q.sims : nullptr);
}

GridEvaluation evaluate_grid(const FusionEngine& engine, const Track& track,
                             FusionMethod method, const SweepGrid& grid) {
    validate_grid(grid);
    GridEvaluation ge;
    bool graph = is_graph_method(method);
    if (graph) {
        for (double lambda : grid.lambda_values)
            for (std::size_t alpha : grid.alpha_values) ge.points.push_back({lambda, alpha});
    } else {
        // Parameterless methods evaluate as a single degenerate point.
        ge.points.push_back({0.0, 0});
    }
    ge.metrics.assign(ge.points.size(), {});

    for (const auto& query_id : track.query_ids) {
        auto lists = track.lists_for(query_id);
        if (lists.empty()) continue;
        ge.query_ids.push_back(query_id);
        auto prepared = engine.prepare(query_id, lists, grid.k, graph);
        for (std::size_t p = 0; p < ge.points.size(); ++p) {
            auto ranking = engine.run(prepared, method, ge.points[p].lambda, ge.points[p].alpha);
            ge.metrics[p].push_back({precision_at(ranking, track.qrels, 5),
                                     precision_at(ranking, track.qrels, 10),
                                     average_precision_at_k(ranking, track.qrels, grid.k)});
        }
    }
    return ge;
}

std::size_t select_grid_point(const std::vector<GridPoint>& points,
                              const std::vector<double>& mean_p5,
                              const std::vector<double>& mean_p10) {
    if (points.empty()) throw std::invalid_argument("no grid points");
    if (mean_p5.size() != points.size() || mean_p10.size() != points.size())
        throw std::invalid_argument("metric vectors must match the grid");
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        bool better = false;
        if (mean_p5[i] != mean_p5[best]) {
            better = mean_p5[i] > mean_p5[best];
        } else if (mean_p10[i] != mean_p10[best]) {
            better = mean_p10[i] < mean_p10[best];
        } else if (points[i].lambda != points[best].lambda) {
            better = points[i].lambda < points[best].lambda;
        } else if (points[i].alpha != points[best].alpha) {
            better = points[i].alpha < points[best].alpha;
        }
        if (better) best = i;
    }
    return best;
}

SweepResult sweep(const GridEvaluation& ge) {
    if (ge.query_ids.empty()) throw HarnessError("no queries to evaluate");
    auto p5 = point_means(ge, &QueryMetrics::p5);
    auto p10 = point_means(ge, &QueryMetrics::p10);
    auto ap = point_means(ge, &QueryMetrics::ap);

    SweepResult result;
    result.best_index = select_grid_point(ge.points, p5, p10);
    result.best = ge.points[result.best_index];
    result.table.reserve(ge.points.size());
    for (std::size_t p = 0; p < ge.points.size(); ++p)
        result.table.push_back({ge.points[p], p5[p], p10[p], ap[p]});
    return result;
}

CvResult loo_cross_validation(const GridEvaluation& ge) {
    std::size_t q_count = ge.query_ids.size();
    if (q_count < 2) throw TooFewQueries();

    std::vector<double> sum_p5(ge.points.size(), 0.0);
    std::vector<double> sum_p10(ge.points.size(), 0.0);
    for (std::size_t p = 0; p < ge.points.size(); ++p) {
        for (const auto& qm : ge.metrics[p]) {
            sum_p5[p] += qm.p5;
            sum_p10[p] += qm.p10;
        }
    }

    CvResult result;
    auto rest = static_cast<double>(q_count - 1);
    std::vector<double> excl_p5(ge.points.size());
    std::vector<double> excl_p10(ge.points.size());
    for (std::size_t q = 0; q < q_count; ++q) {
        for (std::size_t p = 0; p < ge.points.size(); ++p) {
            excl_p5[p] = (sum_p5[p] - ge.metrics[p][q].p5) / rest;
            excl_p10[p] = (sum_p10[p] - ge.metrics[p][q].p10) / rest;
        }
        std::size_t chosen = select_grid_point(ge.points, excl_p5, excl_p10);
        result.folds.push_back({ge.query_ids[q], ge.points[chosen], ge.metrics[chosen][q]});
        result.mean.p5 += ge.metrics[chosen][q].p5;
        result.mean.p10 += ge.metrics[chosen][q].p10;
        result.mean.ap += ge.metrics[chosen][q].ap;
    }
    auto n = static_cast<double>(q_count);
    result.mean.p5 /= n;
    result.mean.p10 /= n;
    result.mean.ap /= n;
    return result;
}

OracleResult per_query_upper_bound(const GridEvaluation& ge) {
    if (ge.query_ids.empty()) throw HarnessError("no queries to evaluate");
    OracleResult result;
    std::vector<double> p5(ge.points.size());
    std::vector<double> p10(ge.points.size());
    for (std::size_t q = 0; q < ge.query_ids.size(); ++q) {
        for (std::size_t p = 0; p < ge.points.size(); ++p) {
            p5[p] = ge.metrics[p][q].p5;
            p10[p] = ge.metrics[p][q].p10;
        }
        std::size_t chosen = select_grid_point(ge.points, p5, p10);
        result.choices.push_back({ge.query_ids[q], ge.points[chosen], ge.metrics[chosen][q]});
        result.mean.p5 += ge.metrics[chosen][q].p5;
        result.mean.p10 += ge.metrics[chosen][q].p10;
        result.mean.ap += ge.metrics[chosen][q].ap;
    }
    auto n = static_cast<double>(ge.query_ids.size());
    result.mean.p5 /= n;
    result.mean.p10 /= n;
    result.mean.ap /= n;
    return result;
}

std::vector<RunRanking> rank_runs_by_map(const std::vector<const RunSet*>& runs,
                                         const std::vector<std::string>& tags,
                                         const QrelSet& qrels, std::size_t k) {
    if (runs.size() != tags.size())
        throw std::invalid_argument("one tag per run required");
    std::vector<std::string> eligible;
    for (const auto& [qid, docs] : qrels.judgments)
        if (qrels.relevant_count(qid) > 0) eligible.push_back(qid);

    std::vector<RunRanking> ranked;
    ranked.reserve(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        double sum = 0.0;
        for (const auto& qid : eligible) {
            auto it = runs[i]->find(qid);
            if (it == runs[i]->end()) continue;
            sum += average_precision_at_k(to_ranking(it->second), qrels, k);
        }
        double map = eligible.empty() ? 0.0 : sum / static_cast<double>(eligible.size());
        ranked.push_back({i, tags[i], map});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RunRanking& a, const RunRanking& b) {
        if (a.map != b.map) return a.map > b.map;
        if (a.tag != b.tag) return a.tag < b.tag;
        return a.index < b.index;
    });
    return ranked;
}

std::vector<std::array<std::size_t, 3>> random_triplets(const std::vector<RunRanking>& ranked,
                                                        std::uint64_t seed,
                                                        std::size_t samples) {
    std::size_t n = ranked.size();
    if (n < 3) throw HarnessError("triplet sampling needs at least 3 runs");
    std::mt19937_64 rng(seed);
    std::vector<std::array<std::size_t, 3>> triples;
    triples.reserve(samples);
    std::vector<std::size_t> positions(n);
    for (std::size_t s = 0; s < samples; ++s) {
        std::iota(positions.begin(), positions.end(), 0);
        std::array<std::size_t, 3> picked{};
        for (std::size_t t = 0; t < 3; ++t) {
            std::size_t j = t + static_cast<std::size_t>(
                                    bounded_rand(rng, static_cast<std::uint64_t>(n - t)));
            std::swap(positions[t], positions[j]);
            picked[t] = positions[t];
        }
        std::sort(picked.begin(), picked.end());
        triples.push_back({ranked[picked[0]].index, ranked[picked[1]].index,
                           ranked[picked[2]].index});
    }
    return triples;
}

}  // namespace simfuse
