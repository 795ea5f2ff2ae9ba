#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simfuse/ranking.hpp"
#include "simfuse/runio.hpp"

namespace simfuse {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fraction of the top n positions holding relevant documents. The
/// denominator is always n, also when fewer documents are ranked.
double precision_at(const FusedRanking& ranking, const QrelSet& qrels, std::size_t n);

/// Non-interpolated average precision over the top k: sum of precision
/// at each relevant rank, divided by the total number of judged
/// relevant documents for the query. 0 when the query has none.
double average_precision_at_k(const FusedRanking& ranking, const QrelSet& qrels, std::size_t k);

struct QueryMetrics {
    double p5 = 0.0;
    double p10 = 0.0;
    double ap = 0.0;
};

struct EvalReport {
    std::map<std::string, QueryMetrics> per_query;
    QueryMetrics mean;
    std::size_t query_count = 0;
};

/// Evaluates one ranking per query; means average over the rankings
/// given (queries with no judged relevant documents contribute zeros).
EvalReport evaluate(const std::vector<FusedRanking>& rankings, const QrelSet& qrels,
                    std::size_t k);

struct SignificanceResult {
    double p_value = 1.0;
    /// Pairs remaining after zero differences are dropped.
    std::size_t n_effective = 0;
    /// True when the exact signed-rank distribution was used.
    bool exact = false;
    bool significant_95 = false;
    bool significant_bonferroni = false;
};

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero
/// differences are dropped; ties share averaged ranks. Exact
/// distribution up to 25 effective pairs, normal approximation with
/// continuity and tie corrections above. All-zero differences yield
/// p = 1 over zero pairs. The corrected flag tests at
/// 0.05 / correction_factor.
SignificanceResult wilcoxon_signed_rank(const std::vector<double>& a,
                                        const std::vector<double>& b,
                                        double correction_factor = 4.0);

/// Share of judged documents by how many lists retrieved them.
struct OverlapReport {
    std::size_t list_count = 0;
    /// relevant_pct[m-1]: percentage of relevant docs retrieved by
    /// exactly m lists, among those retrieved by at least one.
    std::vector<double> relevant_pct;
    std::vector<double> nonrelevant_pct;
    std::size_t relevant_total = 0;
    std::size_t nonrelevant_total = 0;
};

/// Multiplicity distribution of the documents of one query's lists
/// (typically three), already truncated by the caller.
OverlapReport overlap_analysis(const std::vector<RunList>& lists, const QrelSet& qrels);

/// Same distribution pooled over queries: (query, doc) pairs are
/// counted across all groups before percentages are taken. Every group
/// must hold the same number of lists.
OverlapReport overlap_analysis_pooled(const std::vector<std::vector<RunList>>& per_query_lists,
                                      const QrelSet& qrels);

/// Percentage of relevant documents retrieved by exactly one list when
/// every list is cut to depth k, for each k given (in input order).
std::vector<std::pair<std::size_t, double>> singleton_relevant_curve(
    const std::vector<std::vector<RunList>>& per_query_lists, const QrelSet& qrels,
    const std::vector<std::size_t>& k_values);

}  // namespace simfuse
