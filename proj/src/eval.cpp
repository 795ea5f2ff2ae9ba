#include "simfuse/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

namespace simfuse {

namespace {

// 1-based doubled ranks (first + last of each tie group), so average
// ranks stay exact integers when doubled.
std::vector<std::int64_t> doubled_ranks(const std::vector<double>& abs_diffs) {
    std::size_t n = abs_diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_diffs[a] < abs_diffs[b]; });
    std::vector<std::int64_t> ranks2(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_diffs[order[j + 1]] == abs_diffs[order[i]]) ++j;
        auto doubled = static_cast<std::int64_t>(i + 1 + j + 1);
        for (std::size_t t = i; t <= j; ++t) ranks2[order[t]] = doubled;
        i = j + 1;
    }
    return ranks2;
}

double exact_two_sided_p(const std::vector<std::int64_t>& ranks2, std::int64_t w2) {
    std::int64_t total2 = 0;
    for (auto r : ranks2) total2 += r;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total2) + 1, 0);
    counts[0] = 1;
    for (auto r : ranks2) {
        for (std::int64_t s = total2; s >= r; --s)
            counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
    }
    std::int64_t lo = std::min(w2, total2 - w2);
    std::int64_t hi = std::max(w2, total2 - w2);
    std::uint64_t favorable = 0;
    for (std::int64_t s = 0; s <= lo; ++s) favorable += counts[static_cast<std::size_t>(s)];
    for (std::int64_t s = hi; s <= total2; ++s) favorable += counts[static_cast<std::size_t>(s)];
    double p = static_cast<double>(favorable) /
               std::pow(2.0, static_cast<double>(ranks2.size()));
    return std::min(p, 1.0);
}

double approx_two_sided_p(const std::vector<std::int64_t>& ranks2, std::int64_t w2) {
    double n = static_cast<double>(ranks2.size());
    double w = static_cast<double>(w2) / 2.0;
    double mean = n * (n + 1.0) / 4.0;

    std::map<std::int64_t, std::size_t> groups;
    for (auto r : ranks2) ++groups[r];
    double tie_term = 0.0;
    for (const auto& [rank, t] : groups) {
        double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if (variance <= 0.0) return 1.0;
    double z = (std::abs(w - mean) - 0.5) / std::sqrt(variance);
    if (z < 0.0) z = 0.0;
    return std::erfc(z / std::sqrt(2.0));
}

}  // namespace

double precision_at(const FusedRanking& ranking, const QrelSet& qrels, std::size_t n) {
    if (n == 0) throw std::invalid_argument("precision cutoff must be positive");
    std::size_t limit = std::min(n, ranking.docs.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < limit; ++i)
        if (qrels.relevant(ranking.query_id, ranking.docs[i].doc_id)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(n);
}

double average_precision_at_k(const FusedRanking& ranking, const QrelSet& qrels, std::size_t k) {
    if (k == 0) throw std::invalid_argument("cutoff must be positive");
    std::size_t total_relevant = qrels.relevant_count(ranking.query_id);
    if (total_relevant == 0) return 0.0;
    std::size_t limit = std::min(k, ranking.docs.size());
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < limit; ++i) {
        if (qrels.relevant(ranking.query_id, ranking.docs[i].doc_id)) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(total_relevant);
}

EvalReport evaluate(const std::vector<FusedRanking>& rankings, const QrelSet& qrels,
                    std::size_t k) {
    EvalReport report;
    for (const auto& r : rankings) {
        QueryMetrics qm{precision_at(r, qrels, 5), precision_at(r, qrels, 10),
                        average_precision_at_k(r, qrels, k)};
        report.per_query[r.query_id] = qm;
        report.mean.p5 += qm.p5;
        report.mean.p10 += qm.p10;
        report.mean.ap += qm.ap;
    }
    report.query_count = rankings.size();
    if (report.query_count > 0) {
        auto n = static_cast<double>(report.query_count);
        report.mean.p5 /= n;
        report.mean.p10 /= n;
        report.mean.ap /= n;
    }
    return report;
}

SignificanceResult wilcoxon_signed_rank(const std::vector<double>& a,
                                        const std::vector<double>& b,
                                        double correction_factor) {
    if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
    if (a.empty()) throw std::invalid_argument("paired samples are empty");
    if (correction_factor <= 0.0) throw std::invalid_argument("correction factor must be positive");

    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }

    SignificanceResult result;
    result.n_effective = diffs.size();
    if (diffs.empty()) {
        // All differences zero: the systems are indistinguishable.
        result.p_value = 1.0;
        result.exact = true;
        return result;
    }

    std::vector<double> abs_diffs(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) abs_diffs[i] = std::abs(diffs[i]);
    auto ranks2 = doubled_ranks(abs_diffs);
    std::int64_t w2 = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i)
        if (diffs[i] > 0.0) w2 += ranks2[i];

    result.exact = diffs.size() <= 25;
    result.p_value =
        result.exact ? exact_two_sided_p(ranks2, w2) : approx_two_sided_p(ranks2, w2);
    result.significant_95 = result.p_value < 0.05;
    result.significant_bonferroni = result.p_value < 0.05 / correction_factor;
    return result;
}

namespace {

struct OverlapCounts {
    std::vector<std::size_t> relevant;
    std::vector<std::size_t> nonrelevant;
};

OverlapCounts count_multiplicities(const std::vector<std::vector<RunList>>& per_query_lists,
                                   const QrelSet& qrels, std::size_t m) {
    OverlapCounts counts{std::vector<std::size_t>(m, 0), std::vector<std::size_t>(m, 0)};
    for (const auto& group : per_query_lists) {
        if (group.empty()) continue;
        if (group.size() != m)
            throw std::invalid_argument("all query groups must hold the same number of lists");
        const std::string& query_id = group.front().query_id;
        std::map<std::string, std::size_t> multiplicity;
        for (const auto& list : group)
            for (const auto& e : list.entries) ++multiplicity[e.doc_id];
        for (const auto& [doc, count] : multiplicity) {
            auto& bucket = qrels.relevant(query_id, doc) ? counts.relevant : counts.nonrelevant;
            ++bucket[count - 1];
        }
    }
    return counts;
}

std::vector<double> to_percentages(const std::vector<std::size_t>& counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    std::vector<double> pct(counts.size(), 0.0);
    if (total == 0) return pct;
    for (std::size_t i = 0; i < counts.size(); ++i)
        pct[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
    return pct;
}

}  // namespace

OverlapReport overlap_analysis_pooled(const std::vector<std::vector<RunList>>& per_query_lists,
                                      const QrelSet& qrels) {
    std::size_t m = 0;
    for (const auto& group : per_query_lists)
        if (!group.empty()) {
            m = group.size();
            break;
        }
    if (m == 0) throw std::invalid_argument("no lists given");

    auto counts = count_multiplicities(per_query_lists, qrels, m);
    OverlapReport report;
    report.list_count = m;
    report.relevant_pct = to_percentages(counts.relevant);
    report.nonrelevant_pct = to_percentages(counts.nonrelevant);
    for (auto c : counts.relevant) report.relevant_total += c;
    for (auto c : counts.nonrelevant) report.nonrelevant_total += c;
    return report;
}

OverlapReport overlap_analysis(const std::vector<RunList>& lists, const QrelSet& qrels) {
    return overlap_analysis_pooled({lists}, qrels);
}

std::vector<std::pair<std::size_t, double>> singleton_relevant_curve(
    const std::vector<std::vector<RunList>>& per_query_lists, const QrelSet& qrels,
    const std::vector<std::size_t>& k_values) {
    std::vector<std::pair<std::size_t, double>> curve;
    curve.reserve(k_values.size());
    for (std::size_t k : k_values) {
        std::vector<std::vector<RunList>> cut;
        cut.reserve(per_query_lists.size());
        for (const auto& group : per_query_lists) {
            std::vector<RunList> g;
            g.reserve(group.size());
            for (const auto& list : group) g.push_back(truncate(list, k));
            cut.push_back(std::move(g));
        }
        auto report = overlap_analysis_pooled(cut, qrels);
        double pct = report.relevant_pct.empty() ? 0.0 : report.relevant_pct.front();
        curve.emplace_back(k, pct);
    }
    return curve;
}

}  // namespace simfuse
