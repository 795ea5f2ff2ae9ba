// Acceptance gate: ten checks, one PASS/FAIL line each; the exit code is
// the number of failures. argv[1] names the CLI binary used by check 10.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "simfuse/corpus.hpp"
#include "simfuse/eval.hpp"
#include "simfuse/fusion.hpp"
#include "simfuse/fusion_graph.hpp"
#include "simfuse/harness.hpp"
#include "simfuse/ranking.hpp"
#include "simfuse/runio.hpp"
#include "simfuse/similarity.hpp"

using namespace simfuse;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

RunList make_list(const std::string& qid,
                  std::vector<std::pair<std::string, double>> scored) {
    RunList list;
    list.query_id = qid;
    std::uint32_t rank = 1;
    for (auto& [doc, score] : scored) list.entries.push_back({doc, rank++, score});
    return list;
}

std::vector<std::string> doc_order(const FusedRanking& r) {
    std::vector<std::string> docs;
    for (const auto& d : r.docs) docs.push_back(d.doc_id);
    return docs;
}

// Random retrieval instance: n_lists lists of depth <= max_len over a doc
// pool, with distinct positive scores.
std::vector<RunList> random_lists(std::mt19937_64& rng, std::size_t n_lists,
                                  std::size_t pool_size, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len_dist(2, max_len);
    std::uniform_real_distribution<double> score_dist(0.1, 10.0);
    std::vector<RunList> lists;
    for (std::size_t l = 0; l < n_lists; ++l) {
        std::vector<std::size_t> pool(pool_size);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::size_t len = std::min(len_dist(rng), pool_size);
        std::vector<double> scores;
        for (std::size_t i = 0; i < len; ++i) scores.push_back(score_dist(rng));
        std::sort(scores.rbegin(), scores.rend());
        std::vector<std::pair<std::string, double>> scored;
        for (std::size_t i = 0; i < len; ++i)
            scored.emplace_back("d" + std::to_string(pool[i]), scores[i]);
        lists.push_back(make_list("q", std::move(scored)));
    }
    return lists;
}

std::vector<std::string> pooled_ids(const std::vector<RunList>& lists) {
    std::vector<std::string> ids;
    for (const auto& list : lists)
        for (const auto& e : list.entries)
            if (std::find(ids.begin(), ids.end(), e.doc_id) == ids.end())
                ids.push_back(e.doc_id);
    return ids;
}

// Synthetic corpus giving every pooled document a short text over a small
// vocabulary, so similarities come from the real language-model path.
TokenizedCorpus random_corpus(std::mt19937_64& rng, const std::vector<std::string>& ids) {
    static const char* vocab[] = {"ant", "bee", "cat", "dog", "eel", "fox",
                                  "gnu", "hen", "ibis", "jay", "kite", "lynx"};
    std::uniform_int_distribution<std::size_t> word(0, 11);
    std::uniform_int_distribution<std::size_t> len(3, 8);
    DocumentMap docs;
    for (const auto& id : ids) {
        std::string text;
        std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) {
            if (i) text += ' ';
            text += vocab[word(rng)];
        }
        docs[id] = {id, text};
    }
    return tokenize_corpus(docs, PipelineConfig{});
}

SimilarityMatrix random_matrix(std::mt19937_64& rng, std::vector<std::string> ids) {
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    std::size_t n = ids.size();
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) values[i * n + j] = dist(rng);
    return SimilarityMatrix::from_values(std::move(ids), std::move(values));
}

std::vector<NormalizedRunList> normalize_all(const std::vector<RunList>& lists) {
    std::vector<NormalizedRunList> out;
    for (const auto& list : lists) out.push_back(normalize_scores(list));
    return out;
}

FusedRanking fold_nodes(const std::vector<GraphNode>& nodes, const PrestigeVector& pv) {
    std::map<std::string, double> scores;
    for (const auto& n : nodes) scores[n.doc_id] += pv.values[n.node_id];
    FusedRanking out{"q", {}};
    for (auto& [doc, score] : scores) out.docs.push_back({doc, score});
    sort_ranking(out.docs);
    return out;
}

// Dense stationary solve of pi = pi * T with sum(pi) = 1 by Gaussian
// elimination with partial pivoting.
std::vector<double> dense_stationary(const FusionGraph& g) {
    std::size_t n = g.nodes().size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t v = 0; v < n; ++v) {
        auto row = g.transition_row(static_cast<std::uint32_t>(v));
        for (std::size_t u = 0; u < n; ++u) a[u][v] = row[u];
    }
    for (std::size_t i = 0; i < n; ++i) a[i][i] -= 1.0;
    for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
    a[n - 1][n] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[col][col] == 0.0) continue;
            double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
    return pi;
}

bool check_equivalences(std::string& detail) {
    auto start = Clock::now();
    std::mt19937_64 rng(20260815);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t pool = 6 + static_cast<std::size_t>(trial % 25);  // <= 30
        auto lists = random_lists(rng, 3, pool, 10);
        auto ids = pooled_ids(lists);
        auto corpus = random_corpus(rng, ids);
        auto sims = SimilarityMatrix::compute(ids, corpus, SmoothingParams{50.0});
        auto normalized = normalize_all(lists);
        std::uniform_int_distribution<std::size_t> alpha_dist(1, 6);
        std::size_t alpha = alpha_dist(rng);

        auto sum_order = doc_order(comb_sum(normalized));
        auto mnz_order = doc_order(comb_mnz(normalized));
        if (doc_order(graph_fuse(normalized, FusionMethod::SetSum, 1.0, alpha, sims)) !=
            sum_order)
            ++mismatches;
        if (doc_order(graph_fuse(normalized, FusionMethod::BagSum, 1.0, alpha, sims)) !=
            sum_order)
            ++mismatches;
        if (doc_order(graph_fuse(normalized, FusionMethod::SetMnz, 1.0, alpha, sims)) !=
            mnz_order)
            ++mismatches;
        if (doc_order(graph_fuse(normalized, FusionMethod::BagDupMnz, 1.0, alpha, sims)) !=
            mnz_order)
            ++mismatches;
    }
    double elapsed = seconds_since(start);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu mismatches over 200 instances, %.1f s",
                  mismatches, elapsed);
    detail = buf;
    return mismatches == 0 && elapsed < 30.0;
}

bool check_node_construction(std::string& detail) {
    std::vector<NormalizedRunList> lists;
    {
        NormalizedRunList l1{"q", {{"d1", 1, 0.5}, {"d2", 2, 0.3}, {"d3", 3, 0.2}}};
        NormalizedRunList l2{"q", {{"d2", 1, 0.5}, {"d4", 2, 0.3}, {"d1", 3, 0.2}}};
        lists = {l1, l2};
    }
    auto count_d1 = [](const std::vector<GraphNode>& nodes) {
        return std::count_if(nodes.begin(), nodes.end(),
                             [](const GraphNode& n) { return n.doc_id == "d1"; });
    };
    auto set_nodes = build_nodes(lists, NodeSetKind::Set, QuerySimMode::Uniform);
    auto bag_nodes = build_nodes(lists, NodeSetKind::Bag, QuerySimMode::Uniform);
    auto dup_nodes = build_nodes(lists, NodeSetKind::BagDup, QuerySimMode::Uniform);
    std::ostringstream os;
    os << "set " << set_nodes.size() << "/d1 " << count_d1(set_nodes) << ", bag "
       << bag_nodes.size() << "/d1 " << count_d1(bag_nodes) << ", bagdup "
       << dup_nodes.size() << "/d1 " << count_d1(dup_nodes);
    detail = os.str();
    return set_nodes.size() == 4 && count_d1(set_nodes) == 1 && bag_nodes.size() == 6 &&
           count_d1(bag_nodes) == 2 && dup_nodes.size() == 10 && count_d1(dup_nodes) == 4;
}

bool check_stationary_solve(std::string& detail) {
    std::mt19937_64 rng(777);
    double worst_component = 0.0;
    double worst_row = 0.0;
    double worst_sum = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<std::size_t> n_dist(2, 8);
        std::size_t n = n_dist(rng);
        std::uniform_int_distribution<std::size_t> m_dist(2, std::min<std::size_t>(4, n));
        std::size_t m = m_dist(rng);
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < m; ++i) ids.push_back("p" + std::to_string(i));
        auto sims = random_matrix(rng, ids);

        std::uniform_int_distribution<std::size_t> doc_dist(0, m - 1);
        std::uniform_real_distribution<double> aff_dist(0.1, 2.0);
        std::vector<GraphNode> nodes;
        for (std::size_t v = 0; v < n; ++v) {
            std::size_t doc = doc_dist(rng);
            nodes.push_back({static_cast<std::uint32_t>(v), ids[doc], 0,
                             static_cast<std::uint32_t>(v + 1), 0, aff_dist(rng)});
        }
        std::uniform_int_distribution<std::size_t> alpha_dist(1, 4);
        std::uniform_int_distribution<int> lambda_dist(1, 10);
        FusionGraph g(std::move(nodes), sims, lambda_dist(rng) / 10.0, alpha_dist(rng));

        for (std::uint32_t v = 0; v < n; ++v) {
            auto row = g.transition_row(v);
            double s = 0.0;
            for (double x : row) s += x;
            worst_row = std::max(worst_row, std::fabs(s - 1.0));
        }
        // A higher cap than the production default: tiny near-periodic
        // graphs at lambda 0.1 legitimately need more than 200 rounds.
        auto pv = g.stationary_distribution(1e-10, 5000);
        double total = 0.0;
        for (double p : pv.values) total += p;
        worst_sum = std::max(worst_sum, std::fabs(total - 1.0));
        auto direct = dense_stationary(g);
        for (std::size_t i = 0; i < pv.values.size(); ++i)
            worst_component = std::max(worst_component, std::fabs(pv.values[i] - direct[i]));
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max |power - direct| %.2e, max row-sum err %.2e, max mass err %.2e",
                  worst_component, worst_row, worst_sum);
    detail = buf;
    return worst_component <= 1e-8 && worst_row <= 1e-9 && worst_sum <= 1e-9;
}

bool check_uniform_teleport(std::string& detail) {
    std::mt19937_64 rng(31337);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        auto lists = random_lists(rng, 3, 12, 8);
        auto sims = random_matrix(rng, pooled_ids(lists));
        auto normalized = normalize_all(lists);
        for (auto kind : {NodeSetKind::Set, NodeSetKind::Bag, NodeSetKind::BagDup}) {
            auto nodes = build_nodes(normalized, kind, QuerySimMode::Uniform);
            std::size_t n = nodes.size();
            FusionGraph g(std::move(nodes), sims, 1.0, 3);
            auto pv = g.stationary_distribution();
            for (double p : pv.values)
                worst = std::max(worst, std::fabs(p - 1.0 / static_cast<double>(n)));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |P(v) - 1/|V|| = %.2e", worst);
    detail = buf;
    return worst <= 1e-12;
}

bool check_similarity_oracle(std::string& detail) {
    auto d1 = build_term_vector({"a", "a", "b"});
    auto d2 = build_term_vector({"a", "b", "b"});
    auto stats = build_collection_stats({&d1, &d2});
    SmoothingParams mu{2.0};

    // Brute force over the two-term vocabulary.
    double p1_a = 2.0 / 3.0, p1_b = 1.0 / 3.0;
    double pc_a = 3.0 / 6.0, pc_b = 3.0 / 6.0;
    double p2_a = (1.0 + mu.mu * pc_a) / (3.0 + mu.mu);
    double p2_b = (2.0 + mu.mu * pc_b) / (3.0 + mu.mu);
    double expected_kl = p1_a * std::log(p1_a / p2_a) + p1_b * std::log(p1_b / p2_b);
    double expected_sim = std::exp(-expected_kl);

    double kl = kl_divergence(d1, d2, stats, mu);
    double sim = lm_similarity(d1, d2, stats, mu);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "kl %.10f (expected %.10f), sim %.10f (expected %.10f)",
                  kl, expected_kl, sim, expected_sim);
    detail = buf;
    return std::fabs(kl - expected_kl) <= 1e-6 && std::fabs(sim - expected_sim) <= 1e-6 &&
           std::fabs(expected_kl - 0.1446) <= 1e-4 && std::fabs(expected_sim - 0.8654) <= 1e-4;
}

double brute_ap(const std::vector<std::string>& docs, const std::set<std::string>& rel,
                std::size_t k) {
    if (rel.empty()) return 0.0;
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < docs.size() && i < k; ++i)
        if (rel.count(docs[i])) sum += static_cast<double>(++hits) / static_cast<double>(i + 1);
    return sum / static_cast<double>(rel.size());
}

double brute_wilcoxon(const std::vector<double>& diffs_in) {
    std::vector<double> diffs;
    for (double d : diffs_in)
        if (d != 0.0) diffs.push_back(d);
    std::size_t n = diffs.size();
    if (n == 0) return 1.0;
    std::vector<double> mags;
    for (double d : diffs) mags.push_back(std::fabs(d));
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> ranks;
    double w_plus = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), mags[i]) - sorted.begin();
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), mags[i]) - sorted.begin();
        double r = (static_cast<double>(lo + 1) + static_cast<double>(hi)) / 2.0;
        ranks.push_back(r);
        total += r;
        if (diffs[i] > 0) w_plus += r;
    }
    double lo_tail = std::min(w_plus, total - w_plus);
    double hi_tail = std::max(w_plus, total - w_plus);
    std::size_t favorable = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        double t = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) t += ranks[i];
        if (t <= lo_tail || t >= hi_tail) ++favorable;
    }
    return std::min(1.0, static_cast<double>(favorable) / static_cast<double>(1ull << n));
}

bool check_metric_oracles(std::string& detail) {
    // AP@k, exhaustive over all rankings of <= 6 docs with <= 3 relevant.
    std::size_t ap_checked = 0, ap_bad = 0;
    std::vector<std::string> docs{"a", "b", "c", "d", "e", "f"};
    std::sort(docs.begin(), docs.end());
    do {
        for (std::uint32_t mask = 0; mask < 64; ++mask) {
            if (std::popcount(mask) > 3) continue;
            std::set<std::string> rel;
            for (std::size_t i = 0; i < 6; ++i)
                if (mask & (1u << i)) rel.insert(std::string(1, static_cast<char>('a' + i)));
            QrelSet qrels;
            for (const auto& d : rel) qrels.judgments["q"][d] = 1;
            FusedRanking r{"q", {}};
            double s = 6.0;
            for (const auto& d : docs) r.docs.push_back({d, s--});
            for (std::size_t k : {3, 6, 10}) {
                ++ap_checked;
                if (std::fabs(average_precision_at_k(r, qrels, k) - brute_ap(docs, rel, k)) >
                    1e-12)
                    ++ap_bad;
            }
        }
    } while (std::next_permutation(docs.begin(), docs.end()));

    // p@5 / p@10 on 20 fixtures with hand-computed values.
    struct Fixture {
        const char* pattern;  // R = relevant, N = not
        double p5, p10;
    };
    const Fixture fixtures[] = {
        {"RRRRRNNNNNNN", 1.0, 0.5},  {"NNNNNNNNNNNN", 0.0, 0.0},
        {"RNNNNNNNNNNN", 0.2, 0.1},  {"NRNNNNNNNNNN", 0.2, 0.1},
        {"RRNNNNNNNNNN", 0.4, 0.2},  {"RNRNRNRNRNRN", 0.6, 0.5},
        {"NRNRNRNRNRNR", 0.4, 0.5},  {"RRRRRRRRRRRR", 1.0, 1.0},
        {"NNNNNRRRRRNN", 0.0, 0.5},  {"RRRRRRRRNNNN", 1.0, 0.8},
        {"NNNNRRRRRNNN", 0.2, 0.5},  {"RNNNNNNNNNNR", 0.2, 0.1},
        {"NNNNNNNNNRRR", 0.0, 0.1},  {"RRRNNNNNNNNN", 0.6, 0.3},
        {"RRRRNNNNNNNN", 0.8, 0.4},  {"NRRRRRNNNNNN", 0.8, 0.5},
        {"RNRNNNNNNNNN", 0.4, 0.2},  {"NNRNNRNNRNNR", 0.2, 0.3},
        {"RRRRRNNNNNRR", 1.0, 0.5},  {"RRR", 0.6, 0.3},
    };
    std::size_t p_bad = 0;
    for (const auto& f : fixtures) {
        QrelSet qrels;
        FusedRanking r{"q", {}};
        std::string pattern(f.pattern);
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            std::string doc = "d" + std::to_string(i);
            r.docs.push_back({doc, static_cast<double>(pattern.size() - i)});
            if (pattern[i] == 'R') qrels.judgments["q"][doc] = 1;
        }
        if (std::fabs(precision_at(r, qrels, 5) - f.p5) > 1e-12) ++p_bad;
        if (std::fabs(precision_at(r, qrels, 10) - f.p10) > 1e-12) ++p_bad;
    }

    // Wilcoxon against full sign enumeration, 50 fixtures with ties.
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> lattice(-4, 4);
    std::size_t w_bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 9);  // 2..10
        std::vector<double> a(n), b(n, 0.0);
        for (auto& x : a) x = 0.5 * lattice(rng);
        auto res = wilcoxon_signed_rank(a, b);
        if (std::fabs(res.p_value - brute_wilcoxon(a)) > 1e-12) ++w_bad;
    }

    std::ostringstream os;
    os << ap_checked << " AP cases (" << ap_bad << " bad), 40 precision values (" << p_bad
       << " bad), 50 wilcoxon fixtures (" << w_bad << " bad)";
    detail = os.str();
    return ap_bad == 0 && p_bad == 0 && w_bad == 0;
}

bool check_scale_invariance(std::string& detail) {
    std::mt19937_64 rng(9001);
    double worst = 0.0;
    std::size_t order_breaks = 0;
    const double factors[] = {1e-3, 3.0, 1e6};
    for (int trial = 0; trial < 50; ++trial) {
        auto lists = random_lists(rng, 3, 10, 7);
        auto sims = random_matrix(rng, pooled_ids(lists));
        auto normalized = normalize_all(lists);
        std::uniform_int_distribution<std::size_t> alpha_dist(1, 5);
        std::size_t alpha = alpha_dist(rng);
        std::uniform_int_distribution<int> lambda_dist(1, 9);
        double lambda = lambda_dist(rng) / 10.0;
        double factor = factors[trial % 3];

        for (auto method : all_methods()) {
            if (!is_graph_method(method)) continue;
            auto nodes = build_nodes(normalized, method_node_kind(method),
                                     method_query_sim(method));
            auto scaled = nodes;
            for (auto& n : scaled) n.query_sim *= factor;

            FusionGraph g1(std::move(nodes), sims, lambda, alpha);
            FusionGraph g2(std::move(scaled), sims, lambda, alpha);
            auto r1 = fold_nodes(g1.nodes(), g1.stationary_distribution(1e-10, 5000));
            auto r2 = fold_nodes(g2.nodes(), g2.stationary_distribution(1e-10, 5000));
            if (doc_order(r1) != doc_order(r2)) ++order_breaks;
            for (std::size_t i = 0; i < r1.docs.size(); ++i)
                worst = std::max(worst, std::fabs(r1.docs[i].score - r2.docs[i].score));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max score drift %.2e, %zu order changes", worst,
                  order_breaks);
    detail = buf;
    return worst <= 1e-12 && order_breaks == 0;
}

bool check_score_independence(std::string& detail) {
    std::mt19937_64 rng(5150);
    std::size_t breaks = 0;
    for (int trial = 0; trial < 50; ++trial) {
        auto lists = random_lists(rng, 3, 10, 7);
        auto permuted = lists;
        for (auto& list : permuted) {
            std::vector<double> scores;
            for (const auto& e : list.entries) scores.push_back(e.score);
            std::shuffle(scores.begin(), scores.end(), rng);
            for (std::size_t i = 0; i < scores.size(); ++i)
                list.entries[i].score = scores[i];
        }
        auto sims = random_matrix(rng, pooled_ids(lists));
        std::uniform_int_distribution<std::size_t> alpha_dist(1, 5);
        std::size_t alpha = alpha_dist(rng);

        for (auto method :
             {FusionMethod::SetUni, FusionMethod::BagUni, FusionMethod::BagDupUni}) {
            auto a = graph_fuse(normalize_all(lists), method, 0.6, alpha, sims);
            auto b = graph_fuse(normalize_all(permuted), method, 0.6, alpha, sims);
            if (a.docs != b.docs) ++breaks;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu differing outputs over 150 comparisons", breaks);
    detail = buf;
    return breaks == 0;
}

// Synthetic cluster fixture: per query, ten relevant documents share a
// topical vocabulary; three runs retrieve overlapping slices with most
// relevant docs unique to one run.
struct ClusterFixture {
    DocumentMap docs;
    QrelSet qrels;
    std::vector<RunSet> runs{3};

    static ClusterFixture build(std::uint64_t seed) {
        ClusterFixture f;
        std::mt19937_64 rng(seed);
        const std::vector<std::string> background{"misc", "other", "noise", "filler",
                                                  "random", "plain"};
        std::uniform_int_distribution<std::size_t> bg(0, background.size() - 1);
        auto topic_text = [&](const std::string& topic) {
            std::string text;
            for (int i = 0; i < 6; ++i) text += topic + std::to_string(i % 3) + " ";
            text += background[bg(rng)];
            return text;
        };
        auto noise_text = [&] {
            std::string text;
            for (int i = 0; i < 7; ++i) text += background[bg(rng)] + " ";
            return text;
        };

        for (int q = 0; q < 8; ++q) {
            std::string qid = "q" + std::to_string(q);
            std::string topic = "topic" + std::to_string(q);
            std::vector<std::string> rel, nonrel;
            for (int i = 0; i < 10; ++i) {
                std::string id = qid + "r" + std::to_string(i);
                f.docs[id] = {id, topic_text(topic)};
                f.qrels.judgments[qid][id] = 1;
                rel.push_back(id);
            }
            for (int i = 0; i < 12; ++i) {
                std::string id = qid + "n" + std::to_string(i);
                f.docs[id] = {id, noise_text()};
                nonrel.push_back(id);
            }
            // Runs share rel 0-1; rel 2-9 are unique to one run (80%).
            std::vector<std::vector<std::string>> retrieved{
                {rel[0], nonrel[0], rel[2], nonrel[1], rel[3], nonrel[2], rel[4],
                 nonrel[3], rel[1], nonrel[4]},
                {rel[1], nonrel[5], rel[5], nonrel[6], rel[6], nonrel[7], rel[7],
                 nonrel[8], rel[0], nonrel[9]},
                {rel[0], nonrel[10], rel[8], nonrel[11], rel[9], nonrel[0], rel[1],
                 nonrel[5], nonrel[6], nonrel[10]}};
            for (std::size_t r = 0; r < 3; ++r) {
                std::vector<std::pair<std::string, double>> scored;
                double score = 20.0;
                std::set<std::string> seen;
                for (const auto& doc : retrieved[r]) {
                    if (!seen.insert(doc).second) continue;
                    scored.emplace_back(doc, score);
                    score -= 1.0;
                }
                f.runs[r][qid] = make_list(qid, std::move(scored));
            }
        }
        return f;
    }
};

bool check_cluster_fixture(std::string& detail) {
    auto start = Clock::now();
    auto fixture = ClusterFixture::build(8881);
    auto corpus = tokenize_corpus(fixture.docs, PipelineConfig{});
    auto track = Track::assemble(fixture.runs, fixture.qrels);

    // The cluster premise: a large share of relevant docs sit in exactly
    // one run.
    std::vector<std::vector<RunList>> groups;
    for (const auto& qid : track.query_ids) groups.push_back(track.lists_for(qid));
    auto curve = singleton_relevant_curve(groups, track.qrels, {10});
    double singleton_pct = curve.front().second;

    FusionEngine engine(&corpus, SmoothingParams{1000.0});
    SweepGrid grid = SweepGrid::defaults();
    grid.k = 10;
    auto swept = sweep(evaluate_grid(engine, track, FusionMethod::BagDupMnz, grid));
    double graph_p5 = swept.table[swept.best_index].mean_p5;

    auto baseline = evaluate_grid(engine, track, FusionMethod::CombMnz, grid);
    double base_p5 = 0.0;
    for (const auto& qm : baseline.metrics[0]) base_p5 += qm.p5;
    base_p5 /= static_cast<double>(baseline.metrics[0].size());

    double elapsed = seconds_since(start);
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "singleton relevant %.0f%%, swept bagdupmnz p@5 %.4f vs combmnz %.4f "
                  "(lambda %.1f, alpha %zu), %.1f s",
                  singleton_pct, graph_p5, base_p5, swept.best.lambda, swept.best.alpha,
                  elapsed);
    detail = buf;
    return singleton_pct >= 40.0 && graph_p5 >= base_p5 && elapsed < 120.0;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool check_determinism(std::string& detail, const std::string& cli) {
    // In-process round-trip: write, re-parse, same ordering.
    std::mt19937_64 rng(616);
    for (int trial = 0; trial < 20; ++trial) {
        auto lists = random_lists(rng, 3, 12, 9);
        auto fused = comb_mnz(normalize_all(lists));
        std::ostringstream out;
        write_run(fused, "tag", out);
        std::istringstream in(out.str());
        auto parsed = parse_run(in);
        std::vector<std::string> round;
        for (const auto& e : parsed.at("q").entries) round.push_back(e.doc_id);
        if (round != doc_order(fused)) {
            detail = "round-trip changed an ordering";
            return false;
        }
    }

    if (cli.empty()) {
        detail = "no CLI binary given";
        return false;
    }

    auto dir = fs::temp_directory_path() / "simfuse_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto fixture = ClusterFixture::build(4321);
    {
        std::ofstream c(dir / "corpus.jsonl");
        save_corpus(fixture.docs, c);
        std::ofstream q(dir / "qrels.txt");
        for (const auto& [qid, judged] : fixture.qrels.judgments) {
            std::map<std::string, int> ordered(judged.begin(), judged.end());
            for (const auto& [doc, grade] : ordered)
                q << qid << " 0 " << doc << ' ' << grade << '\n';
        }
        for (std::size_t r = 0; r < 3; ++r) {
            std::ofstream f(dir / ("run" + std::to_string(r) + ".run"));
            for (const auto& [qid, list] : fixture.runs[r])
                write_run(to_ranking(list), "sys" + std::to_string(r), f);
        }
    }

    std::string base = "cd " + dir.string() + " && " + cli +
                       " sweep --runs run0.run run1.run run2.run --corpus corpus.jsonl"
                       " --qrels qrels.txt --method bagsum --grid-lambda 0.5,1"
                       " --grid-alpha 3,5 --k 10";
    std::string sample = "cd " + dir.string() + " && " + cli +
                         " sample --runs run0.run run1.run run2.run --qrels qrels.txt"
                         " --seed 9 --samples 12";
    for (int round = 1; round <= 2; ++round) {
        std::string n = std::to_string(round);
        int rc1 = std::system((base + " --out table" + n + ".csv --fused-out fused" + n +
                               ".run > sweep_out" + n + ".txt 2>/dev/null")
                                  .c_str());
        int rc2 = std::system(
            (sample + " --out sample" + n + ".csv > /dev/null 2>&1").c_str());
        if (rc1 != 0 || rc2 != 0) {
            detail = "CLI invocation failed";
            return false;
        }
    }
    // Same sweep with method/grid/k supplied through a config file instead of flags.
    {
        std::ofstream cfg(dir / "sweep.cfg");
        cfg << "[sweep]\nmethod=bagsum\ngrid-lambda=0.5,1\ngrid-alpha=3,5\nk=10\n";
    }
    int rc3 = std::system(("cd " + dir.string() + " && " + cli +
                           " sweep --config sweep.cfg --runs run0.run run1.run run2.run"
                           " --corpus corpus.jsonl --qrels qrels.txt --out table3.csv"
                           " --fused-out fused3.run > sweep_out3.txt 2>/dev/null")
                              .c_str());
    if (rc3 != 0) {
        detail = "config-file CLI invocation failed";
        return false;
    }

    bool same = read_file(dir / "table1.csv") == read_file(dir / "table2.csv") &&
                read_file(dir / "fused1.run") == read_file(dir / "fused2.run") &&
                read_file(dir / "sweep_out1.txt") == read_file(dir / "sweep_out2.txt") &&
                read_file(dir / "sample1.csv") == read_file(dir / "sample2.csv");
    bool config_same = read_file(dir / "table3.csv") == read_file(dir / "table1.csv") &&
                       read_file(dir / "fused3.run") == read_file(dir / "fused1.run");
    bool nonempty = !read_file(dir / "table1.csv").empty() &&
                    !read_file(dir / "fused1.run").empty() &&
                    !read_file(dir / "sample1.csv").empty();
    if (!config_same) {
        detail = "config-file run differs from the flag run";
        return false;
    }
    detail = same && nonempty
                 ? "round-trips ok, repeated CLI runs byte-identical, config run matches flag run"
                 : "outputs differ between identical runs";
    return same && nonempty;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    if (!cli.empty()) cli = fs::absolute(cli).string();
    struct Check {
        int id;
        const char* name;
        std::function<bool(std::string&)> fn;
    };
    std::vector<Check> checks{
        {1, "lambda-one graph methods reproduce combsum/combmnz orderings",
         [](std::string& d) { return check_equivalences(d); }},
        {2, "set/bag/bagdup node construction counts",
         [](std::string& d) { return check_node_construction(d); }},
        {3, "power iteration agrees with a dense stationary solve",
         [](std::string& d) { return check_stationary_solve(d); }},
        {4, "uniform affinity at lambda one gives uniform prestige",
         [](std::string& d) { return check_uniform_teleport(d); }},
        {5, "language-model similarity matches the hand-derived example",
         [](std::string& d) { return check_similarity_oracle(d); }},
        {6, "ap/precision/wilcoxon match brute-force oracles",
         [](std::string& d) { return check_metric_oracles(d); }},
        {7, "scaling query affinities leaves graph outputs unchanged",
         [](std::string& d) { return check_scale_invariance(d); }},
        {8, "uniform-affinity methods ignore retrieval scores",
         [](std::string& d) { return check_score_independence(d); }},
        {9, "cluster fixture: swept bagdupmnz reaches combmnz p@5",
         [](std::string& d) { return check_cluster_fixture(d); }},
        {10, "round-trips and byte-identical repeated runs",
         [&cli](std::string& d) { return check_determinism(d, cli); }},
    };

    int failures = 0;
    for (auto& check : checks) {
        std::string detail;
        bool ok = false;
        try {
            ok = check.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << check.id << ": "
                  << check.name << " (" << detail << ")" << std::endl;
    }
    return failures;
}
