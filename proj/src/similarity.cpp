#include "simfuse/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

namespace simfuse {

namespace {

using SortedTerms = std::vector<std::pair<std::string, std::uint64_t>>;

SortedTerms sorted_terms(const TermVector& tv) {
    SortedTerms terms(tv.counts.begin(), tv.counts.end());
    std::sort(terms.begin(), terms.end());
    return terms;
}

// KL core shared by the scalar entry point and the matrix builder so
// both accumulate in the same (ascending term) order.
double kl_sorted(const SortedTerms& d1_terms, std::uint64_t d1_length, const TermVector& d2,
                 const CollectionStats& stats, const SmoothingParams& params) {
    if (d1_length == 0) return 0.0;
    double total = 0.0;
    for (const auto& [term, count] : d1_terms) {
        double p1 = static_cast<double>(count) / static_cast<double>(d1_length);
        double p2 = smoothed_prob(term, d2, stats, params);
        if (p2 <= 0.0) throw ZeroSmoothedProbability(term);
        total += p1 * std::log(p1 / p2);
    }
    return total;
}

}  // namespace

ZeroSmoothedProbability::ZeroSmoothedProbability(std::string term_in)
    : SimilarityError("smoothed probability of term '" + term_in + "' is zero"),
      term(std::move(term_in)) {}

MissingDocumentText::MissingDocumentText(std::string id)
    : SimilarityError("document '" + id + "' has no text in the corpus"), doc_id(std::move(id)) {}

double smoothed_prob(const std::string& term, const TermVector& doc,
                     const CollectionStats& stats, const SmoothingParams& params) {
    auto it = doc.counts.find(term);
    double tf = it == doc.counts.end() ? 0.0 : static_cast<double>(it->second);
    return (tf + params.mu * stats.collection_prob(term)) /
           (static_cast<double>(doc.length) + params.mu);
}

double kl_divergence(const TermVector& d1, const TermVector& d2, const CollectionStats& stats,
                     const SmoothingParams& params) {
    return kl_sorted(sorted_terms(d1), d1.length, d2, stats, params);
}

double lm_similarity(const TermVector& d1, const TermVector& d2, const CollectionStats& stats,
                     const SmoothingParams& params) {
    return std::exp(-kl_divergence(d1, d2, stats, params));
}

void SimilarityCache::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "simfuse-simcache v1")
        throw SimilarityError("unrecognized similarity cache header");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string from, to;
        double value = 0.0;
        if (!(ss >> from >> to >> value))
            throw SimilarityError("malformed cache line " + std::to_string(line_no));
        values[{std::move(from), std::move(to)}] = value;
    }
}

void SimilarityCache::save(std::ostream& out) const {
    out << "simfuse-simcache v1\n";
    char buf[64];
    for (const auto& [key, value] : values) {
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << key.first << ' ' << key.second << ' ' << buf << '\n';
    }
}

SimilarityMatrix SimilarityMatrix::compute(const std::vector<std::string>& doc_ids,
                                           const TokenizedCorpus& corpus,
                                           const SmoothingParams& params,
                                           SimilarityCache* cache) {
    SimilarityMatrix m;
    m.ids_ = doc_ids;
    std::size_t n = doc_ids.size();
    m.values_.assign(n * n, 0.0);

    std::vector<const TermVector*> vectors(n);
    std::vector<SortedTerms> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.index_.emplace(doc_ids[i], i);
        auto it = corpus.vectors.find(doc_ids[i]);
        if (it == corpus.vectors.end()) throw MissingDocumentText(doc_ids[i]);
        vectors[i] = &it->second;
        terms[i] = sorted_terms(it->second);
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double value;
            if (cache != nullptr) {
                auto key = std::make_pair(doc_ids[i], doc_ids[j]);
                auto hit = cache->values.find(key);
                if (hit != cache->values.end()) {
                    value = hit->second;
                } else {
                    value = std::exp(
                        -kl_sorted(terms[i], vectors[i]->length, *vectors[j], corpus.stats, params));
                    cache->values.emplace(std::move(key), value);
                }
            } else {
                value = std::exp(
                    -kl_sorted(terms[i], vectors[i]->length, *vectors[j], corpus.stats, params));
            }
            m.values_[i * n + j] = value;
        }
    }
    return m;
}

SimilarityMatrix SimilarityMatrix::from_values(std::vector<std::string> doc_ids,
                                               std::vector<double> values) {
    if (values.size() != doc_ids.size() * doc_ids.size())
        throw SimilarityError("value matrix size does not match doc count");
    SimilarityMatrix m;
    m.ids_ = std::move(doc_ids);
    m.values_ = std::move(values);
    for (std::size_t i = 0; i < m.ids_.size(); ++i) m.index_.emplace(m.ids_[i], i);
    return m;
}

std::optional<std::size_t> SimilarityMatrix::index_of(const std::string& doc_id) const {
    auto it = index_.find(doc_id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NeighborhoodIndex build_neighborhoods(const std::vector<std::size_t>& node_doc_index,
                                      const SimilarityMatrix& matrix, std::size_t alpha) {
    NeighborhoodIndex index;
    std::size_t n = node_doc_index.size();
    index.neighbors.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::uint32_t> candidates;
        candidates.reserve(n);
        for (std::size_t u = 0; u < n; ++u)
            if (node_doc_index[u] != node_doc_index[v]) candidates.push_back(static_cast<std::uint32_t>(u));
        std::size_t row = node_doc_index[v];
        std::sort(candidates.begin(), candidates.end(),
                  [&](std::uint32_t a, std::uint32_t b) {
                      double sa = matrix.at(row, node_doc_index[a]);
                      double sb = matrix.at(row, node_doc_index[b]);
                      if (sa != sb) return sa > sb;
                      return a < b;
                  });
        if (candidates.size() > alpha) candidates.resize(alpha);
        index.neighbors[v] = std::move(candidates);
    }
    return index;
}

}  // namespace simfuse
