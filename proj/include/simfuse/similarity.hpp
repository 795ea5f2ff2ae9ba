#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simfuse/corpus.hpp"

namespace simfuse {

struct SmoothingParams {
    /// Dirichlet prior mass.
    double mu = 1000.0;
};

struct SimilarityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroSmoothedProbability : SimilarityError {
    std::string term;
    explicit ZeroSmoothedProbability(std::string term_in);
};

struct MissingDocumentText : SimilarityError {
    std::string doc_id;
    explicit MissingDocumentText(std::string id);
};

/// Dirichlet-smoothed probability of a term under a document model:
/// (tf + mu * p_collection) / (length + mu).
double smoothed_prob(const std::string& term, const TermVector& doc,
                     const CollectionStats& stats, const SmoothingParams& params);

/// KL divergence D(p1 || p2) where p1 is the unsmoothed model of d1 and
/// p2 the smoothed model of d2, summed over the terms of d1 in ascending
/// term order. Throws ZeroSmoothedProbability when a term of d1 has zero
/// probability under p2. Empty d1 yields 0.
double kl_divergence(const TermVector& d1, const TermVector& d2,
                     const CollectionStats& stats, const SmoothingParams& params);

/// exp(-kl_divergence(d1, d2)). Asymmetric; always positive.
double lm_similarity(const TermVector& d1, const TermVector& d2,
                     const CollectionStats& stats, const SmoothingParams& params);

/// Persistent store of computed pair similarities, keyed by ordered
/// (from, to) doc_id pairs.
struct SimilarityCache {
    std::map<std::pair<std::string, std::string>, double> values;

    /// Text format, one whitespace-separated entry per line; round-trips
    /// doubles exactly. Doc ids must be whitespace-free, as in run files.
    void load(std::istream& in);
    void save(std::ostream& out) const;
};

/// Dense pairwise similarity matrix over a fixed document pool. Entry
/// (i, j) is sim(doc_i, doc_j); the diagonal is unused and stored as 0.
class SimilarityMatrix {
  public:
    SimilarityMatrix() = default;

    /// Computes all off-diagonal pairs for the pooled doc_ids. Every id
    /// must be present in the corpus (throws MissingDocumentText
    /// otherwise). When a cache is given, present pairs are reused and
    /// missing ones are computed and inserted.
    static SimilarityMatrix compute(const std::vector<std::string>& doc_ids,
                                    const TokenizedCorpus& corpus,
                                    const SmoothingParams& params,
                                    SimilarityCache* cache = nullptr);

    /// Builds a matrix directly from values (row-major, size n*n).
    static SimilarityMatrix from_values(std::vector<std::string> doc_ids,
                                        std::vector<double> values);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& doc_ids() const { return ids_; }
    std::optional<std::size_t> index_of(const std::string& doc_id) const;

    double at(std::size_t from, std::size_t to) const { return values_[from * ids_.size() + to]; }

  private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> values_;
};

/// neighbors[v] lists the node ids of the alpha nearest neighbours of
/// node v, ordered by descending similarity with ascending node id on
/// ties. Nodes whose document equals v's document are excluded.
struct NeighborhoodIndex {
    std::vector<std::vector<std::uint32_t>> neighbors;
};

/// node_doc_index maps each node to its document's row in the matrix.
NeighborhoodIndex build_neighborhoods(const std::vector<std::size_t>& node_doc_index,
                                      const SimilarityMatrix& matrix, std::size_t alpha);

}  // namespace simfuse
