#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace simfuse {

/// Raw document as stored in a JSONL corpus file.
struct Document {
    std::string doc_id;
    std::string text;

    bool operator==(const Document&) const = default;
};

/// Corpus keyed by doc_id. Ordered so iteration is reproducible.
using DocumentMap = std::map<std::string, Document>;

/// Text preprocessing switches. The same config applied to the same text
/// always yields the same token sequence.
struct PipelineConfig {
    bool lowercase = true;
    /// Surface forms dropped after lowercasing, before stemming.
    std::set<std::string> stopwords;
    bool stemming = false;
};

/// Term counts for one document.
struct TermVector {
    std::unordered_map<std::string, std::uint64_t> counts;
    /// Sum of all counts (token total, not vocabulary size).
    std::uint64_t length = 0;
};

/// Aggregate term statistics backing the collection language model.
struct CollectionStats {
    std::unordered_map<std::string, std::uint64_t> term_freq;
    std::uint64_t total_tokens = 0;

    std::size_t vocabulary_size() const { return term_freq.size(); }

    /// Maximum-likelihood collection probability of a term; 0 for unseen
    /// terms and for an empty collection.
    double collection_prob(const std::string& term) const;
};

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyCorpus : CorpusError {
    EmptyCorpus() : CorpusError("corpus contains no documents") {}
};

struct MalformedRecord : CorpusError {
    std::size_t line;
    explicit MalformedRecord(std::size_t line_no, const std::string& detail);
};

struct DuplicateDocId : CorpusError {
    std::size_t line;
    std::string doc_id;
    DuplicateDocId(std::size_t line_no, std::string id);
};

/// Splits text into maximal runs of ASCII alphanumeric characters, then
/// applies lowercasing, stopword removal and stemming per the config.
std::vector<std::string> tokenize(std::string_view text, const PipelineConfig& config);

TermVector build_term_vector(const std::vector<std::string>& tokens);

CollectionStats build_collection_stats(const std::vector<const TermVector*>& vectors);

/// Per-document term vectors plus the collection statistics over them.
struct TokenizedCorpus {
    std::unordered_map<std::string, TermVector> vectors;
    CollectionStats stats;
};

TokenizedCorpus tokenize_corpus(const DocumentMap& docs, const PipelineConfig& config);

/// Reads a JSONL corpus: one object per line with string fields "id"
/// and "text". Blank lines are skipped. Throws MalformedRecord on invalid
/// JSON or missing fields, DuplicateDocId on repeated ids, EmptyCorpus if
/// no records remain.
DocumentMap load_corpus(std::istream& in);

void save_corpus(const DocumentMap& docs, std::ostream& out);

/// Reads one stopword per line, lowercased; blank lines are skipped.
std::set<std::string> load_stopwords(std::istream& in);

}  // namespace simfuse
