#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "simfuse/ranking.hpp"

namespace simfuse {

struct RunEntry {
    std::string doc_id;
    std::uint32_t rank;
    double score;

    bool operator==(const RunEntry&) const = default;
};

/// One retrieval run restricted to a single query. Entries are in rank
/// order (rank 1 first) with strictly increasing ranks.
struct RunList {
    std::string query_id;
    std::string run_tag;
    std::vector<RunEntry> entries;
};

/// Parsed run file: query_id -> list, ordered by query_id.
using RunSet = std::map<std::string, RunList>;

struct NormalizedEntry {
    std::string doc_id;
    std::uint32_t rank;
    /// Positive, and scores of one list sum to 1.
    double norm_score;
};

struct NormalizedRunList {
    std::string query_id;
    std::vector<NormalizedEntry> entries;
};

/// Relevance judgments: query_id -> doc_id -> grade.
struct QrelSet {
    std::map<std::string, std::unordered_map<std::string, int>> judgments;

    /// Grade of (query, doc); 0 when unjudged.
    int grade(const std::string& query_id, const std::string& doc_id) const;
    /// True when the judged grade is positive. Unjudged docs are not
    /// relevant.
    bool relevant(const std::string& query_id, const std::string& doc_id) const;
    /// Number of relevant documents judged for the query.
    std::size_t relevant_count(const std::string& query_id) const;
};

struct RunIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedRunLine : RunIoError {
    std::size_t line;
    MalformedRunLine(std::size_t line_no, const std::string& detail);
};

struct NonNumericScore : RunIoError {
    std::size_t line;
    NonNumericScore(std::size_t line_no, const std::string& token);
};

struct EmptyRunList : RunIoError {
    EmptyRunList() : RunIoError("run list has no entries") {}
};

/// Parses TREC run format: `<query_id> Q0 <doc_id> <rank> <score> <tag>`,
/// whitespace separated. Entries are re-ranked by descending score (file
/// order breaks ties); a doc_id repeated within a query keeps its
/// highest-scoring occurrence. Ranks in the file are ignored.
RunSet parse_run(std::istream& in);

/// First k entries of the list (all of them when it is shorter).
RunList truncate(const RunList& list, std::size_t k);

/// Shifts scores to positive via an exponential transform when any score
/// is <= 0, then scales so they sum to 1. Order is preserved. Throws
/// EmptyRunList on an empty list.
NormalizedRunList normalize_scores(const RunList& list);

/// Parses TREC qrels format: `<query_id> <iteration> <doc_id> <grade>`.
/// A repeated (query, doc) pair keeps the last grade read.
QrelSet parse_qrels(std::istream& in);

/// Writes a ranking in TREC run format with ranks 1..n and iteration
/// column Q0. Throws EmptyRunList when the ranking has no documents.
void write_run(const FusedRanking& ranking, const std::string& run_tag, std::ostream& out);

/// View of a run list as a ranking (entries already in rank order).
FusedRanking to_ranking(const RunList& list);

}  // namespace simfuse
