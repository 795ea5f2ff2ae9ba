#pragma once

#include <string>
#include <vector>

namespace simfuse {

struct ScoredDoc {
    std::string doc_id;
    double score;

    bool operator==(const ScoredDoc&) const = default;
};

/// Final ranking for one query: documents in descending score order,
/// ties broken by ascending doc_id.
struct FusedRanking {
    std::string query_id;
    std::vector<ScoredDoc> docs;
};

/// Sorts (doc, score) pairs into ranking order: score descending,
/// doc_id ascending on exact ties.
void sort_ranking(std::vector<ScoredDoc>& docs);

}  // namespace simfuse
