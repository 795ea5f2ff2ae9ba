#include "simfuse/corpus.hpp"

#include <istream>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "simfuse/porter.hpp"

namespace simfuse {

namespace {

bool is_token_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char to_lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string trimmed(const std::string& line) {
    std::size_t begin = line.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    std::size_t end = line.find_last_not_of(" \t\r\n");
    return line.substr(begin, end - begin + 1);
}

}  // namespace

MalformedRecord::MalformedRecord(std::size_t line_no, const std::string& detail)
    : CorpusError("line " + std::to_string(line_no) + ": " + detail), line(line_no) {}

DuplicateDocId::DuplicateDocId(std::size_t line_no, std::string id)
    : CorpusError("line " + std::to_string(line_no) + ": duplicate doc id '" + id + "'"),
      line(line_no),
      doc_id(std::move(id)) {}

double CollectionStats::collection_prob(const std::string& term) const {
    if (total_tokens == 0) return 0.0;
    auto it = term_freq.find(term);
    if (it == term_freq.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total_tokens);
}

std::vector<std::string> tokenize(std::string_view text, const PipelineConfig& config) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_token_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && is_token_char(text[i])) ++i;
        std::string term(text.substr(start, i - start));
        if (config.lowercase) {
            for (char& c : term) c = to_lower_ascii(c);
        }
        if (config.stopwords.contains(term)) continue;
        if (config.stemming) term = porter_stem(term);
        out.push_back(std::move(term));
    }
    return out;
}

TermVector build_term_vector(const std::vector<std::string>& tokens) {
    TermVector tv;
    for (const auto& t : tokens) ++tv.counts[t];
    tv.length = tokens.size();
    return tv;
}

CollectionStats build_collection_stats(const std::vector<const TermVector*>& vectors) {
    if (vectors.empty()) throw EmptyCorpus();
    CollectionStats stats;
    for (const TermVector* tv : vectors) {
        for (const auto& [term, count] : tv->counts) stats.term_freq[term] += count;
        stats.total_tokens += tv->length;
    }
    return stats;
}

TokenizedCorpus tokenize_corpus(const DocumentMap& docs, const PipelineConfig& config) {
    if (docs.empty()) throw EmptyCorpus();
    TokenizedCorpus corpus;
    std::vector<const TermVector*> refs;
    refs.reserve(docs.size());
    for (const auto& [id, doc] : docs) {
        auto [it, inserted] = corpus.vectors.emplace(id, build_term_vector(tokenize(doc.text, config)));
        (void)inserted;
        refs.push_back(&it->second);
    }
    corpus.stats = build_collection_stats(refs);
    return corpus;
}

DocumentMap load_corpus(std::istream& in) {
    DocumentMap docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object())
            throw MalformedRecord(line_no, "not a JSON object");
        if (!record.contains("id") || !record["id"].is_string())
            throw MalformedRecord(line_no, "missing string field \"id\"");
        if (!record.contains("text") || !record["text"].is_string())
            throw MalformedRecord(line_no, "missing string field \"text\"");
        Document doc{record["id"].get<std::string>(), record["text"].get<std::string>()};
        if (doc.doc_id.empty()) throw MalformedRecord(line_no, "empty doc id");
        if (docs.contains(doc.doc_id)) throw DuplicateDocId(line_no, doc.doc_id);
        docs.emplace(doc.doc_id, std::move(doc));
    }
    if (docs.empty()) throw EmptyCorpus();
    return docs;
}

void save_corpus(const DocumentMap& docs, std::ostream& out) {
    for (const auto& [id, doc] : docs) {
        nlohmann::json record{{"id", doc.doc_id}, {"text", doc.text}};
        out << record.dump() << '\n';
    }
}

std::set<std::string> load_stopwords(std::istream& in) {
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::string w = trimmed(line);
        if (w.empty()) continue;
        for (char& c : w) c = to_lower_ascii(c);
        words.insert(std::move(w));
    }
    return words;
}

}  // namespace simfuse
