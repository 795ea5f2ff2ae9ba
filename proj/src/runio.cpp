#include "simfuse/runio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace simfuse {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(std::move(f));
    return fields;
}

double parse_score(const std::string& token, std::size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw NonNumericScore(line_no, token);
    return value;
}

long parse_integer(const std::string& token, std::size_t line_no, const char* what) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw MalformedRunLine(line_no, std::string("non-numeric ") + what + " '" + token + "'");
    return value;
}

}  // namespace

MalformedRunLine::MalformedRunLine(std::size_t line_no, const std::string& detail)
    : RunIoError("line " + std::to_string(line_no) + ": " + detail), line(line_no) {}

NonNumericScore::NonNumericScore(std::size_t line_no, const std::string& token)
    : RunIoError("line " + std::to_string(line_no) + ": non-numeric score '" + token + "'"),
      line(line_no) {}

int QrelSet::grade(const std::string& query_id, const std::string& doc_id) const {
    auto q = judgments.find(query_id);
    if (q == judgments.end()) return 0;
    auto d = q->second.find(doc_id);
    return d == q->second.end() ? 0 : d->second;
}

bool QrelSet::relevant(const std::string& query_id, const std::string& doc_id) const {
    return grade(query_id, doc_id) >= 1;
}

std::size_t QrelSet::relevant_count(const std::string& query_id) const {
    auto q = judgments.find(query_id);
    if (q == judgments.end()) return 0;
    std::size_t n = 0;
    for (const auto& [doc, g] : q->second)
        if (g >= 1) ++n;
    return n;
}

RunSet parse_run(std::istream& in) {
    struct RawEntry {
        std::string doc_id;
        double score;
    };
    std::map<std::string, std::vector<RawEntry>> raw;
    std::map<std::string, std::string> tags;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 6)
            throw MalformedRunLine(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
        parse_integer(fields[3], line_no, "rank");  // re-derived below, but must be numeric
        double score = parse_score(fields[4], line_no);
        raw[fields[0]].push_back({fields[2], score});
        tags.try_emplace(fields[0], fields[5]);
    }

    RunSet runs;
    for (auto& [query_id, entries] : raw) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const RawEntry& a, const RawEntry& b) { return a.score > b.score; });
        RunList list;
        list.query_id = query_id;
        list.run_tag = tags[query_id];
        std::unordered_set<std::string> seen;
        for (auto& e : entries) {
            if (!seen.insert(e.doc_id).second) continue;
            list.entries.push_back(
                {std::move(e.doc_id), static_cast<std::uint32_t>(list.entries.size() + 1), e.score});
        }
        runs.emplace(query_id, std::move(list));
    }
    return runs;
}

RunList truncate(const RunList& list, std::size_t k) {
    RunList out;
    out.query_id = list.query_id;
    out.run_tag = list.run_tag;
    std::size_t n = std::min(k, list.entries.size());
    out.entries.assign(list.entries.begin(), list.entries.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

NormalizedRunList normalize_scores(const RunList& list) {
    if (list.entries.empty()) throw EmptyRunList();
    NormalizedRunList out;
    out.query_id = list.query_id;
    out.entries.reserve(list.entries.size());

    bool exponent = false;
    for (const auto& e : list.entries)
        if (e.score <= 0.0) exponent = true;

    std::vector<double> values;
    values.reserve(list.entries.size());
    if (exponent) {
        // exp shifted by the maximum: identical ratios, no overflow.
        double max_score = list.entries.front().score;
        for (const auto& e : list.entries) max_score = std::max(max_score, e.score);
        for (const auto& e : list.entries) values.push_back(std::exp(e.score - max_score));
    } else {
        for (const auto& e : list.entries) values.push_back(e.score);
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    for (std::size_t i = 0; i < values.size(); ++i)
        out.entries.push_back({list.entries[i].doc_id, list.entries[i].rank, values[i] / sum});
    return out;
}

QrelSet parse_qrels(std::istream& in) {
    QrelSet qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 4)
            throw MalformedRunLine(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
        long grade = parse_integer(fields[3], line_no, "relevance grade");
        if (grade < 0) throw MalformedRunLine(line_no, "negative relevance grade");
        qrels.judgments[fields[0]][fields[2]] = static_cast<int>(grade);
    }
    return qrels;
}

void write_run(const FusedRanking& ranking, const std::string& run_tag, std::ostream& out) {
    if (ranking.docs.empty()) throw EmptyRunList();
    char score_buf[64];
    for (std::size_t i = 0; i < ranking.docs.size(); ++i) {
        const auto& d = ranking.docs[i];
        std::snprintf(score_buf, sizeof(score_buf), "%.6g", d.score);
        out << ranking.query_id << " Q0 " << d.doc_id << ' ' << (i + 1) << ' ' << score_buf << ' '
            << run_tag << '\n';
    }
}

FusedRanking to_ranking(const RunList& list) {
    FusedRanking r;
    r.query_id = list.query_id;
    r.docs.reserve(list.entries.size());
    for (const auto& e : list.entries) r.docs.push_back({e.doc_id, e.score});
    return r;
}

}  // namespace simfuse
