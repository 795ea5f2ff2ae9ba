#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "simfuse/corpus.hpp"
#include "simfuse/eval.hpp"
#include "simfuse/fusion.hpp"
#include "simfuse/harness.hpp"
#include "simfuse/porter.hpp"
#include "simfuse/similarity.hpp"

namespace py = pybind11;
using namespace simfuse;

namespace {

using PyList = std::vector<std::pair<std::string, double>>;

PipelineConfig make_config(bool lowercase, bool stem,
                           const std::vector<std::string>& stopwords) {
    PipelineConfig config;
    config.lowercase = lowercase;
    config.stemming = stem;
    config.stopwords.insert(stopwords.begin(), stopwords.end());
    return config;
}

FusedRanking ranking_from(const std::vector<std::string>& doc_ids) {
    FusedRanking ranking{"q", {}};
    double score = static_cast<double>(doc_ids.size());
    for (const auto& doc : doc_ids) ranking.docs.push_back({doc, score--});
    return ranking;
}

QrelSet qrels_from(const std::vector<std::string>& relevant) {
    QrelSet qrels;
    for (const auto& doc : relevant) qrels.judgments["q"][doc] = 1;
    return qrels;
}

PyList py_fuse(const std::vector<PyList>& lists, const std::string& method_name,
               const std::optional<std::unordered_map<std::string, std::string>>& corpus,
               double lambda, std::size_t alpha, std::size_t k, double mu, bool stem,
               const std::vector<std::string>& stopwords, bool pool_stats) {
    auto method = parse_method(method_name);
    if (!method) throw py::value_error("unknown fusion method: " + method_name);

    std::vector<RunList> run_lists;
    run_lists.reserve(lists.size());
    for (const auto& list : lists) {
        RunList rl;
        rl.query_id = "q";
        std::size_t rank = 1;
        for (const auto& [doc, score] : list) rl.entries.push_back({doc, rank++, score});
        run_lists.push_back(std::move(rl));
    }

    std::optional<TokenizedCorpus> tokenized;
    if (corpus) {
        DocumentMap docs;
        for (const auto& [id, text] : *corpus) docs[id] = {id, text};
        tokenized = tokenize_corpus(docs, make_config(true, stem, stopwords));
    }

    FusionEngine engine(tokenized ? &*tokenized : nullptr, SmoothingParams{mu}, pool_stats);
    auto prepared = engine.prepare("q", run_lists, k, is_graph_method(*method));
    auto fused = engine.run(prepared, *method, lambda, alpha);

    PyList out;
    out.reserve(fused.docs.size());
    for (const auto& d : fused.docs) out.emplace_back(d.doc_id, d.score);
    return out;
}

double py_similarity(const std::string& text1, const std::string& text2, double mu, bool stem,
                     const std::vector<std::string>& stopwords) {
    DocumentMap docs;
    docs["a"] = {"a", text1};
    docs["b"] = {"b", text2};
    auto tokenized = tokenize_corpus(docs, make_config(true, stem, stopwords));
    return lm_similarity(tokenized.vectors.at("a"), tokenized.vectors.at("b"), tokenized.stats,
                         SmoothingParams{mu});
}

}  // namespace

PYBIND11_MODULE(_simfuse, m) {
    m.doc() = "Rank fusion by prestige propagation over a document-similarity graph";

    m.def("stem", [](const std::string& w) { return porter_stem(w); }, py::arg("word"),
          "Porter-stem a single lowercase word");

    m.def(
        "tokenize",
        [](const std::string& text, bool lowercase, bool stem,
           const std::vector<std::string>& stopwords) {
            return tokenize(text, make_config(lowercase, stem, stopwords));
        },
        py::arg("text"), py::arg("lowercase") = true, py::arg("stem") = false,
        py::arg("stopwords") = std::vector<std::string>{},
        "Split text into alphanumeric terms, then filter and normalize them");

    m.def("similarity", &py_similarity, py::arg("text1"), py::arg("text2"),
          py::arg("mu") = 1000.0, py::arg("stem") = true,
          py::arg("stopwords") = std::vector<std::string>{},
          "exp(-KL) similarity between two texts under Dirichlet-smoothed language models");

    m.def("fuse", &py_fuse, py::arg("lists"), py::arg("method") = "combsum",
          py::arg("corpus") = py::none(), py::arg("lam") = 0.5, py::arg("alpha") = 20,
          py::arg("k") = 20, py::arg("mu") = 1000.0, py::arg("stem") = true,
          py::arg("stopwords") = std::vector<std::string>{}, py::arg("pool_stats") = false,
          "Fuse scored lists of (doc_id, score) pairs into one ranking.\n"
          "Graph methods need corpus, a dict mapping doc_id to text.");

    m.def("methods", [] {
        std::vector<std::string> tokens;
        for (auto method : all_methods()) tokens.emplace_back(method_token(method));
        return tokens;
    });

    m.def(
        "precision_at",
        [](const std::vector<std::string>& ranking, const std::vector<std::string>& relevant,
           std::size_t n) { return precision_at(ranking_from(ranking), qrels_from(relevant), n); },
        py::arg("ranking"), py::arg("relevant"), py::arg("n"),
        "Fraction of the top n doc ids that appear in relevant");

    m.def(
        "average_precision",
        [](const std::vector<std::string>& ranking, const std::vector<std::string>& relevant,
           std::size_t k) {
            return average_precision_at_k(ranking_from(ranking), qrels_from(relevant), k);
        },
        py::arg("ranking"), py::arg("relevant"), py::arg("k") = 20,
        "Average precision of the top k, normalized by the total relevant count");

    py::class_<SignificanceResult>(m, "SignificanceResult")
        .def_readonly("p_value", &SignificanceResult::p_value)
        .def_readonly("n_effective", &SignificanceResult::n_effective)
        .def_readonly("exact", &SignificanceResult::exact)
        .def_readonly("significant_95", &SignificanceResult::significant_95)
        .def_readonly("significant_bonferroni", &SignificanceResult::significant_bonferroni)
        .def("__repr__", [](const SignificanceResult& r) {
            return "SignificanceResult(p_value=" + std::to_string(r.p_value) + ")";
        });

    m.def(
        "wilcoxon",
        [](const std::vector<double>& a, const std::vector<double>& b, double correction) {
            return wilcoxon_signed_rank(a, b, correction);
        },
        py::arg("a"), py::arg("b"), py::arg("correction_factor") = 4.0,
        "Two-sided Wilcoxon signed-rank test on paired samples");
}
