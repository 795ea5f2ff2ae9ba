#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simfuse/corpus.hpp"
#include "simfuse/eval.hpp"
#include "simfuse/fusion.hpp"
#include "simfuse/fusion_graph.hpp"
#include "simfuse/harness.hpp"
#include "simfuse/runio.hpp"
#include "simfuse/similarity.hpp"

namespace {

using namespace simfuse;

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

struct Options {
    std::vector<std::string> run_paths;
    std::string corpus_path;
    std::string qrels_path;
    std::string stopwords_path;
    std::string out_path;
    std::string fused_out_path;
    std::string sim_cache_path;
    std::string dump_graph_path;
    std::string method_token = "combsum";
    std::string tag;
    std::vector<double> grid_lambda;
    std::vector<std::size_t> grid_alpha;
    std::vector<std::size_t> curve_ks;
    double lambda = 0.5;
    std::size_t alpha = 20;
    std::size_t k = 20;
    double mu = 1000.0;
    double bonferroni = 4.0;
    bool stem = true;
    bool pool_stats = false;
    std::uint64_t seed = 0;
    std::size_t samples = 20;
    std::size_t select_count = 3;
};

const std::vector<std::string>& method_tokens() {
    static const std::vector<std::string> tokens = [] {
        std::vector<std::string> t;
        for (auto m : all_methods()) t.emplace_back(method_token(m));
        return t;
    }();
    return tokens;
}

Track load_track(const Options& o) {
    std::vector<RunSet> runs;
    runs.reserve(o.run_paths.size());
    for (const auto& path : o.run_paths) {
        auto in = open_input(path);
        runs.push_back(parse_run(in));
    }
    QrelSet qrels;
    if (!o.qrels_path.empty()) {
        auto in = open_input(o.qrels_path);
        qrels = parse_qrels(in);
    }
    return Track::assemble(std::move(runs), std::move(qrels));
}

std::optional<TokenizedCorpus> load_corpus_opt(const Options& o) {
    if (o.corpus_path.empty()) return std::nullopt;
    auto in = open_input(o.corpus_path);
    PipelineConfig config;
    config.lowercase = true;
    config.stemming = o.stem;
    if (!o.stopwords_path.empty()) {
        auto sw = open_input(o.stopwords_path);
        config.stopwords = load_stopwords(sw);
    }
    return tokenize_corpus(load_corpus(in), config);
}

SweepGrid grid_from(const Options& o) {
    SweepGrid grid = SweepGrid::defaults();
    grid.k = o.k;
    if (!o.grid_lambda.empty()) grid.lambda_values = o.grid_lambda;
    if (!o.grid_alpha.empty()) grid.alpha_values = o.grid_alpha;
    return grid;
}

struct CacheFile {
    SimilarityCache cache;
    std::string path;

    explicit CacheFile(const std::string& cache_path) : path(cache_path) {
        if (path.empty() || !std::filesystem::exists(path)) return;
        auto in = open_input(path);
        cache.load(in);
    }

    ~CacheFile() {
        if (path.empty()) return;
        try {
            auto out = open_output(path);
            cache.save(out);
        } catch (...) {
        }
    }

    SimilarityCache* ptr() { return path.empty() ? nullptr : &cache; }
};

// Per-run metric vectors over a fixed query order, for paired tests.
struct SystemMetrics {
    std::string name;
    std::vector<double> p5;
    std::vector<double> p10;
    std::vector<double> ap;

    double mean(const std::vector<double>& v) const {
        if (v.empty()) return 0.0;
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    }
};

SystemMetrics metrics_for_run(const Track& track, std::size_t run_index,
                              const std::vector<std::string>& query_ids, std::size_t k) {
    SystemMetrics sm;
    sm.name = track.run_tags[run_index];
    for (const auto& qid : query_ids) {
        FusedRanking ranking{qid, {}};
        auto it = track.runs[run_index].find(qid);
        if (it != track.runs[run_index].end()) ranking = to_ranking(truncate(it->second, k));
        sm.p5.push_back(precision_at(ranking, track.qrels, 5));
        sm.p10.push_back(precision_at(ranking, track.qrels, 10));
        sm.ap.push_back(average_precision_at_k(ranking, track.qrels, k));
    }
    return sm;
}

std::string marks(const SignificanceResult& r) {
    if (r.significant_bonferroni) return "**";
    if (r.significant_95) return "*";
    return "";
}

void print_comparison(std::ostream& os, const SystemMetrics& system, const SystemMetrics& other,
                      double bonferroni) {
    auto p5 = wilcoxon_signed_rank(system.p5, other.p5, bonferroni);
    auto p10 = wilcoxon_signed_rank(system.p10, other.p10, bonferroni);
    auto ap = wilcoxon_signed_rank(system.ap, other.ap, bonferroni);
    os << "  vs " << other.name << ": p@5 p=" << fmt6(p5.p_value) << marks(p5)
       << "  p@10 p=" << fmt6(p10.p_value) << marks(p10) << "  map p=" << fmt6(ap.p_value)
       << marks(ap) << "\n";
}

void print_system_line(std::ostream& os, const SystemMetrics& sm) {
    os << sm.name << ": p@5=" << fmt6(sm.mean(sm.p5)) << " p@10=" << fmt6(sm.mean(sm.p10))
       << " map=" << fmt6(sm.mean(sm.ap)) << " (" << sm.p5.size() << " queries)\n";
}

void dump_graphs(const Options& o, const FusionEngine::PreparedQuery& prepared,
                 FusionMethod method, std::ostream& out) {
    auto nodes = build_nodes(prepared.normalized, method_node_kind(method),
                             method_query_sim(method));
    FusionGraph graph(std::move(nodes), prepared.sims, o.lambda, o.alpha);
    out << "query " << prepared.query_id << '\n';
    graph.dump(out);
}

int cmd_fuse(const Options& o) {
    auto method = parse_method(o.method_token).value();
    bool graph = is_graph_method(method);
    Track track = load_track(o);
    auto corpus = load_corpus_opt(o);
    if (graph && !corpus) throw std::runtime_error("graph methods need --corpus");
    CacheFile cache(o.sim_cache_path);
    FusionEngine engine(corpus ? &*corpus : nullptr, SmoothingParams{o.mu}, o.pool_stats,
                        cache.ptr());

    std::unique_ptr<std::ofstream> out_file;
    if (!o.out_path.empty()) out_file = std::make_unique<std::ofstream>(open_output(o.out_path));
    std::ostream& out = out_file ? *out_file : std::cout;

    std::unique_ptr<std::ofstream> dump_file;
    if (!o.dump_graph_path.empty() && graph)
        dump_file = std::make_unique<std::ofstream>(open_output(o.dump_graph_path));

    std::string tag = o.tag.empty() ? std::string(method_token(method)) : o.tag;
    SystemMetrics fused;
    fused.name = tag;
    std::vector<std::string> evaluated;
    for (const auto& qid : track.query_ids) {
        auto lists = track.lists_for(qid);
        if (lists.empty()) continue;
        auto prepared = engine.prepare(qid, lists, o.k, graph);
        if (dump_file) dump_graphs(o, prepared, method, *dump_file);
        auto ranking = engine.run(prepared, method, o.lambda, o.alpha);
        write_run(ranking, tag, out);
        evaluated.push_back(qid);
        fused.p5.push_back(precision_at(ranking, track.qrels, 5));
        fused.p10.push_back(precision_at(ranking, track.qrels, 10));
        fused.ap.push_back(average_precision_at_k(ranking, track.qrels, o.k));
    }

    if (!o.qrels_path.empty() && !evaluated.empty()) {
        print_system_line(std::cerr, fused);
        for (std::size_t i = 0; i < track.runs.size(); ++i) {
            auto other = metrics_for_run(track, i, evaluated, o.k);
            print_system_line(std::cerr, other);
            print_comparison(std::cerr, fused, other, o.bonferroni);
        }
    }
    return 0;
}

int cmd_eval(const Options& o) {
    Track track = load_track(o);
    std::size_t n_runs = track.runs.size();
    std::vector<SystemMetrics> systems;
    systems.reserve(n_runs);
    for (std::size_t i = 0; i < n_runs; ++i)
        systems.push_back(metrics_for_run(track, i, track.query_ids, o.k));

    for (std::size_t i = 0; i < n_runs; ++i) {
        print_system_line(std::cout, systems[i]);
        if (i > 0) print_comparison(std::cout, systems[i], systems[0], o.bonferroni);
    }

    if (!o.out_path.empty()) {
        auto csv = open_output(o.out_path);
        csv << "system,metric,mean,p_vs_" << systems[0].name << ",significant_95,significant_corrected\n";
        for (std::size_t i = 0; i < n_runs; ++i) {
            const auto& sm = systems[i];
            struct Row {
                const char* metric;
                const std::vector<double>& values;
            } rows[] = {{"p5", sm.p5}, {"p10", sm.p10}, {"map", sm.ap}};
            for (const auto& row : rows) {
                csv << sm.name << ',' << row.metric << ',' << fmt6(sm.mean(row.values));
                if (i == 0) {
                    csv << ",,,\n";
                } else {
                    auto sig = wilcoxon_signed_rank(
                        row.values,
                        row.metric == std::string("p5")    ? systems[0].p5
                        : row.metric == std::string("p10") ? systems[0].p10
                                                           : systems[0].ap,
                        o.bonferroni);
                    csv << ',' << fmt6(sig.p_value) << ',' << (sig.significant_95 ? 1 : 0) << ','
                        << (sig.significant_bonferroni ? 1 : 0) << '\n';
                }
            }
        }
    }
    return 0;
}

GridEvaluation evaluate_for(const Options& o, Track& track,
                            std::optional<TokenizedCorpus>& corpus, SimilarityCache* cache) {
    auto method = parse_method(o.method_token).value();
    if (is_graph_method(method) && !corpus)
        throw std::runtime_error("graph methods need --corpus");
    FusionEngine engine(corpus ? &*corpus : nullptr, SmoothingParams{o.mu}, o.pool_stats, cache);
    return evaluate_grid(engine, track, method, grid_from(o));
}

int cmd_sweep(const Options& o) {
    auto method = parse_method(o.method_token).value();
    Track track = load_track(o);
    auto corpus = load_corpus_opt(o);
    CacheFile cache(o.sim_cache_path);
    auto ge = evaluate_for(o, track, corpus, cache.ptr());
    auto result = sweep(ge);

    const auto& best = result.table[result.best_index];
    std::cout << "method " << o.method_token << ": best lambda=" << fmt6(result.best.lambda)
              << " alpha=" << result.best.alpha << " p@5=" << fmt6(best.mean_p5)
              << " p@10=" << fmt6(best.mean_p10) << " map=" << fmt6(best.mean_ap) << " ("
              << ge.query_ids.size() << " queries)\n";

    SystemMetrics fused;
    fused.name = o.method_token;
    for (const auto& qm : ge.metrics[result.best_index]) {
        fused.p5.push_back(qm.p5);
        fused.p10.push_back(qm.p10);
        fused.ap.push_back(qm.ap);
    }
    if (!o.qrels_path.empty()) {
        for (std::size_t i = 0; i < track.runs.size(); ++i) {
            auto other = metrics_for_run(track, i, ge.query_ids, o.k);
            print_system_line(std::cout, other);
            print_comparison(std::cout, fused, other, o.bonferroni);
        }
    }

    if (!o.out_path.empty()) {
        auto csv = open_output(o.out_path);
        csv << "lambda,alpha,mean_p5,mean_p10,mean_map\n";
        for (const auto& cell : result.table)
            csv << fmt6(cell.point.lambda) << ',' << cell.point.alpha << ',' << fmt6(cell.mean_p5)
                << ',' << fmt6(cell.mean_p10) << ',' << fmt6(cell.mean_ap) << '\n';
    }

    if (!o.fused_out_path.empty()) {
        FusionEngine engine(corpus ? &*corpus : nullptr, SmoothingParams{o.mu}, o.pool_stats,
                            cache.ptr());
        auto out = open_output(o.fused_out_path);
        std::string tag = o.tag.empty() ? std::string(method_token(method)) : o.tag;
        for (const auto& qid : ge.query_ids) {
            auto prepared = engine.prepare(qid, track.lists_for(qid), o.k, is_graph_method(method));
            auto ranking = engine.run(prepared, method, result.best.lambda, result.best.alpha);
            write_run(ranking, tag, out);
        }
    }
    return 0;
}

int cmd_cv(const Options& o) {
    Track track = load_track(o);
    auto corpus = load_corpus_opt(o);
    CacheFile cache(o.sim_cache_path);
    auto ge = evaluate_for(o, track, corpus, cache.ptr());
    auto cv = loo_cross_validation(ge);

    std::cout << "method " << o.method_token << " cross-validation: p@5=" << fmt6(cv.mean.p5)
              << " p@10=" << fmt6(cv.mean.p10) << " map=" << fmt6(cv.mean.ap) << " ("
              << cv.folds.size() << " folds)\n";
    if (!o.out_path.empty()) {
        auto csv = open_output(o.out_path);
        csv << "query,lambda,alpha,p5,p10,ap\n";
        for (const auto& fold : cv.folds)
            csv << fold.query_id << ',' << fmt6(fold.chosen.lambda) << ',' << fold.chosen.alpha
                << ',' << fmt6(fold.held_out.p5) << ',' << fmt6(fold.held_out.p10) << ','
                << fmt6(fold.held_out.ap) << '\n';
        csv << "mean,,," << fmt6(cv.mean.p5) << ',' << fmt6(cv.mean.p10) << ','
            << fmt6(cv.mean.ap) << '\n';
    }
    return 0;
}

int cmd_oracle(const Options& o) {
    Track track = load_track(o);
    auto corpus = load_corpus_opt(o);
    CacheFile cache(o.sim_cache_path);
    auto ge = evaluate_for(o, track, corpus, cache.ptr());
    auto oracle = per_query_upper_bound(ge);

    std::cout << "method " << o.method_token << " per-query oracle: p@5=" << fmt6(oracle.mean.p5)
              << " p@10=" << fmt6(oracle.mean.p10) << " map=" << fmt6(oracle.mean.ap) << " ("
              << oracle.choices.size() << " queries)\n";
    if (!o.out_path.empty()) {
        auto csv = open_output(o.out_path);
        csv << "query,lambda,alpha,p5,p10,ap\n";
        for (const auto& choice : oracle.choices)
            csv << choice.query_id << ',' << fmt6(choice.chosen.lambda) << ',' << choice.chosen.alpha
                << ',' << fmt6(choice.metrics.p5) << ',' << fmt6(choice.metrics.p10) << ','
                << fmt6(choice.metrics.ap) << '\n';
        csv << "mean,,," << fmt6(oracle.mean.p5) << ',' << fmt6(oracle.mean.p10) << ','
            << fmt6(oracle.mean.ap) << '\n';
    }
    return 0;
}

int cmd_sample(const Options& o) {
    Track track = load_track(o);
    std::vector<const RunSet*> runs;
    for (const auto& r : track.runs) runs.push_back(&r);
    auto ranked = rank_runs_by_map(runs, track.run_tags, track.qrels, o.k);
    auto triples = random_triplets(ranked, o.seed, o.samples);

    std::unique_ptr<std::ofstream> out_file;
    if (!o.out_path.empty()) out_file = std::make_unique<std::ofstream>(open_output(o.out_path));
    std::ostream& out = out_file ? *out_file : std::cout;
    out << "sample,run1,run2,run3\n";
    for (std::size_t i = 0; i < triples.size(); ++i)
        out << (i + 1) << ',' << track.run_tags[triples[i][0]] << ','
            << track.run_tags[triples[i][1]] << ',' << track.run_tags[triples[i][2]] << '\n';
    return 0;
}

int cmd_overlap(const Options& o) {
    Track track = load_track(o);
    std::vector<std::vector<RunList>> groups;
    for (const auto& qid : track.query_ids) {
        auto lists = track.lists_for(qid);
        // Keep multiplicity buckets comparable: only queries covered by
        // every run participate.
        if (lists.size() != track.runs.size()) continue;
        std::vector<RunList> group;
        group.reserve(lists.size());
        for (const auto& list : lists) group.push_back(truncate(list, o.k));
        groups.push_back(std::move(group));
    }
    if (groups.empty()) throw std::runtime_error("no query is covered by every run");
    auto report = overlap_analysis_pooled(groups, track.qrels);

    std::unique_ptr<std::ofstream> out_file;
    if (!o.out_path.empty()) out_file = std::make_unique<std::ofstream>(open_output(o.out_path));
    std::ostream& out = out_file ? *out_file : std::cout;

    out << "group";
    for (std::size_t m = 1; m <= report.list_count; ++m) out << ",in_" << m;
    out << ",total\n";
    out << "relevant";
    for (double pct : report.relevant_pct) out << ',' << fmt6(pct);
    out << ',' << report.relevant_total << '\n';
    out << "nonrelevant";
    for (double pct : report.nonrelevant_pct) out << ',' << fmt6(pct);
    out << ',' << report.nonrelevant_total << '\n';

    if (!o.curve_ks.empty()) {
        std::vector<std::vector<RunList>> full_groups;
        for (const auto& qid : track.query_ids) {
            auto lists = track.lists_for(qid);
            if (lists.size() == track.runs.size()) full_groups.push_back(std::move(lists));
        }
        out << "k,relevant_in_one_pct\n";
        for (const auto& [k, pct] :
             singleton_relevant_curve(full_groups, track.qrels, o.curve_ks))
            out << k << ',' << fmt6(pct) << '\n';
    }
    return 0;
}

int cmd_select_runs(const Options& o) {
    Track track = load_track(o);
    std::vector<const RunSet*> runs;
    for (const auto& r : track.runs) runs.push_back(&r);
    auto ranked = rank_runs_by_map(runs, track.run_tags, track.qrels, o.k);
    std::size_t m = std::min(o.select_count, ranked.size());

    std::unique_ptr<std::ofstream> out_file;
    if (!o.out_path.empty()) out_file = std::make_unique<std::ofstream>(open_output(o.out_path));
    std::ostream& out = out_file ? *out_file : std::cout;
    out << "rank,run_tag,map\n";
    for (std::size_t i = 0; i < m; ++i)
        out << (i + 1) << ',' << ranked[i].tag << ',' << fmt6(ranked[i].map) << '\n';
    return 0;
}

void add_common(CLI::App* cmd, Options& o, bool needs_runs = true) {
    auto* runs = cmd->add_option("--runs", o.run_paths, "Run files in TREC format");
    if (needs_runs) runs->required()->expected(1, -1);
    cmd->add_option("--qrels", o.qrels_path, "Relevance judgments in TREC qrels format");
    cmd->add_option("--k", o.k, "Depth each run is cut to before fusion")->capture_default_str();
}

void add_corpus(CLI::App* cmd, Options& o) {
    cmd->add_option("--corpus", o.corpus_path, "JSONL corpus with id and text fields");
    cmd->add_option("--stopwords", o.stopwords_path, "Stopword file, one term per line");
    cmd->add_option("--mu", o.mu, "Dirichlet smoothing mass")->capture_default_str();
    cmd->add_flag("--stem,!--no-stem", o.stem, "Porter-stem corpus terms")->capture_default_str();
    cmd->add_flag("--pool-stats", o.pool_stats,
                  "Estimate collection statistics from each query's pooled documents only");
    cmd->add_option("--sim-cache", o.sim_cache_path,
                    "Similarity cache file, read if present and updated on exit");
}

void add_method(CLI::App* cmd, Options& o) {
    cmd->add_option("--method", o.method_token, "Fusion method")
        ->check(CLI::IsMember(method_tokens()))
        ->capture_default_str();
}

void add_grid(CLI::App* cmd, Options& o) {
    cmd->add_option("--grid-lambda", o.grid_lambda, "Comma-separated lambda grid")->delimiter(',');
    cmd->add_option("--grid-alpha", o.grid_alpha, "Comma-separated alpha grid")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuse ranked retrieval lists by prestige propagation over a document-similarity graph"};
    app.require_subcommand(1);
    // Set before add_subcommand so it is inherited; lets --config appear after the subcommand.
    app.fallthrough();
    app.set_config("--config", "",
                   "Read options from a config file with one [subcommand] section per subcommand");
    app.allow_config_extras(CLI::config_extras_mode::error);
    Options o;

    auto* fuse_cmd = app.add_subcommand("fuse", "Fuse runs into a single ranking");
    add_common(fuse_cmd, o);
    add_corpus(fuse_cmd, o);
    add_method(fuse_cmd, o);
    fuse_cmd->add_option("--lambda", o.lambda, "Query-affinity interpolation weight")
        ->capture_default_str();
    fuse_cmd->add_option("--alpha", o.alpha, "Neighborhood size")->capture_default_str();
    fuse_cmd->add_option("--out", o.out_path, "Write the fused run here instead of stdout");
    fuse_cmd->add_option("--tag", o.tag, "Run tag for the output (defaults to the method)");
    fuse_cmd->add_option("--dump-graph", o.dump_graph_path, "Write per-query graph dumps here");
    fuse_cmd->callback([&] { cmd_fuse(o); });

    auto* eval_cmd = app.add_subcommand("eval", "Score runs against qrels");
    add_common(eval_cmd, o);
    eval_cmd->get_option("--qrels")->required();
    eval_cmd->add_option("--out", o.out_path, "Write a CSV metric table here");
    eval_cmd->add_option("--bonferroni", o.bonferroni, "Significance correction factor")
        ->capture_default_str();
    eval_cmd->callback([&] { cmd_eval(o); });

    auto* sweep_cmd = app.add_subcommand("sweep", "Grid-search lambda and alpha");
    add_common(sweep_cmd, o);
    sweep_cmd->get_option("--qrels")->required();
    add_corpus(sweep_cmd, o);
    add_method(sweep_cmd, o);
    add_grid(sweep_cmd, o);
    sweep_cmd->add_option("--out", o.out_path, "Write the grid table CSV here");
    sweep_cmd->add_option("--fused-out", o.fused_out_path, "Write the best point's fused run here");
    sweep_cmd->add_option("--tag", o.tag, "Run tag for --fused-out");
    sweep_cmd->add_option("--bonferroni", o.bonferroni, "Significance correction factor")
        ->capture_default_str();
    sweep_cmd->callback([&] { cmd_sweep(o); });

    auto* cv_cmd = app.add_subcommand("cv", "Leave-one-out cross-validation");
    add_common(cv_cmd, o);
    cv_cmd->get_option("--qrels")->required();
    add_corpus(cv_cmd, o);
    add_method(cv_cmd, o);
    add_grid(cv_cmd, o);
    cv_cmd->add_option("--out", o.out_path, "Write per-fold CSV here");
    cv_cmd->callback([&] { cmd_cv(o); });

    auto* oracle_cmd = app.add_subcommand("oracle", "Per-query best-parameter upper bound");
    add_common(oracle_cmd, o);
    oracle_cmd->get_option("--qrels")->required();
    add_corpus(oracle_cmd, o);
    add_method(oracle_cmd, o);
    add_grid(oracle_cmd, o);
    oracle_cmd->add_option("--out", o.out_path, "Write per-query CSV here");
    oracle_cmd->callback([&] { cmd_oracle(o); });

    auto* sample_cmd = app.add_subcommand("sample", "Sample random run triplets");
    add_common(sample_cmd, o);
    sample_cmd->get_option("--qrels")->required();
    sample_cmd->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
    sample_cmd->add_option("--samples", o.samples, "Number of triplets")->capture_default_str();
    sample_cmd->add_option("--out", o.out_path, "Write the triplet CSV here");
    sample_cmd->callback([&] { cmd_sample(o); });

    auto* overlap_cmd = app.add_subcommand("overlap", "Document overlap across runs");
    add_common(overlap_cmd, o);
    overlap_cmd->get_option("--qrels")->required();
    overlap_cmd->add_option("--curve-k", o.curve_ks,
                            "Comma-separated depths for the singleton-relevant curve")
        ->delimiter(',');
    overlap_cmd->add_option("--out", o.out_path, "Write the overlap CSV here");
    overlap_cmd->callback([&] { cmd_overlap(o); });

    auto* select_cmd = app.add_subcommand("select-runs", "Order runs by MAP and keep the best");
    add_common(select_cmd, o);
    select_cmd->get_option("--qrels")->required();
    select_cmd->add_option("-m,--count", o.select_count, "How many runs to keep")
        ->capture_default_str();
    select_cmd->add_option("--out", o.out_path, "Write the selection CSV here");
    select_cmd->callback([&] { cmd_select_runs(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
