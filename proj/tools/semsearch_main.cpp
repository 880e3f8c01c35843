// semsearch command line: build artifacts from an N-Triples dataset, run
// keyword queries (one-shot or REPL), evaluate against a gold file, or serve
// queries over HTTP. Exit codes: 0 success, 1 runtime failure, 2 usage or
// validation error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <unistd.h>

#include "semsearch/errors.hpp"
#include "semsearch/eval.hpp"
#include "semsearch/pipeline.hpp"
#include "semsearch/server.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CliOverrides {
    double beta = 0.0;
    int max_iterations = 0;
    double epsilon = 0.0;
    std::size_t exact_matching_limit = 0;
    double tau = 0.0;
    double sigma = 0.0;
    int k = 0;
    std::string weight_mode;
    bool stemming = true;
    std::string stopword_file;
};

// Registers the shared tuning flags on a (sub)command; values only apply
// when the user passed the flag, so config-file values survive otherwise.
void add_config_flags(CLI::App* cmd, CliOverrides& values) {
    cmd->add_option("--beta", values.beta, "decay factor in (0,1)");
    cmd->add_option("--max-iterations", values.max_iterations, "similarity iteration cap");
    cmd->add_option("--epsilon", values.epsilon, "convergence tolerance");
    cmd->add_option("--exact-matching-limit", values.exact_matching_limit,
                    "exact assignment up to this neighborhood size");
    cmd->add_option("--tau", values.tau, "clustering merge threshold");
    cmd->add_option("--sigma", values.sigma, "augmentation similarity threshold");
    cmd->add_option("-k,--top-k", values.k, "result count");
    cmd->add_option("--weight-mode", values.weight_mode, "uniform or rarity");
    cmd->add_flag("--stemming,!--no-stemming", values.stemming, "toggle stemming");
    cmd->add_option("--stopwords", values.stopword_file, "stopword list file");
}

void apply_overrides(const CLI::App* cmd, const CliOverrides& values,
                     semsearch::PipelineConfig& config) {
    if (cmd->count("--beta")) config.beta = values.beta;
    if (cmd->count("--max-iterations")) config.max_iterations = values.max_iterations;
    if (cmd->count("--epsilon")) config.epsilon = values.epsilon;
    if (cmd->count("--exact-matching-limit"))
        config.exact_matching_limit = values.exact_matching_limit;
    if (cmd->count("--tau")) config.tau = values.tau;
    if (cmd->count("--sigma")) config.sigma = values.sigma;
    if (cmd->count("-k")) config.k = values.k;
    if (cmd->count("--weight-mode")) config.apply("weight_mode", values.weight_mode);
    if (cmd->count("--stemming") || cmd->count("--no-stemming"))
        config.stemming = values.stemming;
    if (cmd->count("--stopwords")) config.stopword_file = values.stopword_file;
}

semsearch::PipelineConfig base_config(const std::string& config_file) {
    std::string path = config_file;
    if (path.empty()) {
        if (const char* env = std::getenv("SEMSEARCH_CONFIG")) path = env;
    }
    if (path.empty()) return {};
    return semsearch::load_config_file(path);
}

int run_query_repl(const semsearch::LoadedEngine& loaded, const semsearch::SearchConfig& cfg,
                   bool json) {
    const bool interactive = isatty(fileno(stdin)) != 0;
    std::string line;
    while (true) {
        if (interactive) std::cerr << "semsearch> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        try {
            auto results = loaded.engine.search(line, cfg);
            if (json)
                semsearch::render_results_json_lines(std::cout, results);
            else
                semsearch::render_results_table(std::cout, results);
        } catch (const semsearch::QueryError& e) {
            std::cerr << "invalid query: " << e.what() << std::endl;
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"keyword semantic search over RDF graphs"};
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file,
                   "key=value config file (or set SEMSEARCH_CONFIG)");

    // build
    auto* build = app.add_subcommand("build", "parse a dataset and build all artifacts");
    std::string build_data;
    std::string build_out = "artifacts";
    bool build_lenient = false;
    CliOverrides build_overrides;
    build->add_option("data", build_data, "N-Triples dataset (.nt)")->required();
    build->add_option("-o,--out", build_out, "artifact output directory");
    build->add_flag("--lenient", build_lenient, "skip malformed lines instead of failing");
    add_config_flags(build, build_overrides);

    // query
    auto* query = app.add_subcommand("query", "run a keyword query (REPL without an argument)");
    std::string query_artifacts = "artifacts";
    std::string query_string;
    bool query_json = false;
    int query_k = 0;
    query->add_option("querystring", query_string, "keyword query (omit for REPL)");
    query->add_option("-a,--artifacts", query_artifacts, "artifact directory");
    query->add_option("-k,--top-k", query_k, "result count");
    query->add_flag("--json", query_json, "JSON-lines output");

    // eval
    auto* eval = app.add_subcommand("eval", "precision/recall/F over a gold file");
    std::string eval_artifacts = "artifacts";
    std::string eval_gold;
    bool eval_json = false;
    int eval_k = 0;
    eval->add_option("gold", eval_gold, "gold file: query \\t iri,iri,...")->required();
    eval->add_option("-a,--artifacts", eval_artifacts, "artifact directory");
    eval->add_option("-k,--top-k", eval_k, "result cutoff");
    eval->add_flag("--json", eval_json, "JSON report");

    // serve
    auto* serve = app.add_subcommand("serve", "serve /search and /health over HTTP");
    std::string serve_artifacts = "artifacts";
    std::string serve_host = "127.0.0.1";
    int serve_port = 8080;
    serve->add_option("-a,--artifacts", serve_artifacts, "artifact directory");
    serve->add_option("--host", serve_host, "bind address");
    serve->add_option("-p,--port", serve_port, "port");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) {
            semsearch::PipelineConfig config = base_config(config_file);
            apply_overrides(build, build_overrides, config);
            config.validate();
            if (!std::filesystem::exists(build_data)) {
                std::cerr << "no such dataset: " << build_data << std::endl;
                return kExitUsage;
            }
            semsearch::ParseDiagnostics diagnostics;
            semsearch::ArtifactPaths paths{build_out};
            auto result = semsearch::build_artifacts(build_data, config, paths,
                                                     {build_lenient}, &diagnostics);
            if (diagnostics.skipped_lines > 0) {
                std::cerr << "skipped " << diagnostics.skipped_lines
                          << " malformed line(s)" << std::endl;
                for (const std::string& message : diagnostics.messages)
                    std::cerr << "  " << message << std::endl;
            }
            std::cout << "build " << result.build_id << ": " << result.stats.triples
                      << " triples, " << result.stats.subjects << " subjects, "
                      << result.stats.candidate_pairs << " candidate pairs, "
                      << result.stats.classes << " classes, converged after "
                      << result.stats.iterations << " iteration(s)" << std::endl;
            std::cout << "artifacts written to " << paths.dir.string() << std::endl;
            return kExitOk;
        }

        if (query->parsed()) {
            auto loaded = semsearch::load_engine({query_artifacts});
            semsearch::SearchConfig cfg = loaded.engine.defaults();
            if (query->count("-k")) {
                if (query_k < 1) {
                    std::cerr << "k must be >= 1" << std::endl;
                    return kExitUsage;
                }
                cfg.k = query_k;
            }
            if (!query->count("querystring"))
                return run_query_repl(loaded, cfg, query_json);
            try {
                auto results = loaded.engine.search(query_string, cfg);
                if (query_json)
                    semsearch::render_results_json_lines(std::cout, results);
                else
                    semsearch::render_results_table(std::cout, results);
            } catch (const semsearch::QueryError& e) {
                std::cerr << "invalid query: " << e.what() << std::endl;
                return kExitUsage;
            }
            return kExitOk;
        }

        if (eval->parsed()) {
            auto loaded = semsearch::load_engine({eval_artifacts});
            int cutoff = loaded.config.k;
            if (eval->count("-k")) {
                if (eval_k < 1) {
                    std::cerr << "k must be >= 1" << std::endl;
                    return kExitUsage;
                }
                cutoff = eval_k;
            }
            semsearch::GoldSet gold;
            try {
                gold = semsearch::load_gold_file(eval_gold);
            } catch (const semsearch::IoError& e) {
                std::cerr << e.what() << std::endl;
                return kExitUsage;
            }
            auto report = semsearch::evaluate(loaded.engine, gold, cutoff);
            if (eval_json)
                std::cout << semsearch::report_to_json(report) << std::endl;
            else
                semsearch::render_report_table(std::cout, report);
            return kExitOk;
        }

        if (serve->parsed()) {
            auto loaded = semsearch::load_engine({serve_artifacts});
            auto server = semsearch::make_query_server(loaded);
            std::cerr << "serving " << loaded.build_id << " on http://" << serve_host << ':'
                      << serve_port << std::endl;
            if (!server->listen(serve_host, serve_port)) {
                std::cerr << "cannot bind " << serve_host << ':' << serve_port << std::endl;
                return kExitUsage;
            }
            return kExitOk;
        }
    } catch (const semsearch::ConfigError& e) {
        std::cerr << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << std::endl;
        return kExitRuntime;
    }
    return kExitUsage;
}
