#include "semsearch/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "semsearch/artifact_io.hpp"
#include "semsearch/errors.hpp"
#include "semsearch/eval.hpp"
#include "semsearch/keyword_index.hpp"

namespace semsearch {

namespace {

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write artifact: " + path.string());
    return out;
}

nlohmann::json config_to_json(const PipelineConfig& config, const AnalysisConfig& analysis) {
    std::vector<std::string> stopwords(analysis.stopwords.begin(), analysis.stopwords.end());
    std::sort(stopwords.begin(), stopwords.end());
    return nlohmann::json{{"beta", config.beta},
                          {"max_iterations", config.max_iterations},
                          {"epsilon", config.epsilon},
                          {"exact_matching_limit", config.exact_matching_limit},
                          {"tau", config.tau},
                          {"sigma", config.sigma},
                          {"k", config.k},
                          {"weight_mode", to_string(config.weight_mode)},
                          {"stemming", config.stemming},
                          {"stopwords", stopwords}};
}

}  // namespace

BuildResult build_artifacts(const std::string& dataset_path, const PipelineConfig& config,
                            const ArtifactPaths& paths, const ParseOptions& parse_options,
                            ParseDiagnostics* diagnostics) {
    config.validate();

    const std::string dataset_bytes = read_file_bytes(dataset_path);
    AnalysisConfig analysis = config.analysis();

    // the build id covers the dataset bytes and everything that shapes output
    std::uint64_t hash = fnv1a64(dataset_bytes);
    hash = fnv1a64(config.canonical_string(), hash);
    {
        std::vector<std::string> stopwords(analysis.stopwords.begin(),
                                           analysis.stopwords.end());
        std::sort(stopwords.begin(), stopwords.end());
        for (const std::string& word : stopwords) hash = fnv1a64(word + "\n", hash);
    }
    const std::string build_id = to_hex(hash);

    ParseDiagnostics local_diagnostics;
    ParseDiagnostics* diag = diagnostics != nullptr ? diagnostics : &local_diagnostics;
    std::istringstream dataset_stream(dataset_bytes);
    RdfGraph graph = parse_ntriples(dataset_stream, parse_options, diag);

    auto corpus = LiteralSimTable::corpus(graph, analysis);
    IdfTable idf = corpus.empty() ? IdfTable::empty() : IdfTable::build(corpus);
    LiteralSimTable literals(graph, idf, analysis);

    PredicateWeights weights = compute_predicate_weights(graph, config.weight_mode);
    SimilarityMatrix sim = compute_similarity(graph, literals, weights, config.similarity());

    std::vector<EquivalenceClass> subject_classes =
        cluster(sim, config.clustering(), graph.subjects(), graph);
    SummaryGraph summary = build_summary(graph, std::move(subject_classes),
                                         config.clustering(), config.beta);

    KeywordIndex keyword_index = KeywordIndex::build(graph, analysis);
    GraphIndex graph_index = GraphIndex::build(summary, sim, graph);

    std::filesystem::create_directories(paths.dir);
    {
        auto out = open_for_write(paths.idf());
        idf.save(out, build_id);
    }
    {
        auto out = open_for_write(paths.similarity());
        sim.save(out, graph, build_id);
    }
    {
        auto out = open_for_write(paths.summary());
        summary.save(out, graph, build_id);
    }
    {
        auto out = open_for_write(paths.keyword_index());
        keyword_index.save(out, build_id);
    }
    {
        auto out = open_for_write(paths.graph_index());
        graph_index.save(out, build_id);
    }

    BuildResult result;
    result.build_id = build_id;
    result.stats.triples = graph.triple_count();
    result.stats.nodes = graph.node_count();
    result.stats.subjects = graph.subjects().size();
    result.stats.literals = corpus.size();
    result.stats.candidate_pairs = sim.pair_count();
    result.stats.iterations = sim.iterations;
    result.stats.final_delta = sim.delta_history.empty() ? 0.0 : sim.delta_history.back();
    result.stats.greedy_evaluations = sim.greedy_evaluations;
    result.stats.classes = summary.classes.size();
    result.stats.indexed_tokens = keyword_index.token_count();
    result.stats.skipped_lines = diag->skipped_lines;

    nlohmann::json manifest{
        {"format", "semsearch-manifest/1"},
        {"build_id", build_id},
        {"dataset", {{"path", dataset_path}, {"fnv1a64", to_hex(fnv1a64(dataset_bytes))}}},
        {"config", config_to_json(config, analysis)},
        {"stats",
         {{"triples", result.stats.triples},
          {"nodes", result.stats.nodes},
          {"subjects", result.stats.subjects},
          {"literals", result.stats.literals},
          {"candidate_pairs", result.stats.candidate_pairs},
          {"iterations", result.stats.iterations},
          {"final_delta", result.stats.final_delta},
          {"greedy_evaluations", result.stats.greedy_evaluations},
          {"classes", result.stats.classes},
          {"indexed_tokens", result.stats.indexed_tokens},
          {"skipped_lines", result.stats.skipped_lines}}}};
    result.manifest_json = manifest.dump(2) + "\n";
    {
        auto out = open_for_write(paths.manifest());
        out << result.manifest_json;
    }
    return result;
}

LoadedEngine load_engine(const ArtifactPaths& paths) {
    nlohmann::json manifest;
    {
        std::ifstream in(paths.manifest());
        if (!in) throw IoError("cannot open manifest: " + paths.manifest().string());
        try {
            in >> manifest;
        } catch (const nlohmann::json::exception& e) {
            throw IoError("manifest is not valid JSON: " + std::string(e.what()));
        }
    }
    if (manifest.value("format", "") != "semsearch-manifest/1")
        throw IoError("unsupported manifest format");
    const std::string build_id = manifest.value("build_id", "");
    if (build_id.empty()) throw IoError("manifest has no build id");

    PipelineConfig config;
    const auto& cfg = manifest.at("config");
    config.beta = cfg.at("beta").get<double>();
    config.max_iterations = cfg.at("max_iterations").get<int>();
    config.epsilon = cfg.at("epsilon").get<double>();
    config.exact_matching_limit = cfg.at("exact_matching_limit").get<std::size_t>();
    config.tau = cfg.at("tau").get<double>();
    config.sigma = cfg.at("sigma").get<double>();
    config.k = cfg.at("k").get<int>();
    auto mode = weight_mode_from_string(cfg.at("weight_mode").get<std::string>());
    if (!mode) throw IoError("manifest has unknown weight mode");
    config.weight_mode = *mode;
    config.stemming = cfg.at("stemming").get<bool>();

    AnalysisConfig analysis;
    analysis.stemming_enabled = config.stemming;
    analysis.stopwords.clear();
    for (const auto& word : cfg.at("stopwords"))
        analysis.stopwords.insert(word.get<std::string>());

    // the query path reads only the indexes, but a directory that mixes
    // builds is stale as a whole; check every artifact's header
    const std::pair<std::filesystem::path, const char*> checked[] = {
        {paths.idf(), "idf"}, {paths.similarity(), "sim"}, {paths.summary(), "summary"}};
    for (const auto& [path, kind] : checked) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open artifact: " + path.string());
        read_artifact_header(in, kind, 1, build_id);
    }

    KeywordIndex keyword_index;
    {
        std::ifstream in(paths.keyword_index());
        if (!in) throw IoError("cannot open artifact: " + paths.keyword_index().string());
        keyword_index = KeywordIndex::load(in, build_id);
    }
    GraphIndex graph_index;
    {
        std::ifstream in(paths.graph_index());
        if (!in) throw IoError("cannot open artifact: " + paths.graph_index().string());
        graph_index = GraphIndex::load(in, build_id);
    }

    return LoadedEngine{SearchEngine(std::move(analysis), std::move(keyword_index),
                                     std::move(graph_index), config.searching()),
                        build_id, manifest.dump(2) + "\n", config};
}

}  // namespace semsearch
