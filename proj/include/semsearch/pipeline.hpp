#pragma once

#include <filesystem>
#include <string>

#include "semsearch/config.hpp"
#include "semsearch/search.hpp"

namespace semsearch {

// Locations of the five persisted artifacts plus the manifest.
struct ArtifactPaths {
    std::filesystem::path dir;

    std::filesystem::path idf() const { return dir / "idf.tsv"; }
    std::filesystem::path similarity() const { return dir / "similarity.tsv"; }
    std::filesystem::path summary() const { return dir / "summary.tsv"; }
    std::filesystem::path keyword_index() const { return dir / "keyword_index.tsv"; }
    std::filesystem::path graph_index() const { return dir / "graph_index.tsv"; }
    std::filesystem::path manifest() const { return dir / "manifest.json"; }
};

struct BuildStats {
    std::size_t triples = 0;
    std::size_t nodes = 0;
    std::size_t subjects = 0;
    std::size_t literals = 0;
    std::size_t candidate_pairs = 0;
    int iterations = 0;
    double final_delta = 0.0;
    std::size_t greedy_evaluations = 0;
    std::size_t classes = 0;
    std::size_t indexed_tokens = 0;
    std::size_t skipped_lines = 0;
};

struct BuildResult {
    std::string build_id;
    BuildStats stats;
    std::string manifest_json;
};

// Full preprocessing pass: parse, idf, pairwise similarity, clustering,
// summary graph, keyword and graph indexes, all persisted with the manifest.
// Deterministic: identical dataset + config produce byte-identical files.
BuildResult build_artifacts(const std::string& dataset_path, const PipelineConfig& config,
                            const ArtifactPaths& paths, const ParseOptions& parse_options = {},
                            ParseDiagnostics* diagnostics = nullptr);

struct LoadedEngine {
    SearchEngine engine;
    std::string build_id;
    std::string manifest_json;
    PipelineConfig config;
};

// Loads the query-time artifacts, refusing any whose build id disagrees with
// the manifest. The analysis settings (stemming, effective stopword list)
// come from the manifest so queries normalize exactly as the build did.
LoadedEngine load_engine(const ArtifactPaths& paths);

}  // namespace semsearch
