#pragma once

#include <string>

#include "semsearch/rdf.hpp"
#include "semsearch/search.hpp"
#include "semsearch/similarity.hpp"
#include "semsearch/summary.hpp"
#include "semsearch/text.hpp"

namespace semsearch {

// Every tunable of the build/query pipeline, with the module defaults.
// Loadable from a flat key=value file; unknown keys are rejected.
struct PipelineConfig {
    double beta = 0.15;
    int max_iterations = 10;
    double epsilon = 1e-4;
    std::size_t exact_matching_limit = 8;
    double tau = 0.7;
    double sigma = 0.3;
    int k = 10;
    WeightMode weight_mode = WeightMode::Uniform;
    bool stemming = true;
    std::string stopword_file;  // empty = built-in list
    std::string data_path;
    std::string artifacts_dir;

    // Throws ConfigError naming every violated range.
    void validate() const;

    // Throws ConfigError on unknown key or unparsable value.
    void apply(const std::string& key, const std::string& value);

    SimilarityConfig similarity() const {
        return {beta, max_iterations, epsilon, exact_matching_limit};
    }
    ClusterConfig clustering() const { return {tau}; }
    SearchConfig searching() const { return {k, sigma}; }
    // Resolves the stopword file (when set) into an analysis config.
    AnalysisConfig analysis() const;

    // Sorted key=value rendering of the tunables that shape artifacts; feeds
    // the build id hash.
    std::string canonical_string() const;
};

PipelineConfig load_config_file(const std::string& path, PipelineConfig base = {});

}  // namespace semsearch
