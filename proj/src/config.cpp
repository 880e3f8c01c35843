#include "semsearch/config.hpp"

#include <fstream>
#include <sstream>

#include "semsearch/artifact_io.hpp"
#include "semsearch/errors.hpp"

namespace semsearch {

void PipelineConfig::validate() const {
    std::vector<std::string> violations;
    if (!(beta > 0.0 && beta < 1.0)) violations.push_back("beta must be in (0,1)");
    if (max_iterations < 1) violations.push_back("max_iterations must be >= 1");
    if (!(epsilon > 0.0)) violations.push_back("epsilon must be > 0");
    if (exact_matching_limit < 1) violations.push_back("exact_matching_limit must be >= 1");
    if (!(tau > 0.0 && tau <= 1.0)) violations.push_back("tau must be in (0,1]");
    if (tau <= beta) violations.push_back("tau must be > beta");
    if (!(sigma > 0.0 && sigma < 1.0)) violations.push_back("sigma must be in (0,1)");
    if (k < 1) violations.push_back("k must be >= 1");
    if (violations.empty()) return;
    std::string message = "invalid configuration:";
    for (const std::string& v : violations) message += " " + v + ";";
    message.pop_back();
    throw ConfigError(message);
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: " + value);
    }
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long parsed = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    throw ConfigError("config key '" + key + "': not a boolean: " + value);
}

}  // namespace

void PipelineConfig::apply(const std::string& key, const std::string& value) {
    if (key == "beta") {
        beta = parse_double(key, value);
    } else if (key == "max_iterations") {
        max_iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "epsilon") {
        epsilon = parse_double(key, value);
    } else if (key == "exact_matching_limit") {
        long v = parse_int(key, value);
        if (v < 0) throw ConfigError("exact_matching_limit must be >= 0");
        exact_matching_limit = static_cast<std::size_t>(v);
    } else if (key == "tau") {
        tau = parse_double(key, value);
    } else if (key == "sigma") {
        sigma = parse_double(key, value);
    } else if (key == "k") {
        k = static_cast<int>(parse_int(key, value));
    } else if (key == "weight_mode") {
        auto mode = weight_mode_from_string(value);
        if (!mode) throw ConfigError("weight_mode must be uniform or rarity, got: " + value);
        weight_mode = *mode;
    } else if (key == "stemming") {
        stemming = parse_bool(key, value);
    } else if (key == "stopword_file") {
        stopword_file = value;
    } else if (key == "data") {
        data_path = value;
    } else if (key == "artifacts") {
        artifacts_dir = value;
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

AnalysisConfig PipelineConfig::analysis() const {
    AnalysisConfig cfg;
    cfg.stemming_enabled = stemming;
    if (!stopword_file.empty()) cfg.stopwords = load_stopwords(stopword_file);
    return cfg;
}

std::string PipelineConfig::canonical_string() const {
    std::ostringstream out;
    out << "beta=" << format_score(beta) << '\n'
        << "epsilon=" << format_score(epsilon) << '\n'
        << "exact_matching_limit=" << exact_matching_limit << '\n'
        << "k=" << k << '\n'
        << "max_iterations=" << max_iterations << '\n'
        << "sigma=" << format_score(sigma) << '\n'
        << "stemming=" << (stemming ? "true" : "false") << '\n'
        << "tau=" << format_score(tau) << '\n'
        << "weight_mode=" << to_string(weight_mode) << '\n';
    return out.str();
}

PipelineConfig load_config_file(const std::string& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_number) +
                              ": expected key=value, got: " + line);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        base.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

}  // namespace semsearch
