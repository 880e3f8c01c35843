#include "semsearch/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "semsearch/artifact_io.hpp"
#include "semsearch/errors.hpp"
#include "semsearch/matching.hpp"

namespace semsearch {

std::string to_string(WeightMode mode) {
    return mode == WeightMode::Uniform ? "uniform" : "rarity";
}

std::optional<WeightMode> weight_mode_from_string(const std::string& name) {
    if (name == "uniform") return WeightMode::Uniform;
    if (name == "rarity") return WeightMode::Rarity;
    return std::nullopt;
}

PredicateWeights compute_predicate_weights(const RdfGraph& graph, WeightMode mode) {
    PredicateWeights result;
    result.mode = mode;
    if (mode == WeightMode::Uniform) {
        result.weights.assign(graph.predicate_count(), 1.0);
        return result;
    }
    const double subject_count = static_cast<double>(graph.subjects().size());
    result.weights.resize(graph.predicate_count());
    double max_raw = 0.0;
    for (PredicateId p = 0; p < graph.predicate_count(); ++p) {
        double carriers = static_cast<double>(graph.subjects_by_predicate()[p].size());
        double raw = std::log((1.0 + subject_count) / (1.0 + carriers)) + 1.0;
        result.weights[p] = raw;
        max_raw = std::max(max_raw, raw);
    }
    if (max_raw > 0.0)
        for (double& w : result.weights) w /= max_raw;
    return result;
}

// ---- LiteralSimTable -------------------------------------------------------

LiteralSimTable::LiteralSimTable(const RdfGraph& graph, const IdfTable& idf,
                                 const AnalysisConfig& cfg) {
    entries_.resize(graph.node_count());
    std::unordered_map<std::string, std::uint32_t> token_ids;
    for (NodeId id = 0; id < graph.node_count(); ++id) {
        if (graph.kind(id) != NodeKind::Literal) continue;
        Entry entry;
        const auto& lit = std::get<Literal>(graph.term(id));
        for (const std::string& token : tokenize(lit.lexical_form, cfg)) {
            auto [it, inserted] = token_ids.emplace(token, token_ids.size());
            if (inserted) token_idf_.push_back(idf.idf(token));
            entry.tokens.push_back(it->second);
        }
        std::sort(entry.tokens.begin(), entry.tokens.end());
        for (std::uint32_t t : entry.tokens) entry.idf_sum += token_idf_[t];
        entries_[id] = std::move(entry);
    }
}

bool LiteralSimTable::is_literal(NodeId id) const {
    return id < entries_.size() && entries_[id].has_value();
}

bool LiteralSimTable::has_tokens(NodeId id) const {
    return is_literal(id) && !entries_[id]->tokens.empty();
}

double LiteralSimTable::sim(NodeId a, NodeId b) const {
    if (!is_literal(a) || !is_literal(b)) return 0.0;
    const Entry& x = *entries_[a];
    const Entry& y = *entries_[b];
    if (x.tokens.empty() && y.tokens.empty()) return 0.0;
    double intersection = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.tokens.size() && j < y.tokens.size()) {
        if (x.tokens[i] == y.tokens[j]) {
            intersection += token_idf_[x.tokens[i]];
            ++i;
            ++j;
        } else if (x.tokens[i] < y.tokens[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    double union_weight = x.idf_sum + y.idf_sum - intersection;
    return union_weight == 0.0 ? 0.0 : intersection / union_weight;
}

std::vector<std::vector<std::string>> LiteralSimTable::corpus(const RdfGraph& graph,
                                                              const AnalysisConfig& cfg) {
    std::vector<std::vector<std::string>> documents;
    for (NodeId id = 0; id < graph.node_count(); ++id) {
        if (graph.kind(id) != NodeKind::Literal) continue;
        documents.push_back(tokenize(std::get<Literal>(graph.term(id)).lexical_form, cfg));
    }
    return documents;
}

// ---- SimilarityMatrix ------------------------------------------------------

SimilarityMatrix::SimilarityMatrix(std::vector<std::uint64_t> keys, double initial_score)
    : keys_(std::move(keys)), scores_(keys_.size(), initial_score) {}

std::uint64_t SimilarityMatrix::pair_key(NodeId a, NodeId b) {
    NodeId lo = std::min(a, b), hi = std::max(a, b);
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

std::pair<NodeId, NodeId> SimilarityMatrix::key_nodes(std::uint64_t key) {
    return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)};
}

std::optional<double> SimilarityMatrix::find(NodeId a, NodeId b) const {
    std::uint64_t key = pair_key(a, b);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return std::nullopt;
    return scores_[static_cast<std::size_t>(it - keys_.begin())];
}

double SimilarityMatrix::score(NodeId a, NodeId b) const {
    return find(a, b).value_or(0.0);
}

void SimilarityMatrix::save(std::ostream& out, const RdfGraph& graph,
                            const std::string& build_id) const {
    ArtifactHeader header{"sim",
                          1,
                          build_id,
                          {{"beta", format_score(beta)},
                           {"k", std::to_string(iterations)},
                           {"epsilon", format_score(epsilon)},
                           {"weight_mode", to_string(weight_mode)},
                           {"pairs", std::to_string(keys_.size())},
                           {"greedy_evaluations", std::to_string(greedy_evaluations)}}};
    write_artifact_header(out, header);

    std::vector<std::size_t> order(keys_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto row_names = [&](std::size_t i) {
        auto [a, b] = key_nodes(keys_[i]);
        const std::string& na = graph.node_name(a);
        const std::string& nb = graph.node_name(b);
        return na <= nb ? std::pair(na, nb) : std::pair(nb, na);
    };
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return row_names(i) < row_names(j);
    });
    for (std::size_t i : order) {
        auto [na, nb] = row_names(i);
        out << na << '\t' << nb << '\t' << format_score(scores_[i]) << '\n';
    }
}

SimilarityMatrix SimilarityMatrix::load(std::istream& in, const RdfGraph& graph,
                                        const std::string& expected_build_id) {
    ArtifactHeader header = read_artifact_header(in, "sim", 1, expected_build_id);
    std::vector<std::pair<std::uint64_t, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab1 = line.find('\t');
        auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) throw IoError("sim: malformed row: " + line);
        std::string name_a = line.substr(0, tab1);
        std::string name_b = line.substr(tab1 + 1, tab2 - tab1 - 1);
        double score = std::stod(line.substr(tab2 + 1));
        if (score < 0.0 || score > 1.0) throw IoError("sim: score out of range: " + line);
        auto a = graph.find_node_by_name(name_a);
        auto b = graph.find_node_by_name(name_b);
        if (!a || !b) throw IoError("sim: unknown node in row: " + line);
        rows.emplace_back(pair_key(*a, *b), score);
    }
    std::sort(rows.begin(), rows.end());
    SimilarityMatrix matrix;
    matrix.keys_.reserve(rows.size());
    matrix.scores_.reserve(rows.size());
    for (const auto& [key, score] : rows) {
        if (!matrix.keys_.empty() && matrix.keys_.back() == key)
            throw IoError("sim: duplicate pair in table");
        matrix.keys_.push_back(key);
        matrix.scores_.push_back(score);
    }
    matrix.beta = std::stod(require_param(header, "beta"));
    matrix.iterations = std::stoi(require_param(header, "k"));
    matrix.epsilon = std::stod(require_param(header, "epsilon"));
    auto mode = weight_mode_from_string(require_param(header, "weight_mode"));
    if (!mode) throw IoError("sim: unknown weight mode in header");
    matrix.weight_mode = *mode;
    matrix.greedy_evaluations = std::stoull(require_param(header, "greedy_evaluations"));
    return matrix;
}

// ---- candidate enumeration --------------------------------------------------

std::vector<std::uint64_t> candidate_pairs(const RdfGraph& graph) {
    std::vector<std::uint64_t> keys;
    for (const auto& carriers : graph.subjects_by_predicate()) {
        for (std::size_t i = 0; i < carriers.size(); ++i)
            for (std::size_t j = i + 1; j < carriers.size(); ++j)
                keys.push_back(SimilarityMatrix::pair_key(carriers[i], carriers[j]));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

// ---- SimilarityEngine -------------------------------------------------------

SimilarityEngine::SimilarityEngine(const RdfGraph& graph, const LiteralSimTable& literals,
                                   const PredicateWeights& weights,
                                   const SimilarityConfig& config)
    : graph_(graph), literals_(literals), weights_(weights), config_(config) {}

double SimilarityEngine::neighbor_sim(NodeId x, NodeId y, const SimilarityMatrix& prev) const {
    const bool x_literal = graph_.kind(x) == NodeKind::Literal;
    const bool y_literal = graph_.kind(y) == NodeKind::Literal;
    if (x_literal && y_literal) return literals_.sim(x, y);
    if (x_literal != y_literal) return 0.0;
    if (x == y) return 1.0;  // a node is maximally similar to itself
    return prev.score(x, y);
}

double SimilarityEngine::evaluate_pair(NodeId u, NodeId v, const SimilarityMatrix& prev,
                                       std::size_t* greedy_count) const {
    const double beta = config_.beta;
    auto labels_u = graph_.predicate_labels(u);
    auto labels_v = graph_.predicate_labels(v);

    // merge the sorted label sets: union size and shared predicates
    std::size_t union_size = 0;
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < labels_u.size() || j < labels_v.size()) {
        ++union_size;
        if (j == labels_v.size() || (i < labels_u.size() && labels_u[i] < labels_v[j])) {
            ++i;
            continue;
        }
        if (i == labels_u.size() || labels_v[j] < labels_u[i]) {
            ++j;
            continue;
        }
        const PredicateId p = labels_u[i];
        ++i;
        ++j;
        auto nu = graph_.neighbors(u, p);
        auto nv = graph_.neighbors(v, p);
        double value;
        if (nu.size() == 1 || nv.size() == 1) {
            // one-row matching: best single pairing over the larger side
            double best = 0.0;
            for (NodeId x : nu)
                for (NodeId y : nv) best = std::max(best, neighbor_sim(x, y, prev));
            value = best / static_cast<double>(std::max(nu.size(), nv.size()));
        } else {
            MatchingProblem problem(nu.size(), nv.size());
            for (std::size_t r = 0; r < nu.size(); ++r)
                for (std::size_t c = 0; c < nv.size(); ++c)
                    problem.set(r, c, neighbor_sim(nu[r], nv[c], prev));
            MatchingResult result = max_matching_value(problem, config_.exact_matching_limit);
            if (!result.exact && greedy_count != nullptr) ++*greedy_count;
            value = result.value;
        }
        sum += value * weights_.weight(p);
    }
    if (union_size == 0) return beta;
    return (1.0 - beta) * sum / static_cast<double>(union_size) + beta;
}

double SimilarityEngine::evaluate_pair(NodeId u, NodeId v, const SimilarityMatrix& prev) const {
    return evaluate_pair(u, v, prev, nullptr);
}

SimilarityMatrix SimilarityEngine::step(const SimilarityMatrix& prev) const {
    SimilarityMatrix next(prev.keys(), 0.0);
    next.iterations = prev.iterations + 1;
    next.delta_history = prev.delta_history;
    next.greedy_evaluations = prev.greedy_evaluations;
    next.greedy_pairs = prev.greedy_pairs;
    double max_delta = 0.0;
    for (std::size_t idx = 0; idx < prev.keys().size(); ++idx) {
        auto [u, v] = SimilarityMatrix::key_nodes(prev.keys()[idx]);
        std::size_t greedy_before = next.greedy_evaluations;
        double score = evaluate_pair(u, v, prev, &next.greedy_evaluations);
        if (next.greedy_evaluations != greedy_before)
            next.greedy_pairs.push_back(prev.keys()[idx]);
        next.set_score_at(idx, score);
        max_delta = std::max(max_delta, std::abs(score - prev.score_at(idx)));
    }
    std::sort(next.greedy_pairs.begin(), next.greedy_pairs.end());
    next.greedy_pairs.erase(std::unique(next.greedy_pairs.begin(), next.greedy_pairs.end()),
                            next.greedy_pairs.end());
    next.delta_history.push_back(max_delta);
    return next;
}

SimilarityMatrix SimilarityEngine::compute() const {
    SimilarityMatrix current(candidate_pairs(graph_), 1.0);
    for (int k = 0; k < config_.max_iterations; ++k) {
        current = step(current);
        if (current.delta_history.back() <= config_.epsilon) break;
    }
    return current;
}

SimilarityMatrix compute_similarity(const RdfGraph& graph, const LiteralSimTable& literals,
                                    const PredicateWeights& weights,
                                    const SimilarityConfig& config) {
    SimilarityEngine engine(graph, literals, weights, config);
    SimilarityMatrix matrix = engine.compute();
    matrix.beta = config.beta;
    matrix.epsilon = config.epsilon;
    matrix.weight_mode = weights.mode;
    return matrix;
}

}  // namespace semsearch
