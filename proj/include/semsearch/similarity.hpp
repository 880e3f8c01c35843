#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semsearch/rdf.hpp"
#include "semsearch/text.hpp"

namespace semsearch {

struct SimilarityConfig {
    double beta = 0.15;       // decay factor, 0 < beta < 1
    int max_iterations = 10;  // fixed-point iteration cap
    double epsilon = 1e-4;    // max-norm convergence tolerance
    std::size_t exact_matching_limit = 8;  // exact assignment up to this min side
};

enum class WeightMode { Uniform, Rarity };

std::string to_string(WeightMode mode);
std::optional<WeightMode> weight_mode_from_string(const std::string& name);

// Per-predicate weights in (0, 1]. Uniform mode is all ones; rarity mode is
// ln((1+S)/(1+s_j)) + 1 over subject counts, normalized by the maximum.
struct PredicateWeights {
    WeightMode mode = WeightMode::Uniform;
    std::vector<double> weights;  // indexed by PredicateId; empty means all 1.0

    double weight(PredicateId p) const {
        return p < weights.size() ? weights[p] : 1.0;
    }
};

PredicateWeights compute_predicate_weights(const RdfGraph& graph, WeightMode mode);

// Token sets of every literal node, interned against the idf vocabulary, so
// the literal branch of the pairwise similarity is a cheap sorted merge.
class LiteralSimTable {
public:
    LiteralSimTable(const RdfGraph& graph, const IdfTable& idf, const AnalysisConfig& cfg);

    // Weighted-Jaccard over token sets; 0.0 unless both nodes are literals
    // with at least one token between them.
    double sim(NodeId a, NodeId b) const;
    bool is_literal(NodeId id) const;
    bool has_tokens(NodeId id) const;

    // Token sets of distinct literal nodes in node-id order (the idf corpus).
    static std::vector<std::vector<std::string>> corpus(const RdfGraph& graph,
                                                        const AnalysisConfig& cfg);

private:
    struct Entry {
        std::vector<std::uint32_t> tokens;  // sorted token ids
        double idf_sum = 0.0;
    };
    std::vector<double> token_idf_;
    std::vector<std::optional<Entry>> entries_;  // by NodeId; set for literals only
};

// Sparse symmetric score table over unordered candidate pairs. Absent pairs
// read as 0. Scores sit in [beta, 1] after the first iteration.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    // keys must be sorted and unique; every score starts at initial_score.
    SimilarityMatrix(std::vector<std::uint64_t> keys, double initial_score);

    static std::uint64_t pair_key(NodeId a, NodeId b);
    static std::pair<NodeId, NodeId> key_nodes(std::uint64_t key);

    double score(NodeId a, NodeId b) const;  // 0.0 for absent pairs
    std::optional<double> find(NodeId a, NodeId b) const;
    bool contains(NodeId a, NodeId b) const { return find(a, b).has_value(); }

    std::size_t pair_count() const { return keys_.size(); }
    const std::vector<std::uint64_t>& keys() const { return keys_; }
    const std::vector<double>& scores() const { return scores_; }
    double score_at(std::size_t index) const { return scores_[index]; }
    void set_score_at(std::size_t index, double score) { scores_[index] = score; }

    int iterations = 0;
    std::vector<double> delta_history;       // max-norm change per iteration
    std::size_t greedy_evaluations = 0;      // matchings decided by the greedy fallback
    std::vector<std::uint64_t> greedy_pairs; // pairs that ever took the greedy path (sorted)
    double beta = 0.0;
    double epsilon = 0.0;
    WeightMode weight_mode = WeightMode::Uniform;

    // Sorted line-oriented text table: node_a \t node_b \t score.
    void save(std::ostream& out, const RdfGraph& graph, const std::string& build_id) const;
    static SimilarityMatrix load(std::istream& in, const RdfGraph& graph,
                                 const std::string& expected_build_id);

private:
    std::vector<std::uint64_t> keys_;
    std::vector<double> scores_;
};

// Unordered pairs (u, v), u != v, of subject nodes sharing at least one
// outgoing predicate label. Sorted key order.
std::vector<std::uint64_t> candidate_pairs(const RdfGraph& graph);

// Evaluates the pairwise similarity recurrence over a graph.
class SimilarityEngine {
public:
    SimilarityEngine(const RdfGraph& graph, const LiteralSimTable& literals,
                     const PredicateWeights& weights, const SimilarityConfig& config);

    // One synchronous update of every candidate pair from the frozen
    // previous matrix.
    SimilarityMatrix step(const SimilarityMatrix& prev) const;

    // All-ones initialization, then step until the max change drops to
    // epsilon or the iteration cap is reached.
    SimilarityMatrix compute() const;

    // Single evaluation of an arbitrary pair (diagnostics; u == v allowed).
    double evaluate_pair(NodeId u, NodeId v, const SimilarityMatrix& prev) const;

private:
    double neighbor_sim(NodeId x, NodeId y, const SimilarityMatrix& prev) const;
    double evaluate_pair(NodeId u, NodeId v, const SimilarityMatrix& prev,
                         std::size_t* greedy_count) const;

    const RdfGraph& graph_;
    const LiteralSimTable& literals_;
    const PredicateWeights& weights_;
    SimilarityConfig config_;
};

// Convenience wrapper: candidate pairs + iteration, with metadata filled in.
SimilarityMatrix compute_similarity(const RdfGraph& graph, const LiteralSimTable& literals,
                                    const PredicateWeights& weights,
                                    const SimilarityConfig& config);

}  // namespace semsearch
