#pragma once

#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "semsearch/rdf.hpp"
#include "semsearch/similarity.hpp"

namespace semsearch {

struct ClusterConfig {
    double tau = 0.7;  // merge threshold; must stay above beta or everything fuses
};

struct EquivalenceClass {
    int class_id = -1;
    std::vector<NodeId> members;  // sorted by node name; front() is the representative
};

// Single-link closure: union-find over every candidate pair scoring >= tau.
// Only the given nodes participate; class ids follow representative-name
// order and are deterministic.
std::vector<EquivalenceClass> cluster(const SimilarityMatrix& sim, const ClusterConfig& cfg,
                                      const std::vector<NodeId>& nodes, const RdfGraph& graph);

// Class-level view of the base graph: classes partition every non-literal
// node (object-only nodes become singletons) and an edge (C1, l, C2) exists
// iff some base triple (u, l, v) has u in C1 and v in C2.
class SummaryGraph {
public:
    std::vector<EquivalenceClass> classes;               // ordered by class_id
    std::vector<std::tuple<int, PredicateId, int>> edges;  // sorted, deduplicated
    double tau = 0.0;
    double beta = 0.0;

    // -1 for literals and unknown nodes.
    int class_of(NodeId node) const {
        return node < node_class_.size() ? node_class_[node] : -1;
    }

    void save(std::ostream& out, const RdfGraph& graph, const std::string& build_id) const;
    // Validates the partition (non-empty, disjoint classes; known nodes).
    static SummaryGraph load(std::istream& in, const RdfGraph& graph,
                             const std::string& expected_build_id);

    void rebuild_node_index(std::size_t node_count);

private:
    std::vector<int> node_class_;
};

// Extends the subject partition with singleton classes for object-only
// non-literal nodes, assigns final class ids, and materializes class edges.
SummaryGraph build_summary(const RdfGraph& graph, std::vector<EquivalenceClass> subject_classes,
                           const ClusterConfig& cfg, double beta);

}  // namespace semsearch
