#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace semsearch {

struct Iri {
    std::string value;
    auto operator<=>(const Iri&) const = default;
};

struct BlankNode {
    std::string label;
    auto operator<=>(const BlankNode&) const = default;
};

struct Literal {
    std::string lexical_form;
    std::optional<Iri> datatype;            // absent for plain literals
    std::optional<std::string> language_tag;  // present implies rdf:langString datatype
    auto operator<=>(const Literal&) const = default;
};

using Term = std::variant<Iri, BlankNode, Literal>;

inline constexpr std::string_view kLangStringIri =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

struct Triple {
    Term subject;  // Iri or BlankNode
    Iri predicate;
    Term object;
};

using NodeId = std::uint32_t;
using PredicateId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;

enum class NodeKind : std::uint8_t { Iri, Blank, Literal };

// Directed labeled multigraph over interned terms. Nodes and predicates get
// stable integer ids in first-mention order; duplicate triples collapse.
// Immutable once parsing finishes; all accessors are const and thread-safe.
class RdfGraph {
public:
    NodeId add_term(const Term& term);
    PredicateId add_predicate(const Iri& predicate);
    // Returns false when the triple was already present.
    bool add_triple(NodeId subject, PredicateId predicate, NodeId object);
    bool add_triple(const Triple& triple);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t predicate_count() const { return predicate_names_.size(); }
    std::size_t triple_count() const { return triple_count_; }

    NodeKind kind(NodeId id) const;
    const Term& term(NodeId id) const { return nodes_[id]; }
    // IRI value, "_:label" for blanks, lexical form for literals.
    const std::string& node_name(NodeId id) const { return node_names_[id]; }
    const std::string& predicate_name(PredicateId id) const { return predicate_names_[id]; }

    std::optional<NodeId> find_node(const Term& term) const;
    std::optional<NodeId> find_node_by_name(const std::string& name) const;
    std::optional<PredicateId> find_predicate(const std::string& iri) const;

    // Objects o with a triple (u, p, o), in first-insertion order. Unknown
    // node or absent predicate yields an empty span.
    std::span<const NodeId> neighbors(NodeId u, PredicateId p) const;
    // Predicates with at least one outgoing edge from u, ascending by id.
    std::span<const PredicateId> predicate_labels(NodeId u) const;
    std::size_t out_degree(NodeId u) const;

    bool is_subject(NodeId u) const { return out_degree(u) > 0; }
    // Nodes with >= 1 outgoing edge, ascending by id.
    std::vector<NodeId> subjects() const;
    // For each predicate, the subjects carrying it (first-insertion order).
    const std::vector<std::vector<NodeId>>& subjects_by_predicate() const {
        return subjects_by_predicate_;
    }

    template <typename Fn>  // fn(NodeId subject, PredicateId, NodeId object)
    void for_each_triple(Fn&& fn) const {
        for (NodeId u = 0; u < out_.size(); ++u)
            for (const auto& [p, objects] : out_[u])
                for (NodeId o : objects) fn(u, p, o);
    }

private:
    struct AdjacencyEntry {
        PredicateId predicate;
        std::vector<NodeId> objects;
    };

    struct TripleKey {
        NodeId s;
        PredicateId p;
        NodeId o;
        bool operator==(const TripleKey&) const = default;
    };
    struct TripleKeyHash {
        std::size_t operator()(const TripleKey& k) const;
    };

    std::vector<Term> nodes_;
    std::vector<std::string> node_names_;
    std::unordered_map<std::string, NodeId> node_ids_;  // keyed by encoding of the term
    std::vector<std::string> predicate_names_;
    std::unordered_map<std::string, PredicateId> predicate_ids_;
    // per node: entries sorted by predicate id; objects in insertion order
    std::vector<std::vector<AdjacencyEntry>> out_;
    std::vector<std::vector<PredicateId>> labels_;  // sorted, mirrors out_
    std::vector<std::size_t> out_degree_;
    std::vector<std::vector<NodeId>> subjects_by_predicate_;
    std::unordered_set<TripleKey, TripleKeyHash> triple_keys_;
    std::size_t triple_count_ = 0;
};

struct ParseOptions {
    bool lenient = false;  // skip malformed lines instead of failing fast
};

struct ParseDiagnostics {
    std::size_t skipped_lines = 0;
    std::vector<std::string> messages;
};

// Line-oriented N-Triples parser. UTF-8 input, '#' comment lines ignored.
// Throws ParseError on the first malformed line unless options.lenient.
RdfGraph parse_ntriples(std::istream& in, const ParseOptions& options = {},
                        ParseDiagnostics* diagnostics = nullptr);
RdfGraph parse_ntriples_file(const std::string& path, const ParseOptions& options = {},
                             ParseDiagnostics* diagnostics = nullptr);

// Parses a single line into a triple; returns nothing for blank/comment lines.
std::optional<Triple> parse_ntriples_line(std::string_view line, std::size_t line_number);

// Serializes in node-id order with N-Triples escaping; round-trips through
// parse_ntriples to an equal triple set.
void write_ntriples(std::ostream& out, const RdfGraph& graph);

std::string term_to_ntriples(const Term& term);

}  // namespace semsearch
