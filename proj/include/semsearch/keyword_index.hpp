#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semsearch/rdf.hpp"
#include "semsearch/similarity.hpp"
#include "semsearch/summary.hpp"
#include "semsearch/text.hpp"

namespace semsearch {

enum class ElementKind : std::uint8_t { Entity, Class, Property, LiteralValue };
enum class MatchField : std::uint8_t { IriLocalName, LiteralValue, PredicateLabel };

std::string to_string(ElementKind kind);
std::string to_string(MatchField field);
std::optional<ElementKind> element_kind_from_string(const std::string& name);
std::optional<MatchField> match_field_from_string(const std::string& name);

// One keyword posting: the subject the match attaches to, what kind of graph
// element produced the token and which text field it came from.
struct Posting {
    std::string anchor;  // subject node name
    ElementKind kind = ElementKind::Entity;
    MatchField field = MatchField::IriLocalName;

    auto operator<=>(const Posting&) const = default;
};

// Text after the last '/' or '#'; empty when the IRI ends in a separator.
std::string iri_local_name(const std::string& iri);

// Inverted index from normalized tokens to graph elements. Indexes subject
// IRI local names, literal values anchored at their subject, and predicate
// labels anchored at every carrying subject (so a descriptor query like
// "notable ideas" finds the entities holding the predicate, not the
// predicate itself). Postings are deduplicated per (token, anchor, kind).
class KeywordIndex {
public:
    static KeywordIndex build(const RdfGraph& graph, const AnalysisConfig& cfg);

    // Exact lookup of an already-normalized token.
    const std::vector<Posting>& lookup(const std::string& token) const;

    std::size_t token_count() const { return postings_.size(); }
    const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }

    void save(std::ostream& out, const std::string& build_id) const;
    static KeywordIndex load(std::istream& in, const std::string& expected_build_id);

private:
    std::map<std::string, std::vector<Posting>> postings_;
};

struct CoMember {
    std::string entity;
    double sim = 0.0;
};

struct GraphIndexEntry {
    int class_id = -1;
    // same-class entities, descending similarity then name
    std::vector<CoMember> co_members;
};

// Per-entity materialization of class membership and co-member similarities,
// the O(1) augmentation source at query time.
class GraphIndex {
public:
    static GraphIndex build(const SummaryGraph& summary, const SimilarityMatrix& sim,
                            const RdfGraph& graph);

    const GraphIndexEntry* find(const std::string& entity) const;
    bool contains(const std::string& entity) const { return find(entity) != nullptr; }
    std::size_t entity_count() const { return entries_.size(); }
    const std::map<std::string, GraphIndexEntry>& entries() const { return entries_; }

    void save(std::ostream& out, const std::string& build_id) const;
    static GraphIndex load(std::istream& in, const std::string& expected_build_id);

private:
    std::map<std::string, GraphIndexEntry> entries_;
};

}  // namespace semsearch
