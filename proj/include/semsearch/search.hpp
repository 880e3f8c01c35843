#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/keyword_index.hpp"
#include "semsearch/text.hpp"

namespace semsearch {

struct SearchConfig {
    int k = 10;          // result count
    double sigma = 0.3;  // augmentation similarity threshold
};

struct Query {
    std::string raw;
    std::vector<std::string> keywords;  // normalized, deduplicated, query order
};

struct Hit {
    std::string entity;
    int hitcount = 0;  // distinct query keywords matched
    std::vector<std::pair<std::string, MatchField>> matched_fields;
};

enum class Provenance : std::uint8_t { Direct, Augmented };

struct ResultEntry {
    std::string iri;
    double confidence = 0.0;
    Provenance provenance = Provenance::Direct;
    std::string via;       // augmenting entity, set for augmented entries
    double via_sim = 0.0;  // pair similarity to via, set for augmented entries
    int hitcount = 0;      // diagnostic: direct keyword matches
    int neighbor_hits = 0; // diagnostic: times reached as a same-class neighbor
};

// Read-only query executor over one consistent build of the indexes.
class SearchEngine {
public:
    SearchEngine(AnalysisConfig analysis, KeywordIndex keyword_index, GraphIndex graph_index,
                 SearchConfig defaults = {});

    // Throws QueryError when nothing searchable survives normalization.
    Query parse_query(std::string_view raw) const;

    // Per-entity keyword hits, ordered by hitcount descending then name.
    std::vector<Hit> find_query_hits(const Query& query) const;

    // hitcount / |query keywords|; 1.0 for full coverage.
    static double score_direct(const Hit& hit, const Query& query);

    // Direct entries plus same-class neighbors with sim >= sigma (confidence
    // sim * direct score), max-merged per entity, ranked and truncated to k.
    std::vector<ResultEntry> get_top_k_nodes(const std::vector<Hit>& hits, const Query& query,
                                             const SearchConfig& cfg) const;

    std::vector<ResultEntry> search(std::string_view querystring) const;
    std::vector<ResultEntry> search(std::string_view querystring, const SearchConfig& cfg) const;

    bool knows_entity(const std::string& iri) const { return graph_index_.contains(iri); }
    const SearchConfig& defaults() const { return defaults_; }
    const KeywordIndex& keyword_index() const { return keyword_index_; }
    const GraphIndex& graph_index() const { return graph_index_; }
    const AnalysisConfig& analysis() const { return analysis_; }

private:
    AnalysisConfig analysis_;
    KeywordIndex keyword_index_;
    GraphIndex graph_index_;
    SearchConfig defaults_;
};

// Rendering shared by the CLI and the HTTP endpoint.
void render_results_table(std::ostream& out, const std::vector<ResultEntry>& results);
void render_results_json_lines(std::ostream& out, const std::vector<ResultEntry>& results);
std::string result_to_json(const ResultEntry& entry);

}  // namespace semsearch
