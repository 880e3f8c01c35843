#include "semsearch/search.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "semsearch/errors.hpp"

namespace semsearch {

SearchEngine::SearchEngine(AnalysisConfig analysis, KeywordIndex keyword_index,
                           GraphIndex graph_index, SearchConfig defaults)
    : analysis_(std::move(analysis)),
      keyword_index_(std::move(keyword_index)),
      graph_index_(std::move(graph_index)),
      defaults_(defaults) {}

Query SearchEngine::parse_query(std::string_view raw) const {
    Query query;
    query.raw = std::string(raw);
    query.keywords = tokenize(raw, analysis_);
    if (query.keywords.empty())
        throw QueryError(raw.find_first_not_of(" \t\r\n") == std::string_view::npos
                             ? "empty query"
                             : "query contains no searchable keywords: " + query.raw);
    return query;
}

std::vector<Hit> SearchEngine::find_query_hits(const Query& query) const {
    struct Accumulator {
        std::set<std::size_t> keywords;  // indices of matched query keywords
        std::vector<std::pair<std::string, MatchField>> fields;
    };
    std::map<std::string, Accumulator> per_entity;
    for (std::size_t i = 0; i < query.keywords.size(); ++i) {
        const std::string& keyword = query.keywords[i];
        for (const Posting& posting : keyword_index_.lookup(keyword)) {
            Accumulator& acc = per_entity[posting.anchor];
            acc.keywords.insert(i);
            std::pair<std::string, MatchField> field{keyword, posting.field};
            if (std::find(acc.fields.begin(), acc.fields.end(), field) == acc.fields.end())
                acc.fields.push_back(std::move(field));
        }
    }

    std::vector<Hit> hits;
    hits.reserve(per_entity.size());
    for (auto& [entity, acc] : per_entity)
        hits.push_back({entity, static_cast<int>(acc.keywords.size()), std::move(acc.fields)});
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.hitcount != b.hitcount) return a.hitcount > b.hitcount;
        return a.entity < b.entity;
    });
    return hits;
}

double SearchEngine::score_direct(const Hit& hit, const Query& query) {
    return static_cast<double>(hit.hitcount) / static_cast<double>(query.keywords.size());
}

namespace {

// true when candidate should replace incumbent in the per-entity max-merge
bool replaces(const ResultEntry& candidate, const ResultEntry& incumbent) {
    if (candidate.confidence != incumbent.confidence)
        return candidate.confidence > incumbent.confidence;
    if (candidate.provenance != incumbent.provenance)
        return candidate.provenance == Provenance::Direct;
    return candidate.via < incumbent.via;
}

}  // namespace

std::vector<ResultEntry> SearchEngine::get_top_k_nodes(const std::vector<Hit>& hits,
                                                       const Query& query,
                                                       const SearchConfig& cfg) const {
    std::map<std::string, ResultEntry> merged;
    auto offer = [&](ResultEntry entry) {
        auto [it, inserted] = merged.try_emplace(entry.iri, entry);
        if (!inserted) {
            int neighbor_hits = it->second.neighbor_hits + entry.neighbor_hits;
            int hitcount = std::max(it->second.hitcount, entry.hitcount);
            if (replaces(entry, it->second)) it->second = std::move(entry);
            it->second.neighbor_hits = neighbor_hits;
            it->second.hitcount = hitcount;
        }
    };

    for (const Hit& hit : hits) {
        const double direct = score_direct(hit, query);
        ResultEntry entry;
        entry.iri = hit.entity;
        entry.confidence = direct;
        entry.provenance = Provenance::Direct;
        entry.hitcount = hit.hitcount;
        offer(std::move(entry));

        const GraphIndexEntry* indexed = graph_index_.find(hit.entity);
        if (indexed == nullptr) continue;
        for (const CoMember& neighbor : indexed->co_members) {
            if (neighbor.sim < cfg.sigma) break;  // sorted descending
            ResultEntry augmented;
            augmented.iri = neighbor.entity;
            augmented.confidence = neighbor.sim * direct;
            augmented.provenance = Provenance::Augmented;
            augmented.via = hit.entity;
            augmented.via_sim = neighbor.sim;
            augmented.neighbor_hits = 1;
            offer(std::move(augmented));
        }
    }

    std::vector<ResultEntry> ranked;
    ranked.reserve(merged.size());
    for (auto& [iri, entry] : merged) ranked.push_back(std::move(entry));
    std::sort(ranked.begin(), ranked.end(), [](const ResultEntry& a, const ResultEntry& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.provenance != b.provenance) return a.provenance == Provenance::Direct;
        return a.iri < b.iri;
    });
    if (ranked.size() > static_cast<std::size_t>(cfg.k))
        ranked.resize(static_cast<std::size_t>(cfg.k));
    return ranked;
}

std::vector<ResultEntry> SearchEngine::search(std::string_view querystring) const {
    return search(querystring, defaults_);
}

std::vector<ResultEntry> SearchEngine::search(std::string_view querystring,
                                              const SearchConfig& cfg) const {
    Query query = parse_query(querystring);
    return get_top_k_nodes(find_query_hits(query), query, cfg);
}

void render_results_table(std::ostream& out, const std::vector<ResultEntry>& results) {
    if (results.empty()) {
        out << "no results\n";
        return;
    }
    char confidence[16];
    for (std::size_t i = 0; i < results.size(); ++i) {
        const ResultEntry& r = results[i];
        std::snprintf(confidence, sizeof(confidence), "%5.1f%%", r.confidence * 100.0);
        out << ' ' << (i + 1) << "  " << confidence << "  " << r.iri;
        if (r.provenance == Provenance::Augmented)
            out << "  (augmented via " << r.via << ", sim " << r.via_sim << ')';
        out << '\n';
    }
}

std::string result_to_json(const ResultEntry& entry) {
    nlohmann::json object;
    object["iri"] = entry.iri;
    object["confidence"] = entry.confidence;
    object["provenance"] =
        entry.provenance == Provenance::Direct ? "direct" : "augmented";
    if (entry.provenance == Provenance::Augmented)
        object["via"] = entry.via;
    else
        object["via"] = nullptr;
    return object.dump();
}

void render_results_json_lines(std::ostream& out, const std::vector<ResultEntry>& results) {
    for (const ResultEntry& entry : results) out << result_to_json(entry) << '\n';
}

}  // namespace semsearch
