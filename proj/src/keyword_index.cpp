#include "semsearch/keyword_index.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <set>

#include "semsearch/artifact_io.hpp"
#include "semsearch/errors.hpp"

namespace semsearch {

std::string to_string(ElementKind kind) {
    switch (kind) {
        case ElementKind::Entity: return "entity";
        case ElementKind::Class: return "class";
        case ElementKind::Property: return "property";
        case ElementKind::LiteralValue: return "literal";
    }
    return "entity";
}

std::string to_string(MatchField field) {
    switch (field) {
        case MatchField::IriLocalName: return "iri-local-name";
        case MatchField::LiteralValue: return "literal-value";
        case MatchField::PredicateLabel: return "predicate-label";
    }
    return "iri-local-name";
}

std::optional<ElementKind> element_kind_from_string(const std::string& name) {
    if (name == "entity") return ElementKind::Entity;
    if (name == "class") return ElementKind::Class;
    if (name == "property") return ElementKind::Property;
    if (name == "literal") return ElementKind::LiteralValue;
    return std::nullopt;
}

std::optional<MatchField> match_field_from_string(const std::string& name) {
    if (name == "iri-local-name") return MatchField::IriLocalName;
    if (name == "literal-value") return MatchField::LiteralValue;
    if (name == "predicate-label") return MatchField::PredicateLabel;
    return std::nullopt;
}

std::string iri_local_name(const std::string& iri) {
    auto pos = iri.find_last_of("/#");
    return pos == std::string::npos ? iri : iri.substr(pos + 1);
}

KeywordIndex KeywordIndex::build(const RdfGraph& graph, const AnalysisConfig& cfg) {
    // set keyed by (token, anchor, kind) gives both dedup and final order
    std::map<std::string, std::set<Posting>> staged;

    auto post = [&](const std::vector<std::string>& tokens, const std::string& anchor,
                    ElementKind kind, MatchField field) {
        for (const std::string& token : tokens) staged[token].insert({anchor, kind, field});
    };

    for (NodeId s : graph.subjects()) {
        const std::string& anchor = graph.node_name(s);
        if (graph.kind(s) == NodeKind::Iri)
            post(tokenize(iri_local_name(anchor), cfg), anchor, ElementKind::Entity,
                 MatchField::IriLocalName);
        for (PredicateId p : graph.predicate_labels(s)) {
            post(tokenize(iri_local_name(graph.predicate_name(p)), cfg), anchor,
                 ElementKind::Property, MatchField::PredicateLabel);
            for (NodeId o : graph.neighbors(s, p)) {
                if (graph.kind(o) != NodeKind::Literal) continue;
                post(tokenize(std::get<Literal>(graph.term(o)).lexical_form, cfg), anchor,
                     ElementKind::LiteralValue, MatchField::LiteralValue);
            }
        }
    }

    KeywordIndex index;
    for (auto& [token, refs] : staged)
        index.postings_.emplace(token, std::vector<Posting>(refs.begin(), refs.end()));
    return index;
}

const std::vector<Posting>& KeywordIndex::lookup(const std::string& token) const {
    static const std::vector<Posting> kEmpty;
    auto it = postings_.find(token);
    return it == postings_.end() ? kEmpty : it->second;
}

void KeywordIndex::save(std::ostream& out, const std::string& build_id) const {
    std::size_t rows = 0;
    for (const auto& [token, refs] : postings_) rows += refs.size();
    ArtifactHeader header{"kwindex",
                          1,
                          build_id,
                          {{"tokens", std::to_string(postings_.size())},
                           {"postings", std::to_string(rows)}}};
    write_artifact_header(out, header);
    for (const auto& [token, refs] : postings_)
        for (const Posting& ref : refs)
            out << token << '\t' << to_string(ref.kind) << '\t' << ref.anchor << '\t'
                << to_string(ref.field) << '\n';
}

KeywordIndex KeywordIndex::load(std::istream& in, const std::string& expected_build_id) {
    read_artifact_header(in, "kwindex", 1, expected_build_id);
    KeywordIndex index;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<std::string, 4> fields;
        std::size_t start = 0;
        for (std::size_t f = 0; f < 4; ++f) {
            auto tab = line.find('\t', start);
            if (f < 3 && tab == std::string::npos)
                throw IoError("kwindex: malformed row: " + line);
            fields[f] = line.substr(start, tab == std::string::npos ? tab : tab - start);
            start = tab + 1;
        }
        auto kind = element_kind_from_string(fields[1]);
        auto field = match_field_from_string(fields[3]);
        if (!kind || !field) throw IoError("kwindex: unknown kind or field: " + line);
        index.postings_[fields[0]].push_back({fields[2], *kind, *field});
    }
    for (auto& [token, refs] : index.postings_) {
        if (!std::is_sorted(refs.begin(), refs.end()))
            throw IoError("kwindex: postings out of order for token " + token);
    }
    return index;
}

GraphIndex GraphIndex::build(const SummaryGraph& summary, const SimilarityMatrix& sim,
                             const RdfGraph& graph) {
    for (std::uint64_t key : sim.keys()) {
        auto [a, b] = SimilarityMatrix::key_nodes(key);
        if (summary.class_of(a) == -1 || summary.class_of(b) == -1)
            throw BuildError("graph index: similarity pair endpoint missing from partition: " +
                             graph.node_name(summary.class_of(a) == -1 ? a : b));
    }

    GraphIndex index;
    for (const EquivalenceClass& cls : summary.classes) {
        for (NodeId member : cls.members) {
            GraphIndexEntry entry;
            entry.class_id = cls.class_id;
            for (NodeId other : cls.members) {
                if (other == member) continue;
                entry.co_members.push_back(
                    {graph.node_name(other), sim.score(member, other)});
            }
            std::sort(entry.co_members.begin(), entry.co_members.end(),
                      [](const CoMember& a, const CoMember& b) {
                          if (a.sim != b.sim) return a.sim > b.sim;
                          return a.entity < b.entity;
                      });
            index.entries_.emplace(graph.node_name(member), std::move(entry));
        }
    }
    return index;
}

const GraphIndexEntry* GraphIndex::find(const std::string& entity) const {
    auto it = entries_.find(entity);
    return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::string escape_entity(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (c == '%')
            out += "%25";
        else if (c == ';')
            out += "%3B";
        else
            out.push_back(c);
    }
    return out;
}

std::string unescape_entity(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (std::size_t i = 0; i < name.size(); ++i) {
        if (name[i] == '%' && i + 2 < name.size()) {
            if (name.compare(i, 3, "%25") == 0) {
                out.push_back('%');
                i += 2;
                continue;
            }
            if (name.compare(i, 3, "%3B") == 0) {
                out.push_back(';');
                i += 2;
                continue;
            }
        }
        out.push_back(name[i]);
    }
    return out;
}

}  // namespace

void GraphIndex::save(std::ostream& out, const std::string& build_id) const {
    ArtifactHeader header{"gindex", 1, build_id,
                          {{"entities", std::to_string(entries_.size())}}};
    write_artifact_header(out, header);
    for (const auto& [entity, entry] : entries_) {
        out << entity << '\t' << entry.class_id << '\t';
        for (std::size_t i = 0; i < entry.co_members.size(); ++i) {
            if (i != 0) out << ';';
            out << escape_entity(entry.co_members[i].entity) << ':'
                << format_score(entry.co_members[i].sim);
        }
        out << '\n';
    }
}

GraphIndex GraphIndex::load(std::istream& in, const std::string& expected_build_id) {
    ArtifactHeader header = read_artifact_header(in, "gindex", 1, expected_build_id);
    GraphIndex index;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab1 = line.find('\t');
        auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) throw IoError("gindex: malformed row: " + line);
        GraphIndexEntry entry;
        entry.class_id = std::stoi(line.substr(tab1 + 1, tab2 - tab1 - 1));
        std::string members = line.substr(tab2 + 1);
        std::size_t start = 0;
        while (start < members.size()) {
            auto semi = members.find(';', start);
            std::string item =
                members.substr(start, semi == std::string::npos ? semi : semi - start);
            auto colon = item.rfind(':');
            if (colon == std::string::npos)
                throw IoError("gindex: malformed co-member item: " + item);
            double score = std::stod(item.substr(colon + 1));
            if (score < 0.0 || score > 1.0)
                throw IoError("gindex: similarity out of range: " + item);
            entry.co_members.push_back({unescape_entity(item.substr(0, colon)), score});
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
        index.entries_.emplace(line.substr(0, tab1), std::move(entry));
    }
    const auto expected = std::stoull(require_param(header, "entities"));
    if (index.entries_.size() != expected)
        throw IoError("gindex: entity count does not match header");
    return index;
}

}  // namespace semsearch
