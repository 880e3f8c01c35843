#include "semsearch/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "semsearch/errors.hpp"

namespace semsearch {

namespace {

// Interning key: one-byte tag so an IRI, a blank label and a literal with the
// same spelling stay distinct.
std::string term_key(const Term& term) {
    if (const auto* iri = std::get_if<Iri>(&term)) return "I" + iri->value;
    if (const auto* blank = std::get_if<BlankNode>(&term)) return "B" + blank->label;
    const auto& lit = std::get<Literal>(term);
    std::string key = "L" + lit.lexical_form;
    key.push_back('\x01');
    if (lit.datatype) key += lit.datatype->value;
    key.push_back('\x01');
    if (lit.language_tag) key += *lit.language_tag;
    return key;
}

std::string display_name(const Term& term) {
    if (const auto* iri = std::get_if<Iri>(&term)) return iri->value;
    if (const auto* blank = std::get_if<BlankNode>(&term)) return "_:" + blank->label;
    return std::get<Literal>(term).lexical_form;
}

void append_utf8(std::string& out, std::uint32_t code_point) {
    if (code_point < 0x80) {
        out.push_back(static_cast<char>(code_point));
    } else if (code_point < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (code_point >> 6)));
        out.push_back(static_cast<char>(0x80 | (code_point & 0x3f)));
    } else if (code_point < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (code_point >> 12)));
        out.push_back(static_cast<char>(0x80 | ((code_point >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (code_point & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (code_point >> 18)));
        out.push_back(static_cast<char>(0x80 | ((code_point >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((code_point >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (code_point & 0x3f)));
    }
}

// Cursor over one N-Triples line.
class LineScanner {
public:
    LineScanner(std::string_view line, std::size_t line_number)
        : line_(line), line_number_(line_number) {}

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_number_);
    }

    void skip_whitespace() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }

    bool at_end() const { return pos_ >= line_.size(); }
    char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

    char next() {
        if (at_end()) fail("unexpected end of line");
        return line_[pos_++];
    }

    void expect(char c, const std::string& what) {
        if (at_end() || line_[pos_] != c) fail("expected " + what);
        ++pos_;
    }

    std::uint32_t hex_escape(int digits) {
        std::uint32_t value = 0;
        for (int i = 0; i < digits; ++i) {
            char c = next();
            value <<= 4;
            if (c >= '0' && c <= '9')
                value |= static_cast<std::uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f')
                value |= static_cast<std::uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                value |= static_cast<std::uint32_t>(c - 'A' + 10);
            else
                fail("invalid hex digit in unicode escape");
        }
        if (value > 0x10ffff || (value >= 0xd800 && value <= 0xdfff))
            fail("unicode escape out of range");
        return value;
    }

    Iri parse_iri() {
        expect('<', "'<'");
        std::string value;
        while (true) {
            if (at_end()) fail("unterminated IRI");
            char c = line_[pos_++];
            if (c == '>') break;
            if (c == '\\') {
                char esc = next();
                if (esc == 'u')
                    append_utf8(value, hex_escape(4));
                else if (esc == 'U')
                    append_utf8(value, hex_escape(8));
                else
                    fail("invalid escape in IRI");
                continue;
            }
            auto uc = static_cast<unsigned char>(c);
            if (uc <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
                c == '^' || c == '`')
                fail("invalid character in IRI");
            value.push_back(c);
        }
        if (value.empty()) fail("empty IRI");
        if (!has_scheme(value)) fail("IRI is not absolute: " + value);
        return Iri{std::move(value)};
    }

    // absolute IRIs start with scheme ':' (scheme = alpha (alnum |+-.)*)
    static bool has_scheme(const std::string& iri) {
        if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
        for (char c : iri) {
            if (c == ':') return true;
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
                c != '.')
                return false;
        }
        return false;
    }

    BlankNode parse_blank() {
        expect('_', "blank node");
        expect(':', "':' after '_' in blank node");
        std::string label;
        while (!at_end()) {
            char c = line_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
                label.push_back(c), ++pos_;
            else
                break;
        }
        if (label.empty()) fail("empty blank node label");
        return BlankNode{std::move(label)};
    }

    std::string parse_quoted_string() {
        expect('"', "'\"'");
        std::string value;
        while (true) {
            if (at_end()) fail("unterminated string literal");
            char c = line_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                char esc = next();
                switch (esc) {
                    case 't': value.push_back('\t'); break;
                    case 'b': value.push_back('\b'); break;
                    case 'n': value.push_back('\n'); break;
                    case 'r': value.push_back('\r'); break;
                    case 'f': value.push_back('\f'); break;
                    case '"': value.push_back('"'); break;
                    case '\'': value.push_back('\''); break;
                    case '\\': value.push_back('\\'); break;
                    case 'u': append_utf8(value, hex_escape(4)); break;
                    case 'U': append_utf8(value, hex_escape(8)); break;
                    default: fail("invalid escape in string literal");
                }
                continue;
            }
            value.push_back(c);
        }
        return value;
    }

    Literal parse_literal() {
        Literal lit;
        lit.lexical_form = parse_quoted_string();
        if (peek() == '@') {
            ++pos_;
            std::string tag;
            while (!at_end() &&
                   (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '-'))
                tag.push_back(line_[pos_++]);
            if (tag.empty() || tag.front() == '-' || tag.back() == '-' ||
                !std::isalpha(static_cast<unsigned char>(tag.front())))
                fail("malformed language tag");
            lit.language_tag = std::move(tag);
            lit.datatype = Iri{std::string(kLangStringIri)};
        } else if (peek() == '^') {
            ++pos_;
            expect('^', "'^^' before datatype IRI");
            lit.datatype = parse_iri();
        }
        return lit;
    }

    Term parse_object() {
        char c = peek();
        if (c == '<') return parse_iri();
        if (c == '_') return parse_blank();
        if (c == '"') return parse_literal();
        fail("expected IRI, blank node or literal as object");
    }

private:
    std::string_view line_;
    std::size_t line_number_;
    std::size_t pos_ = 0;
};

}  // namespace

std::size_t RdfGraph::TripleKeyHash::operator()(const TripleKey& k) const {
    std::uint64_t h = (static_cast<std::uint64_t>(k.s) << 32) | k.o;
    h ^= static_cast<std::uint64_t>(k.p) * 0x9e3779b97f4a7c15ull;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
}

NodeId RdfGraph::add_term(const Term& term) {
    std::string key = term_key(term);
    auto it = node_ids_.find(key);
    if (it != node_ids_.end()) return it->second;
    auto id = static_cast<NodeId>(nodes_.size());
    node_ids_.emplace(std::move(key), id);
    nodes_.push_back(term);
    node_names_.push_back(display_name(term));
    out_.emplace_back();
    labels_.emplace_back();
    out_degree_.push_back(0);
    return id;
}

PredicateId RdfGraph::add_predicate(const Iri& predicate) {
    auto it = predicate_ids_.find(predicate.value);
    if (it != predicate_ids_.end()) return it->second;
    auto id = static_cast<PredicateId>(predicate_names_.size());
    predicate_ids_.emplace(predicate.value, id);
    predicate_names_.push_back(predicate.value);
    subjects_by_predicate_.emplace_back();
    return id;
}

bool RdfGraph::add_triple(NodeId subject, PredicateId predicate, NodeId object) {
    if (!triple_keys_.insert(TripleKey{subject, predicate, object}).second) return false;
    auto& entries = out_[subject];
    auto pos = std::lower_bound(entries.begin(), entries.end(), predicate,
                                [](const AdjacencyEntry& e, PredicateId p) {
                                    return e.predicate < p;
                                });
    if (pos == entries.end() || pos->predicate != predicate) {
        pos = entries.insert(pos, AdjacencyEntry{predicate, {}});
        auto& labels = labels_[subject];
        labels.insert(std::lower_bound(labels.begin(), labels.end(), predicate), predicate);
        subjects_by_predicate_[predicate].push_back(subject);
    }
    pos->objects.push_back(object);
    ++out_degree_[subject];
    ++triple_count_;
    return true;
}

bool RdfGraph::add_triple(const Triple& triple) {
    NodeId s = add_term(std::visit([](const auto& t) { return Term(t); }, triple.subject));
    PredicateId p = add_predicate(triple.predicate);
    NodeId o = add_term(triple.object);
    return add_triple(s, p, o);
}

NodeKind RdfGraph::kind(NodeId id) const {
    const Term& t = nodes_[id];
    if (std::holds_alternative<Iri>(t)) return NodeKind::Iri;
    if (std::holds_alternative<BlankNode>(t)) return NodeKind::Blank;
    return NodeKind::Literal;
}

std::optional<NodeId> RdfGraph::find_node(const Term& term) const {
    auto it = node_ids_.find(term_key(term));
    if (it == node_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<NodeId> RdfGraph::find_node_by_name(const std::string& name) const {
    if (name.rfind("_:", 0) == 0) {
        auto it = node_ids_.find("B" + name.substr(2));
        if (it != node_ids_.end()) return it->second;
        return std::nullopt;
    }
    auto it = node_ids_.find("I" + name);
    if (it != node_ids_.end()) return it->second;
    return std::nullopt;
}

std::optional<PredicateId> RdfGraph::find_predicate(const std::string& iri) const {
    auto it = predicate_ids_.find(iri);
    if (it == predicate_ids_.end()) return std::nullopt;
    return it->second;
}

std::span<const NodeId> RdfGraph::neighbors(NodeId u, PredicateId p) const {
    if (u >= out_.size()) return {};
    const auto& entries = out_[u];
    auto pos = std::lower_bound(entries.begin(), entries.end(), p,
                                [](const AdjacencyEntry& e, PredicateId pred) {
                                    return e.predicate < pred;
                                });
    if (pos == entries.end() || pos->predicate != p) return {};
    return pos->objects;
}

std::span<const PredicateId> RdfGraph::predicate_labels(NodeId u) const {
    if (u >= labels_.size()) return {};
    return labels_[u];
}

std::size_t RdfGraph::out_degree(NodeId u) const {
    return u < out_degree_.size() ? out_degree_[u] : 0;
}

std::vector<NodeId> RdfGraph::subjects() const {
    std::vector<NodeId> result;
    for (NodeId u = 0; u < nodes_.size(); ++u)
        if (out_degree_[u] > 0) result.push_back(u);
    return result;
}

std::optional<Triple> parse_ntriples_line(std::string_view line, std::size_t line_number) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    LineScanner scanner(line, line_number);
    scanner.skip_whitespace();
    if (scanner.at_end() || scanner.peek() == '#') return std::nullopt;

    Triple triple;
    if (scanner.peek() == '_')
        triple.subject = scanner.parse_blank();
    else
        triple.subject = scanner.parse_iri();
    scanner.skip_whitespace();
    triple.predicate = scanner.parse_iri();
    scanner.skip_whitespace();
    triple.object = scanner.parse_object();
    scanner.skip_whitespace();
    scanner.expect('.', "'.' terminating the triple");
    scanner.skip_whitespace();
    if (!scanner.at_end() && scanner.peek() != '#')
        scanner.fail("trailing content after '.'");
    return triple;
}

RdfGraph parse_ntriples(std::istream& in, const ParseOptions& options,
                        ParseDiagnostics* diagnostics) {
    RdfGraph graph;
    std::string line;
    std::size_t line_number = 0;
    constexpr std::size_t kMaxMessages = 50;
    while (std::getline(in, line)) {
        ++line_number;
        try {
            if (auto triple = parse_ntriples_line(line, line_number))
                graph.add_triple(*triple);
        } catch (const ParseError& e) {
            if (!options.lenient) throw;
            if (diagnostics != nullptr) {
                ++diagnostics->skipped_lines;
                if (diagnostics->messages.size() < kMaxMessages)
                    diagnostics->messages.push_back(e.what());
            }
        }
    }
    return graph;
}

RdfGraph parse_ntriples_file(const std::string& path, const ParseOptions& options,
                             ParseDiagnostics* diagnostics) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset: " + path);
    return parse_ntriples(in, options, diagnostics);
}

namespace {

void write_escaped_literal(std::ostream& out, const std::string& lexical) {
    out << '"';
    for (char c : lexical) {
        switch (c) {
            case '"': out << "\\\""; break;
            case '\\': out << "\\\\"; break;
            case '\n': out << "\\n"; break;
            case '\r': out << "\\r"; break;
            case '\t': out << "\\t"; break;
            default: out << c;
        }
    }
    out << '"';
}

}  // namespace

std::string term_to_ntriples(const Term& term) {
    std::ostringstream out;
    if (const auto* iri = std::get_if<Iri>(&term)) {
        out << '<' << iri->value << '>';
    } else if (const auto* blank = std::get_if<BlankNode>(&term)) {
        out << "_:" << blank->label;
    } else {
        const auto& lit = std::get<Literal>(term);
        write_escaped_literal(out, lit.lexical_form);
        if (lit.language_tag)
            out << '@' << *lit.language_tag;
        else if (lit.datatype)
            out << "^^<" << lit.datatype->value << '>';
    }
    return out.str();
}

void write_ntriples(std::ostream& out, const RdfGraph& graph) {
    graph.for_each_triple([&](NodeId s, PredicateId p, NodeId o) {
        out << term_to_ntriples(graph.term(s)) << ' ' << '<' << graph.predicate_name(p) << "> "
            << term_to_ntriples(graph.term(o)) << " .\n";
    });
}

}  // namespace semsearch
