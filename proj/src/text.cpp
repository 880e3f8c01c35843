#include "semsearch/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "semsearch/artifact_io.hpp"
#include "semsearch/errors.hpp"

namespace semsearch {

namespace {

bool is_ascii_alnum(unsigned char c) { return std::isalnum(c) != 0; }
bool is_ascii_upper(unsigned char c) { return std::isupper(c) != 0; }
bool is_ascii_lower(unsigned char c) { return std::islower(c) != 0; }
bool is_ascii_digit(unsigned char c) { return std::isdigit(c) != 0; }

// Word characters: ASCII alphanumerics plus any multi-byte UTF-8 unit.
bool is_word_char(unsigned char c) { return c >= 0x80 || is_ascii_alnum(c); }

void ascii_lower_inplace(std::string& s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// ---- Porter stemmer -------------------------------------------------------
//
// Straight transcription of the 1980 suffix-stripping rules. Operates on
// lowercase ASCII; words of length <= 2 are left alone.

bool porter_is_consonant(const std::string& w, std::size_t i) {
    char c = w[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 ? true : !porter_is_consonant(w, i - 1);
    return true;
}

// m in the [C](VC)^m[V] decomposition of the stem.
int porter_measure(const std::string& w) {
    int m = 0;
    std::size_t i = 0;
    const std::size_t n = w.size();
    while (i < n && porter_is_consonant(w, i)) ++i;
    while (i < n) {
        while (i < n && !porter_is_consonant(w, i)) ++i;
        if (i == n) break;
        ++m;
        while (i < n && porter_is_consonant(w, i)) ++i;
    }
    return m;
}

bool porter_has_vowel(const std::string& w) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!porter_is_consonant(w, i)) return true;
    return false;
}

bool porter_double_consonant(const std::string& w) {
    const std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && porter_is_consonant(w, n - 1);
}

// *o condition: stem ends cvc where the final c is not w, x or y.
bool porter_cvc(const std::string& w) {
    const std::size_t n = w.size();
    if (n < 3) return false;
    if (!porter_is_consonant(w, n - 3) || porter_is_consonant(w, n - 2) ||
        !porter_is_consonant(w, n - 1))
        return false;
    char last = w[n - 1];
    return last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
    return w.size() >= suffix.size() &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct SuffixRule {
    std::string_view suffix;
    std::string_view replacement;
};

// Applies the longest matching rule whose stem passes m > threshold.
void apply_rule_list(std::string& w, const SuffixRule* rules, std::size_t count,
                     int m_threshold) {
    const SuffixRule* best = nullptr;
    for (std::size_t i = 0; i < count; ++i) {
        if (ends_with(w, rules[i].suffix) &&
            (best == nullptr || rules[i].suffix.size() > best->suffix.size()))
            best = &rules[i];
    }
    if (best == nullptr) return;
    std::string stem = w.substr(0, w.size() - best->suffix.size());
    if (porter_measure(stem) > m_threshold) w = stem + std::string(best->replacement);
}

void porter_step1a(std::string& w) {
    if (ends_with(w, "sses") || ends_with(w, "ies"))
        w.erase(w.size() - 2);
    else if (!ends_with(w, "ss") && ends_with(w, "s"))
        w.pop_back();
}

void porter_step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (porter_measure(w.substr(0, w.size() - 3)) > 0) w.pop_back();
        return;
    }
    bool stripped = false;
    if (ends_with(w, "ed") && porter_has_vowel(w.substr(0, w.size() - 2))) {
        w.erase(w.size() - 2);
        stripped = true;
    } else if (ends_with(w, "ing") && porter_has_vowel(w.substr(0, w.size() - 3))) {
        w.erase(w.size() - 3);
        stripped = true;
    }
    if (!stripped) return;
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w.push_back('e');
    } else if (porter_double_consonant(w)) {
        char last = w.back();
        if (last != 'l' && last != 's' && last != 'z') w.pop_back();
    } else if (porter_measure(w) == 1 && porter_cvc(w)) {
        w.push_back('e');
    }
}

void porter_step1c(std::string& w) {
    if (ends_with(w, "y") && porter_has_vowel(w.substr(0, w.size() - 1)))
        w.back() = 'i';
}

constexpr std::array<SuffixRule, 20> kStep2Rules{{
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
    {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
    {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
    {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
    {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
}};

constexpr std::array<SuffixRule, 7> kStep3Rules{{
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ful", ""},   {"ness", ""},
}};

constexpr std::array<std::string_view, 19> kStep4Suffixes{
    "al",  "ance", "ence", "er",    "ic",   "able", "ible", "ant", "ement", "ment",
    "ent", "ion",  "ou",   "ism",   "ate",  "iti",  "ous",  "ive", "ize"};

void porter_step4(std::string& w) {
    std::string_view best;
    for (std::string_view suf : kStep4Suffixes)
        if (ends_with(w, suf) && suf.size() > best.size()) best = suf;
    if (best.empty()) return;
    std::string stem = w.substr(0, w.size() - best.size());
    if (porter_measure(stem) <= 1) return;
    if (best == "ion" && (stem.empty() || (stem.back() != 's' && stem.back() != 't')))
        return;
    w = stem;
}

void porter_step5a(std::string& w) {
    if (!ends_with(w, "e")) return;
    std::string stem = w.substr(0, w.size() - 1);
    int m = porter_measure(stem);
    if (m > 1 || (m == 1 && !porter_cvc(stem))) w = stem;
}

void porter_step5b(std::string& w) {
    if (porter_measure(w) > 1 && porter_double_consonant(w) && w.back() == 'l')
        w.pop_back();
}

// ---- camel-case splitting --------------------------------------------------

// Splits "notableIdeas" -> {notable, Ideas} and "RDFGraph" -> {RDF, Graph}.
std::vector<std::string> split_camel(const std::string& word) {
    std::vector<std::string> parts;
    std::string cur;
    const std::size_t n = word.size();
    for (std::size_t i = 0; i < n; ++i) {
        unsigned char c = word[i];
        if (!cur.empty() && is_ascii_upper(c)) {
            unsigned char prev = word[i - 1];
            unsigned char next = i + 1 < n ? static_cast<unsigned char>(word[i + 1]) : 0;
            bool boundary = is_ascii_lower(prev) || is_ascii_digit(prev) ||
                            (is_ascii_upper(prev) && next != 0 && is_ascii_lower(next));
            if (boundary) {
                parts.push_back(cur);
                cur.clear();
            }
        }
        cur.push_back(static_cast<char>(c));
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

}  // namespace

const std::unordered_set<std::string>& default_stopwords() {
    static const std::unordered_set<std::string> kStopwords{
        "a",    "an",   "and",  "are",   "as",    "at",   "be",   "but",  "by",
        "for",  "if",   "in",   "into",  "is",    "it",   "no",   "not",  "of",
        "on",   "or",   "such", "that",  "the",   "their", "then", "there",
        "these", "they", "this", "to",   "was",   "will", "with"};
    return kStopwords;
}

AnalysisConfig::AnalysisConfig() : stopwords(default_stopwords()) {}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword file: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t");
        std::string word = line.substr(first, last - first + 1);
        ascii_lower_inplace(word);
        words.insert(std::move(word));
    }
    return words;
}

std::string porter_stem(std::string_view word) {
    std::string w(word);
    if (w.size() <= 2) return w;
    porter_step1a(w);
    porter_step1b(w);
    porter_step1c(w);
    apply_rule_list(w, kStep2Rules.data(), kStep2Rules.size(), 0);
    apply_rule_list(w, kStep3Rules.data(), kStep3Rules.size(), 0);
    porter_step4(w);
    porter_step5a(w);
    porter_step5b(w);
    return w;
}

std::vector<std::string> tokenize(std::string_view text, const AnalysisConfig& cfg) {
    std::vector<std::string> tokens;
    std::string raw;
    auto flush = [&] {
        if (raw.empty()) return;
        for (std::string& part : split_camel(raw)) {
            ascii_lower_inplace(part);
            if (cfg.stopwords.count(part) != 0) continue;
            if (cfg.stemming_enabled) part = porter_stem(part);
            if (!part.empty() && std::find(tokens.begin(), tokens.end(), part) == tokens.end())
                tokens.push_back(std::move(part));
        }
        raw.clear();
    };
    for (unsigned char c : text) {
        if (is_word_char(c))
            raw.push_back(static_cast<char>(c));
        else
            flush();
    }
    flush();
    return tokens;
}

IdfTable IdfTable::build(const std::vector<std::vector<std::string>>& documents) {
    if (documents.empty()) throw BuildError("no literals to weight");
    IdfTable table;
    table.doc_count_ = documents.size();
    for (const auto& doc : documents) {
        // token lists are already deduplicated per document
        for (const auto& token : doc) ++table.df_[token];
    }
    return table;
}

IdfTable IdfTable::empty() { return IdfTable{}; }

double IdfTable::idf(const std::string& token) const {
    auto it = df_.find(token);
    double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((1.0 + static_cast<double>(doc_count_)) / (1.0 + df)) + 1.0;
}

std::size_t IdfTable::df(const std::string& token) const {
    auto it = df_.find(token);
    return it == df_.end() ? 0 : it->second;
}

void IdfTable::save(std::ostream& out, const std::string& build_id) const {
    ArtifactHeader header{"idf", 1, build_id, {{"doc_count", std::to_string(doc_count_)}}};
    write_artifact_header(out, header);
    for (const auto& [token, df] : df_) out << token << '\t' << df << '\n';
}

IdfTable IdfTable::load(std::istream& in, const std::string& expected_build_id) {
    ArtifactHeader header = read_artifact_header(in, "idf", 1, expected_build_id);
    IdfTable table;
    table.doc_count_ = std::stoull(require_param(header, "doc_count"));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw IoError("idf table: malformed row: " + line);
        std::size_t df = std::stoull(line.substr(tab + 1));
        if (df < 1 || df > table.doc_count_)
            throw IoError("idf table: df out of range in row: " + line);
        table.df_.emplace(line.substr(0, tab), df);
    }
    return table;
}

double literal_sim(const std::vector<std::string>& x_tokens,
                   const std::vector<std::string>& y_tokens, const IdfTable& idf) {
    if (x_tokens.empty() && y_tokens.empty()) return 0.0;
    // accumulate in sorted token order so the sum is exactly symmetric
    std::vector<std::string> all(x_tokens);
    all.insert(all.end(), y_tokens.begin(), y_tokens.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    double intersection = 0.0;
    double union_weight = 0.0;
    for (const auto& t : all) {
        double w = idf.idf(t);
        union_weight += w;
        if (std::find(x_tokens.begin(), x_tokens.end(), t) != x_tokens.end() &&
            std::find(y_tokens.begin(), y_tokens.end(), t) != y_tokens.end())
            intersection += w;
    }
    return union_weight == 0.0 ? 0.0 : intersection / union_weight;
}

double literal_sim(std::string_view x, std::string_view y, const IdfTable& idf,
                   const AnalysisConfig& cfg) {
    return literal_sim(tokenize(x, cfg), tokenize(y, cfg), idf);
}

}  // namespace semsearch
