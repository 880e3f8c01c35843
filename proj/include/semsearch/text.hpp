#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace semsearch {

// Tokenization and stemming settings shared by index build and query parsing.
// Token boundaries are non-alphanumeric characters plus camel-case
// transitions, so an IRI local name like "notableIdeas" yields the same
// tokens as the literal "notable ideas". Stopwords are removed before
// stemming.
struct AnalysisConfig {
    bool stemming_enabled = true;
    std::unordered_set<std::string> stopwords;

    AnalysisConfig();
};

// Built-in minimal English stopword list.
const std::unordered_set<std::string>& default_stopwords();

// Loads a stopword list, one token per line, UTF-8, '#' comments allowed.
std::unordered_set<std::string> load_stopwords(const std::string& path);

// Porter suffix-stripping stemmer for English. Input is expected lowercase
// ASCII; anything else is returned unchanged apart from the usual rules.
std::string porter_stem(std::string_view word);

// Normalizes text to tokens: split, lowercase, stopword filter, stem.
// Deduplicated, first-occurrence order. Idempotent on its own output.
std::vector<std::string> tokenize(std::string_view text, const AnalysisConfig& cfg);

// Document-frequency table over a corpus of token sets (one document per
// literal). idf(t) = ln((1 + doc_count) / (1 + df(t))) + 1, so every stored
// token has weight >= 1 and an unseen token gets the df = 0 value.
class IdfTable {
public:
    // Throws BuildError on an empty corpus ("no literals to weight").
    static IdfTable build(const std::vector<std::vector<std::string>>& documents);

    // Table over zero documents; every token falls back to the unseen rule.
    static IdfTable empty();

    double idf(const std::string& token) const;
    std::size_t doc_count() const { return doc_count_; }
    std::size_t df(const std::string& token) const;
    const std::map<std::string, std::size_t>& frequencies() const { return df_; }

    void save(std::ostream& out, const std::string& build_id) const;
    static IdfTable load(std::istream& in, const std::string& expected_build_id);

private:
    std::size_t doc_count_ = 0;
    std::map<std::string, std::size_t> df_;
};

// Weighted-Jaccard similarity between two token sets: the idf mass of the
// intersection over the idf mass of the union. 0 when either side is empty.
double literal_sim(const std::vector<std::string>& x_tokens,
                   const std::vector<std::string>& y_tokens, const IdfTable& idf);

// Convenience overload over raw lexical forms.
double literal_sim(std::string_view x, std::string_view y, const IdfTable& idf,
                   const AnalysisConfig& cfg);

}  // namespace semsearch
