#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "semsearch/errors.hpp"
#include "semsearch/text.hpp"

using namespace semsearch;

TEST_SUITE("text") {

TEST_CASE("tokenize splits on non-alphanumeric boundaries and lowercases") {
    AnalysisConfig cfg;
    cfg.stemming_enabled = false;
    CHECK(tokenize("Andre Agassi", cfg) == std::vector<std::string>{"andre", "agassi"});
    CHECK(tokenize("Andre_Agassi", cfg) == std::vector<std::string>{"andre", "agassi"});
    CHECK(tokenize("", cfg).empty());
    CHECK(tokenize("  \t ", cfg).empty());
}

TEST_CASE("tokenize removes stopwords before stemming") {
    AnalysisConfig cfg;
    CHECK(tokenize("the anthem", cfg) == std::vector<std::string>{"anthem"});
    CHECK(tokenize("the of and", cfg).empty());
}

TEST_CASE("tokenize splits camel case so predicate labels match word queries") {
    AnalysisConfig cfg;
    cfg.stemming_enabled = false;
    CHECK(tokenize("notableIdeas", cfg) == std::vector<std::string>{"notable", "ideas"});
    CHECK(tokenize("RDFGraphParser", cfg) == std::vector<std::string>{"rdf", "graph", "parser"});
    CHECK(tokenize("birthPlace2020", cfg) == std::vector<std::string>{"birth", "place2020"});
}

TEST_CASE("tokenize deduplicates and keeps first-occurrence order") {
    AnalysisConfig cfg;
    cfg.stemming_enabled = false;
    CHECK(tokenize("beta alpha beta", cfg) == std::vector<std::string>{"beta", "alpha"});
}

TEST_CASE("tokenize is idempotent on normalized output") {
    AnalysisConfig cfg;
    auto once = tokenize("Maximal Nonrepeating Matchings", cfg);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(tokenize(joined, cfg) == once);
}

TEST_CASE("porter stemmer reproduces the published rule examples") {
    // full-pipeline outputs of the classic algorithm
    const std::pair<const char*, const char*> cases[] = {
        {"caresses", "caress"}, {"ponies", "poni"},     {"ties", "ti"},
        {"caress", "caress"},   {"cats", "cat"},        {"feed", "feed"},
        {"agreed", "agre"},     {"plastered", "plaster"}, {"bled", "bled"},
        {"motoring", "motor"},  {"sing", "sing"},       {"conflated", "conflat"},
        {"troubled", "troubl"}, {"sized", "size"},      {"hopping", "hop"},
        {"tanned", "tan"},      {"falling", "fall"},    {"hissing", "hiss"},
        {"fizzed", "fizz"},     {"failing", "fail"},    {"filing", "file"},
        {"happy", "happi"},     {"sky", "sky"},         {"relational", "relat"},
        {"conditional", "condit"}, {"rational", "ration"}, {"generalizations", "gener"},
        {"oscillators", "oscil"}, {"controll", "control"}, {"roll", "roll"},
        {"theory", "theori"},   {"forms", "form"},      {"induction", "induct"},
        {"empiricism", "empiric"}, {"singles", "singl"}, {"ideas", "idea"},
    };
    for (const auto& [word, expected] : cases) {
        CAPTURE(word);
        CHECK(porter_stem(word) == expected);
    }
}

TEST_CASE("porter stemmer leaves short words alone") {
    CHECK(porter_stem("a") == "a");
    CHECK(porter_stem("is") == "is");
    CHECK(porter_stem("oak") == "oak");
}

TEST_CASE("idf follows the smoothed formula") {
    // corpus [{alpha,beta},{alpha,gamma}]: df(alpha)=2, df(beta)=1
    IdfTable idf = IdfTable::build({{"alpha", "beta"}, {"alpha", "gamma"}});
    CHECK(idf.doc_count() == 2);
    CHECK(idf.df("alpha") == 2);
    CHECK(idf.df("beta") == 1);
    CHECK(idf.idf("alpha") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(idf.idf("beta") == doctest::Approx(std::log(3.0 / 2.0) + 1.0).epsilon(1e-9));
    CHECK(idf.idf("beta") == doctest::Approx(1.405465).epsilon(1e-5));
    // unseen token: df = 0 branch of the same formula
    CHECK(idf.idf("zeta") == doctest::Approx(std::log(3.0) + 1.0).epsilon(1e-9));
}

TEST_CASE("idf of a single-document corpus is 1.0") {
    IdfTable idf = IdfTable::build({{"x"}});
    CHECK(idf.idf("x") == doctest::Approx(1.0));
}

TEST_CASE("idf build rejects an empty corpus") {
    CHECK_THROWS_AS(IdfTable::build({}), BuildError);
}

TEST_CASE("df stays within [1, doc_count] and sums match the corpus") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> words(1, 5);
    std::uniform_int_distribution<int> pick(0, 9);
    std::vector<std::vector<std::string>> docs;
    std::size_t distinct_total = 0;
    for (int d = 0; d < 40; ++d) {
        std::vector<std::string> doc;
        for (int w = words(rng); w > 0; --w) {
            std::string token = "w" + std::to_string(pick(rng));
            if (std::find(doc.begin(), doc.end(), token) == doc.end())
                doc.push_back(token);
        }
        distinct_total += doc.size();
        docs.push_back(std::move(doc));
    }
    IdfTable idf = IdfTable::build(docs);
    std::size_t df_total = 0;
    for (const auto& [token, df] : idf.frequencies()) {
        CHECK(df >= 1);
        CHECK(df <= idf.doc_count());
        CHECK(idf.idf(token) >= 1.0);
        df_total += df;
    }
    CHECK(df_total == distinct_total);
}

TEST_CASE("literal_sim matches the hand-evaluated weighted jaccard") {
    IdfTable idf = IdfTable::build({{"alpha", "beta"}, {"alpha", "gamma"}});
    AnalysisConfig cfg;
    // 1.0 / (1.0 + 1.405465 + 1.405465)
    CHECK(literal_sim("alpha beta", "alpha gamma", idf, cfg) ==
          doctest::Approx(0.262403).epsilon(1e-5));
    CHECK(literal_sim("alpha beta", "alpha beta", idf, cfg) == doctest::Approx(1.0));
    CHECK(literal_sim("alpha", "gamma", idf, cfg) == doctest::Approx(0.0));
    CHECK(literal_sim("", "", idf, cfg) == doctest::Approx(0.0));
    CHECK(literal_sim("", "alpha", idf, cfg) == doctest::Approx(0.0));
}

TEST_CASE("literal_sim is symmetric, bounded, and 1 only on equal token sets") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> words(0, 4);
    std::uniform_int_distribution<int> pick(0, 7);
    std::vector<std::vector<std::string>> docs;
    for (int d = 0; d < 30; ++d) {
        std::vector<std::string> doc;
        for (int w = words(rng); w > 0; --w) {
            std::string token = "t" + std::to_string(pick(rng));
            if (std::find(doc.begin(), doc.end(), token) == doc.end())
                doc.push_back(token);
        }
        docs.push_back(std::move(doc));
    }
    IdfTable idf = IdfTable::build(docs);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (std::size_t j = 0; j < docs.size(); ++j) {
            double s = literal_sim(docs[i], docs[j], idf);
            CHECK(s == literal_sim(docs[j], docs[i], idf));
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
            auto sorted_i = docs[i];
            auto sorted_j = docs[j];
            std::sort(sorted_i.begin(), sorted_i.end());
            std::sort(sorted_j.begin(), sorted_j.end());
            if (s == 1.0) {
                CHECK(sorted_i == sorted_j);
                CHECK(!sorted_i.empty());
            }
            if (sorted_i == sorted_j && !sorted_i.empty()) CHECK(s == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("adding a shared token never decreases literal_sim") {
    IdfTable idf = IdfTable::build({{"a", "b", "c"}, {"a", "d"}, {"e", "f"}});
    std::vector<std::string> x{"a", "b"};
    std::vector<std::string> y{"a", "d"};
    double before = literal_sim(x, y, idf);
    x.push_back("e");
    y.push_back("e");
    double after = literal_sim(x, y, idf);
    CHECK(after >= before);
}

TEST_CASE("idf table round-trips through its artifact file") {
    IdfTable idf = IdfTable::build({{"alpha", "beta"}, {"alpha", "gamma"}});
    std::ostringstream out;
    idf.save(out, "cafe0123cafe0123");
    std::istringstream in(out.str());
    IdfTable loaded = IdfTable::load(in, "cafe0123cafe0123");
    CHECK(loaded.doc_count() == idf.doc_count());
    CHECK(loaded.frequencies() == idf.frequencies());

    std::istringstream wrong_build(out.str());
    CHECK_THROWS_AS(IdfTable::load(wrong_build, "0000000000000000"), IoError);
}

TEST_CASE("stopword files load one token per line") {
    std::string path = "/tmp/semsearch_stopwords_test.txt";
    {
        std::ofstream out(path);
        out << "# comment\nFoo\n\n  bar  \n";
    }
    auto words = load_stopwords(path);
    CHECK(words.count("foo") == 1);
    CHECK(words.count("bar") == 1);
    CHECK(words.size() == 2);
    CHECK_THROWS_AS(load_stopwords("/nonexistent/stopwords.txt"), IoError);
}

}  // TEST_SUITE
