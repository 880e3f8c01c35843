#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "semsearch/errors.hpp"
#include "semsearch/similarity.hpp"
#include "test_support.hpp"

using namespace semsearch;
namespace st = semsearch::testing;

namespace {

struct Built {
    RdfGraph graph;
    IdfTable idf = IdfTable::empty();
    AnalysisConfig analysis;
};

Built analyze(const std::string& ntriples) {
    Built built;
    built.graph = st::parse_graph(ntriples);
    auto corpus = LiteralSimTable::corpus(built.graph, built.analysis);
    if (!corpus.empty()) built.idf = IdfTable::build(corpus);
    return built;
}

SimilarityMatrix compute(const Built& built, const SimilarityConfig& cfg,
                         WeightMode mode = WeightMode::Uniform) {
    LiteralSimTable literals(built.graph, built.idf, built.analysis);
    PredicateWeights weights = compute_predicate_weights(built.graph, mode);
    return compute_similarity(built.graph, literals, weights, cfg);
}

}  // namespace

TEST_SUITE("similarity") {

TEST_CASE("candidate pairs require a shared outgoing predicate") {
    RdfGraph g = st::parse_graph(
        "<http://x/u> <http://x/p> <http://x/n1> .\n"
        "<http://x/v> <http://x/p> <http://x/n2> .\n"
        "<http://x/w> <http://x/q> <http://x/n3> .\n");
    auto pairs = candidate_pairs(g);
    NodeId u = *g.find_node_by_name("http://x/u");
    NodeId v = *g.find_node_by_name("http://x/v");
    NodeId w = *g.find_node_by_name("http://x/w");
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == SimilarityMatrix::pair_key(u, v));
    CHECK(pairs[0] != SimilarityMatrix::pair_key(u, w));
}

TEST_CASE("n subjects sharing one predicate give n(n-1)/2 pairs") {
    std::string doc;
    for (int i = 0; i < 7; ++i)
        doc += "<http://x/s" + std::to_string(i) + "> <http://x/p> \"v" + std::to_string(i) +
               "\" .\n";
    RdfGraph g = st::parse_graph(doc);
    CHECK(candidate_pairs(g).size() == 7 * 6 / 2);
}

TEST_CASE("object-only nodes never form candidate pairs") {
    RdfGraph g = st::parse_graph(
        "<http://x/u> <http://x/p> <http://x/shared> .\n"
        "<http://x/v> <http://x/p> <http://x/shared> .\n");
    // u, v are the only subjects; `shared` has no outgoing edges
    CHECK(candidate_pairs(g).size() == 1);
}

TEST_CASE("single step matches the hand-evaluated two-literal example") {
    // u --p--> "alpha beta", v --p--> "alpha gamma"; beta = 0.15:
    // LiteralSim = 1.0/(1.0 + 1.405465 + 1.405465) = 0.262403
    // PairSim^1 = 0.85 * 0.262403 + 0.15 = 0.373043
    Built built = analyze(
        "<http://x/u> <http://x/p> \"alpha beta\" .\n"
        "<http://x/v> <http://x/p> \"alpha gamma\" .\n");
    SimilarityConfig cfg;
    SimilarityMatrix m = compute(built, cfg);
    NodeId u = *built.graph.find_node_by_name("http://x/u");
    NodeId v = *built.graph.find_node_by_name("http://x/v");
    CHECK(m.score(u, v) == doctest::Approx(0.373043).epsilon(1e-4));
    // neighbors are literals, so the fixed point is reached by iteration 2
    CHECK(m.iterations == 2);
    CHECK(m.delta_history.back() == doctest::Approx(0.0));
}

TEST_CASE("identical neighborhoods stay at the all-ones fixed point") {
    Built built = analyze(
        "<http://x/u> <http://x/p> <http://x/shared> .\n"
        "<http://x/u> <http://x/q> \"same words\" .\n"
        "<http://x/v> <http://x/p> <http://x/shared> .\n"
        "<http://x/v> <http://x/q> \"same words\" .\n");
    SimilarityConfig cfg;
    SimilarityMatrix m = compute(built, cfg);
    NodeId u = *built.graph.find_node_by_name("http://x/u");
    NodeId v = *built.graph.find_node_by_name("http://x/v");
    CHECK(m.score(u, v) == doctest::Approx(1.0));
    for (double delta : m.delta_history) CHECK(delta == doctest::Approx(0.0));
}

TEST_CASE("a forced pair with no common predicates evaluates to beta exactly") {
    Built built = analyze(
        "<http://x/u> <http://x/p> \"left\" .\n"
        "<http://x/v> <http://x/q> \"right\" .\n");
    LiteralSimTable literals(built.graph, built.idf, built.analysis);
    PredicateWeights weights = compute_predicate_weights(built.graph, WeightMode::Uniform);
    SimilarityConfig cfg;
    SimilarityEngine engine(built.graph, literals, weights, cfg);
    SimilarityMatrix ones(candidate_pairs(built.graph), 1.0);
    NodeId u = *built.graph.find_node_by_name("http://x/u");
    NodeId v = *built.graph.find_node_by_name("http://x/v");
    CHECK(engine.evaluate_pair(u, v, ones) == doctest::Approx(cfg.beta));
}

TEST_CASE("an IRI node never resembles a literal node") {
    // u points at an IRI, v at a literal, under the same predicate; the
    // only matching pair is mixed, so the bracketed term is zero.
    Built built = analyze(
        "<http://x/u> <http://x/p> <http://x/obj> .\n"
        "<http://x/v> <http://x/p> \"obj\" .\n");
    SimilarityConfig cfg;
    SimilarityMatrix m = compute(built, cfg);
    NodeId u = *built.graph.find_node_by_name("http://x/u");
    NodeId v = *built.graph.find_node_by_name("http://x/v");
    CHECK(m.score(u, v) == doctest::Approx(cfg.beta));
}

TEST_CASE("property suite: symmetry, range, self-similarity, convergence envelope") {
    std::mt19937 rng(41);
    SimilarityConfig cfg;
    for (int round = 0; round < 25; ++round) {
        RdfGraph graph = st::random_graph(rng, 18, 3);
        AnalysisConfig analysis;
        auto corpus = LiteralSimTable::corpus(graph, analysis);
        IdfTable idf = corpus.empty() ? IdfTable::empty() : IdfTable::build(corpus);
        LiteralSimTable literals(graph, idf, analysis);
        PredicateWeights weights = compute_predicate_weights(graph, WeightMode::Uniform);
        SimilarityEngine engine(graph, literals, weights, cfg);

        SimilarityMatrix m = engine.compute();

        // range [beta, 1] for every stored pair after iteration >= 1
        for (std::size_t i = 0; i < m.pair_count(); ++i) {
            CHECK(m.score_at(i) >= cfg.beta - 1e-12);
            CHECK(m.score_at(i) <= 1.0 + 1e-12);
        }

        // symmetry is structural (unordered keys): lookups commute
        for (std::size_t i = 0; i < std::min<std::size_t>(m.pair_count(), 20); ++i) {
            auto [a, b] = SimilarityMatrix::key_nodes(m.keys()[i]);
            CHECK(m.score(a, b) == m.score(b, a));
        }

        // self-similarity fixed at 1 under unit weights (diagnostic pairing)
        for (NodeId u : graph.subjects())
            CHECK(engine.evaluate_pair(u, u, m) == doctest::Approx(1.0).epsilon(1e-12));

        // geometric envelope: delta_i <= (1-beta)^(i-1) * delta_1
        const auto& deltas = m.delta_history;
        if (!deltas.empty()) {
            for (std::size_t i = 1; i < deltas.size(); ++i)
                CHECK(deltas[i] <=
                      std::pow(1.0 - cfg.beta, static_cast<double>(i)) * deltas[0] + 1e-9);
        }
    }
}

TEST_CASE("predicate weights default to one and rarity mode stays in (0, 1]") {
    RdfGraph g = st::parse_graph(
        "<http://x/s0> <http://x/common> \"a\" .\n"
        "<http://x/s1> <http://x/common> \"b\" .\n"
        "<http://x/s2> <http://x/common> \"c\" .\n"
        "<http://x/s0> <http://x/rare> \"d\" .\n");
    PredicateWeights uniform = compute_predicate_weights(g, WeightMode::Uniform);
    for (PredicateId p = 0; p < g.predicate_count(); ++p)
        CHECK(uniform.weight(p) == doctest::Approx(1.0));

    PredicateWeights rarity = compute_predicate_weights(g, WeightMode::Rarity);
    PredicateId common = *g.find_predicate("http://x/common");
    PredicateId rare = *g.find_predicate("http://x/rare");
    // S = 3 subjects; raw(common) = ln(4/4)+1 = 1, raw(rare) = ln(4/2)+1
    double expected_rare_raw = std::log(2.0) + 1.0;
    CHECK(rarity.weight(rare) == doctest::Approx(1.0));  // normalized maximum
    CHECK(rarity.weight(common) == doctest::Approx(1.0 / expected_rare_raw));
    for (PredicateId p = 0; p < g.predicate_count(); ++p) {
        CHECK(rarity.weight(p) > 0.0);
        CHECK(rarity.weight(p) <= 1.0);
    }
}

TEST_CASE("rarity weights keep scores within [beta, 1]") {
    std::mt19937 rng(43);
    RdfGraph graph = st::random_graph(rng, 15, 3);
    AnalysisConfig analysis;
    auto corpus = LiteralSimTable::corpus(graph, analysis);
    IdfTable idf = corpus.empty() ? IdfTable::empty() : IdfTable::build(corpus);
    LiteralSimTable literals(graph, idf, analysis);
    PredicateWeights weights = compute_predicate_weights(graph, WeightMode::Rarity);
    SimilarityConfig cfg;
    SimilarityMatrix m =
        compute_similarity(graph, literals, weights, cfg);
    for (std::size_t i = 0; i < m.pair_count(); ++i) {
        CHECK(m.score_at(i) >= cfg.beta - 1e-12);
        CHECK(m.score_at(i) <= 1.0 + 1e-12);
    }
}

TEST_CASE("greedy evaluations are counted and recorded per pair") {
    Built built = analyze(
        "<http://x/u> <http://x/p> \"one red\" .\n"
        "<http://x/u> <http://x/p> \"two blue\" .\n"
        "<http://x/v> <http://x/p> \"three red\" .\n"
        "<http://x/v> <http://x/p> \"four blue\" .\n");
    SimilarityConfig cfg;
    cfg.exact_matching_limit = 1;  // force the greedy path on the 2x2 matching
    SimilarityMatrix m = compute(built, cfg);
    CHECK(m.greedy_evaluations > 0);
    NodeId u = *built.graph.find_node_by_name("http://x/u");
    NodeId v = *built.graph.find_node_by_name("http://x/v");
    REQUIRE(m.greedy_pairs.size() == 1);
    CHECK(m.greedy_pairs[0] == SimilarityMatrix::pair_key(u, v));

    SimilarityConfig exact;
    SimilarityMatrix m2 = compute(built, exact);
    CHECK(m2.greedy_evaluations == 0);
    CHECK(m2.greedy_pairs.empty());
}

TEST_CASE("epsilon stops iteration early, k_max caps it") {
    Built built = analyze(
        "<http://x/u> <http://x/p> \"alpha beta\" .\n"
        "<http://x/v> <http://x/p> \"alpha gamma\" .\n");
    SimilarityConfig one_step;
    one_step.max_iterations = 1;
    SimilarityMatrix m1 = compute(built, one_step);
    CHECK(m1.iterations == 1);

    SimilarityConfig loose;
    loose.epsilon = 10.0;  // any first delta satisfies it
    SimilarityMatrix m2 = compute(built, loose);
    CHECK(m2.iterations == 1);
}

TEST_CASE("similarity matrix round-trips through its artifact file") {
    Built built = analyze(
        "<http://x/u> <http://x/p> \"alpha beta\" .\n"
        "<http://x/v> <http://x/p> \"alpha gamma\" .\n"
        "<http://x/w> <http://x/p> \"alpha beta\" .\n");
    SimilarityConfig cfg;
    SimilarityMatrix m = compute(built, cfg);
    std::ostringstream out;
    m.save(out, built.graph, "feed0123feed0123");

    std::istringstream in(out.str());
    SimilarityMatrix loaded = SimilarityMatrix::load(in, built.graph, "feed0123feed0123");
    REQUIRE(loaded.pair_count() == m.pair_count());
    CHECK(loaded.keys() == m.keys());
    CHECK(loaded.beta == doctest::Approx(m.beta));
    CHECK(loaded.iterations == m.iterations);
    for (std::size_t i = 0; i < m.pair_count(); ++i)
        CHECK(loaded.score_at(i) == doctest::Approx(m.score_at(i)).epsilon(1e-6));

    std::istringstream bad(out.str());
    CHECK_THROWS_AS(SimilarityMatrix::load(bad, built.graph, "1111111111111111"), IoError);
}

TEST_CASE("matrix scores print sorted with six decimals") {
    Built built = analyze(
        "<http://x/b> <http://x/p> \"alpha beta\" .\n"
        "<http://x/a> <http://x/p> \"alpha gamma\" .\n");
    SimilarityConfig cfg;
    SimilarityMatrix m = compute(built, cfg);
    std::ostringstream out;
    m.save(out, built.graph, "feed0123feed0123");
    std::string text = out.str();
    // lexicographically smaller name first on the row
    CHECK(text.find("http://x/a\thttp://x/b\t0.373043") != std::string::npos);
}

}  // TEST_SUITE
