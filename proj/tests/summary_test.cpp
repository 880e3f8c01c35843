#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "semsearch/errors.hpp"
#include "semsearch/summary.hpp"
#include "test_support.hpp"

using namespace semsearch;
namespace st = semsearch::testing;

namespace {

// matrix with planted scores over the given graph nodes
SimilarityMatrix planted(const RdfGraph& g,
                         const std::vector<std::tuple<std::string, std::string, double>>& scores) {
    std::vector<std::uint64_t> keys;
    for (const auto& [a, b, s] : scores)
        keys.push_back(SimilarityMatrix::pair_key(*g.find_node_by_name(a),
                                                  *g.find_node_by_name(b)));
    std::sort(keys.begin(), keys.end());
    SimilarityMatrix m(std::move(keys), 0.0);
    for (const auto& [a, b, s] : scores) {
        auto key = SimilarityMatrix::pair_key(*g.find_node_by_name(a), *g.find_node_by_name(b));
        for (std::size_t i = 0; i < m.keys().size(); ++i)
            if (m.keys()[i] == key) m.set_score_at(i, s);
    }
    return m;
}

RdfGraph three_subject_graph() {
    return st::parse_graph(
        "<http://x/a> <http://x/p> \"one\" .\n"
        "<http://x/b> <http://x/p> \"two\" .\n"
        "<http://x/c> <http://x/p> \"three\" .\n");
}

}  // namespace

TEST_SUITE("summary") {

TEST_CASE("all scores below tau give singleton classes") {
    RdfGraph g = three_subject_graph();
    auto m = planted(g, {{"http://x/a", "http://x/b", 0.3},
                         {"http://x/b", "http://x/c", 0.2},
                         {"http://x/a", "http://x/c", 0.1}});
    auto classes = cluster(m, {.tau = 0.7}, g.subjects(), g);
    CHECK(classes.size() == 3);
    for (const auto& cls : classes) CHECK(cls.members.size() == 1);
}

TEST_CASE("a single pair above tau merges") {
    RdfGraph g = three_subject_graph();
    auto m = planted(g, {{"http://x/a", "http://x/b", 0.9}});
    auto classes = cluster(m, {.tau = 0.7}, g.subjects(), g);
    REQUIRE(classes.size() == 2);
    CHECK(classes[0].members.size() == 2);  // {a, b}; representative http://x/a
    CHECK(classes[1].members.size() == 1);
}

TEST_CASE("single-link closure chains merges transitively") {
    RdfGraph g = three_subject_graph();
    auto m = planted(g, {{"http://x/a", "http://x/b", 0.8},
                         {"http://x/b", "http://x/c", 0.8},
                         {"http://x/a", "http://x/c", 0.1}});
    auto classes = cluster(m, {.tau = 0.7}, g.subjects(), g);
    REQUIRE(classes.size() == 1);
    CHECK(classes[0].members.size() == 3);
}

TEST_CASE("raising tau only refines the partition") {
    std::mt19937 rng(47);
    RdfGraph g = st::random_graph(rng, 12, 2);
    auto subjects = g.subjects();
    std::vector<std::tuple<std::string, std::string, double>> scores;
    std::uniform_real_distribution<double> score(0.0, 1.0);
    for (std::size_t i = 0; i < subjects.size(); ++i)
        for (std::size_t j = i + 1; j < subjects.size(); ++j)
            scores.emplace_back(g.node_name(subjects[i]), g.node_name(subjects[j]), score(rng));
    auto m = planted(g, scores);

    auto coarse = cluster(m, {.tau = 0.5}, subjects, g);
    auto fine = cluster(m, {.tau = 0.8}, subjects, g);

    auto class_of = [](const std::vector<EquivalenceClass>& classes, NodeId node) {
        for (const auto& cls : classes)
            for (NodeId member : cls.members)
                if (member == node) return cls.class_id;
        return -1;
    };
    // same fine class implies same coarse class (refinement)
    for (std::size_t i = 0; i < subjects.size(); ++i)
        for (std::size_t j = i + 1; j < subjects.size(); ++j)
            if (class_of(fine, subjects[i]) == class_of(fine, subjects[j]))
                CHECK(class_of(coarse, subjects[i]) == class_of(coarse, subjects[j]));
}

TEST_CASE("build_summary adds class edges with base-triple witnesses") {
    RdfGraph g = st::parse_graph(
        "<http://x/a> <http://x/p> <http://x/b> .\n"
        "<http://x/a2> <http://x/p> <http://x/b2> .\n"
        "<http://x/a> <http://x/q> \"text\" .\n"
        "<http://x/a2> <http://x/q> \"text\" .\n"
        "<http://x/b> <http://x/r> \"t1\" .\n"
        "<http://x/b2> <http://x/r> \"t2\" .\n");
    auto m = planted(g, {{"http://x/a", "http://x/a2", 0.9},
                         {"http://x/b", "http://x/b2", 0.9}});
    auto classes = cluster(m, {.tau = 0.7}, g.subjects(), g);
    SummaryGraph summary = build_summary(g, std::move(classes), {.tau = 0.7}, 0.15);

    REQUIRE(summary.classes.size() == 2);  // {a, a2} and {b, b2}
    int ca = summary.class_of(*g.find_node_by_name("http://x/a"));
    int cb = summary.class_of(*g.find_node_by_name("http://x/b"));
    CHECK(ca != cb);
    CHECK(summary.class_of(*g.find_node_by_name("http://x/a2")) == ca);

    // two parallel base triples collapse into one class edge
    PredicateId p = *g.find_predicate("http://x/p");
    std::size_t p_edges = 0;
    for (const auto& [from, pred, to] : summary.edges)
        if (pred == p) {
            ++p_edges;
            CHECK(from == ca);
            CHECK(to == cb);
        }
    CHECK(p_edges == 1);
}

TEST_CASE("internal edges become self-loops") {
    RdfGraph g = st::parse_graph(
        "<http://x/a> <http://x/p> <http://x/a2> .\n"
        "<http://x/a2> <http://x/p> <http://x/a> .\n");
    auto m = planted(g, {{"http://x/a", "http://x/a2", 0.95}});
    auto classes = cluster(m, {.tau = 0.7}, g.subjects(), g);
    SummaryGraph summary = build_summary(g, std::move(classes), {.tau = 0.7}, 0.15);
    REQUIRE(summary.classes.size() == 1);
    REQUIRE(summary.edges.size() == 1);
    CHECK(std::get<0>(summary.edges[0]) == std::get<2>(summary.edges[0]));
}

TEST_CASE("object-only nodes become singleton classes, literals stay out") {
    RdfGraph g = st::parse_graph(
        "<http://x/a> <http://x/p> <http://x/obj> .\n"
        "<http://x/a> <http://x/q> \"literal text\" .\n");
    SimilarityMatrix empty_matrix;
    auto classes = cluster(empty_matrix, {.tau = 0.7}, g.subjects(), g);
    SummaryGraph summary = build_summary(g, std::move(classes), {.tau = 0.7}, 0.15);
    CHECK(summary.classes.size() == 2);  // {a} and {obj}
    NodeId lit = *g.find_node(Term(Literal{"literal text", std::nullopt, std::nullopt}));
    CHECK(summary.class_of(lit) == -1);
    // partition covers subjects and object-only nodes exactly once
    std::size_t covered = 0;
    for (const auto& cls : summary.classes) covered += cls.members.size();
    CHECK(covered == 2);
}

TEST_CASE("summary soundness on random graphs: witnesses in both directions") {
    std::mt19937 rng(53);
    for (int round = 0; round < 5; ++round) {
        RdfGraph g = st::random_graph(rng, 20, 3);
        AnalysisConfig analysis;
        auto corpus = LiteralSimTable::corpus(g, analysis);
        IdfTable idf = corpus.empty() ? IdfTable::empty() : IdfTable::build(corpus);
        LiteralSimTable literals(g, idf, analysis);
        PredicateWeights weights = compute_predicate_weights(g, WeightMode::Uniform);
        SimilarityMatrix m = compute_similarity(g, literals, weights, {});
        auto classes = cluster(m, {.tau = 0.6}, g.subjects(), g);
        SummaryGraph summary = build_summary(g, std::move(classes), {.tau = 0.6}, 0.15);

        // every base triple between classified nodes has its summary edge
        std::set<std::tuple<int, PredicateId, int>> edge_set(summary.edges.begin(),
                                                             summary.edges.end());
        g.for_each_triple([&](NodeId s, PredicateId p, NodeId o) {
            if (g.kind(o) == NodeKind::Literal) return;
            CHECK(edge_set.count({summary.class_of(s), p, summary.class_of(o)}) == 1);
        });

        // every summary edge has a base-triple witness
        for (const auto& [from, pred, to] : summary.edges) {
            bool witness = false;
            g.for_each_triple([&](NodeId s, PredicateId p, NodeId o) {
                if (g.kind(o) == NodeKind::Literal) return;
                if (summary.class_of(s) == from && p == pred && summary.class_of(o) == to)
                    witness = true;
            });
            CHECK(witness);
        }

        // partition invariant over subjects
        std::size_t member_total = 0;
        std::set<NodeId> seen;
        for (const auto& cls : summary.classes) {
            CHECK(!cls.members.empty());
            for (NodeId node : cls.members) CHECK(seen.insert(node).second);
            member_total += cls.members.size();
        }
        for (NodeId u : g.subjects()) CHECK(seen.count(u) == 1);
        (void)member_total;
    }
}

TEST_CASE("summary graph round-trips through its artifact file") {
    RdfGraph g = st::parse_graph(
        "<http://x/a> <http://x/p> <http://x/b> .\n"
        "<http://x/a2> <http://x/p> <http://x/b> .\n"
        "<http://x/a> <http://x/q> \"words\" .\n");
    auto m = planted(g, {{"http://x/a", "http://x/a2", 0.9}});
    auto classes = cluster(m, {.tau = 0.7}, g.subjects(), g);
    SummaryGraph summary = build_summary(g, std::move(classes), {.tau = 0.7}, 0.15);

    std::ostringstream out;
    summary.save(out, g, "beef0123beef0123");
    std::istringstream in(out.str());
    SummaryGraph loaded = SummaryGraph::load(in, g, "beef0123beef0123");

    REQUIRE(loaded.classes.size() == summary.classes.size());
    for (std::size_t i = 0; i < loaded.classes.size(); ++i) {
        CHECK(loaded.classes[i].class_id == summary.classes[i].class_id);
        CHECK(loaded.classes[i].members == summary.classes[i].members);
    }
    CHECK(loaded.edges == summary.edges);
    CHECK(loaded.tau == doctest::Approx(summary.tau));
}

TEST_CASE("overlapping classes are rejected at load") {
    RdfGraph g = three_subject_graph();
    std::string text =
        "# semsearch summary v1\n"
        "# build beef0123beef0123\n"
        "# tau 0.700000\n"
        "# beta 0.150000\n"
        "# classes 2\n"
        "0\thttp://x/a,http://x/b\n"
        "1\thttp://x/b,http://x/c\n";
    std::istringstream in(text);
    CHECK_THROWS_AS(SummaryGraph::load(in, g, "beef0123beef0123"), IoError);
}

TEST_CASE("an empty summary file is a valid empty object") {
    RdfGraph g;
    std::string text =
        "# semsearch summary v1\n"
        "# build beef0123beef0123\n"
        "# tau 0.700000\n"
        "# beta 0.150000\n"
        "# classes 0\n";
    std::istringstream in(text);
    SummaryGraph loaded = SummaryGraph::load(in, g, "beef0123beef0123");
    CHECK(loaded.classes.empty());
    CHECK(loaded.edges.empty());
}

TEST_CASE("members containing commas survive the class-row encoding") {
    RdfGraph g = st::parse_graph(
        "<http://x/Washington,_D.C.> <http://x/p> \"capital\" .\n"
        "<http://x/plain> <http://x/p> \"city\" .\n");
    SimilarityMatrix none;
    auto classes = cluster(none, {.tau = 0.7}, g.subjects(), g);
    SummaryGraph summary = build_summary(g, std::move(classes), {.tau = 0.7}, 0.15);
    std::ostringstream out;
    summary.save(out, g, "beef0123beef0123");
    std::istringstream in(out.str());
    SummaryGraph loaded = SummaryGraph::load(in, g, "beef0123beef0123");
    CHECK(loaded.classes.size() == summary.classes.size());
    int cls = loaded.class_of(*g.find_node_by_name("http://x/Washington,_D.C."));
    CHECK(cls != -1);
}

}  // TEST_SUITE
