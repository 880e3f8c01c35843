#include "semsearch/summary.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "semsearch/artifact_io.hpp"
#include "semsearch/errors.hpp"

namespace semsearch {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

// Member names may contain ',' (legal in IRIs); the class line is
// comma-joined, so escape '%' and ',' within each member.
std::string escape_member(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (c == '%')
            out += "%25";
        else if (c == ',')
            out += "%2C";
        else
            out.push_back(c);
    }
    return out;
}

std::string unescape_member(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (std::size_t i = 0; i < name.size(); ++i) {
        if (name[i] == '%' && i + 2 < name.size()) {
            if (name.compare(i, 3, "%25") == 0) {
                out.push_back('%');
                i += 2;
                continue;
            }
            if (name.compare(i, 3, "%2C") == 0) {
                out.push_back(',');
                i += 2;
                continue;
            }
        }
        out.push_back(name[i]);
    }
    return out;
}

std::vector<EquivalenceClass> finalize_classes(std::vector<std::vector<NodeId>> groups,
                                               const RdfGraph& graph) {
    for (auto& members : groups)
        std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
            return graph.node_name(a) < graph.node_name(b);
        });
    std::sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
        return graph.node_name(a.front()) < graph.node_name(b.front());
    });
    std::vector<EquivalenceClass> classes;
    classes.reserve(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i)
        classes.push_back({static_cast<int>(i), std::move(groups[i])});
    return classes;
}

}  // namespace

std::vector<EquivalenceClass> cluster(const SimilarityMatrix& sim, const ClusterConfig& cfg,
                                      const std::vector<NodeId>& nodes, const RdfGraph& graph) {
    std::unordered_map<NodeId, std::size_t> index;
    index.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

    UnionFind uf(nodes.size());
    for (std::size_t i = 0; i < sim.pair_count(); ++i) {
        if (sim.score_at(i) < cfg.tau) continue;
        auto [a, b] = SimilarityMatrix::key_nodes(sim.keys()[i]);
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end()) continue;
        uf.unite(ia->second, ib->second);
    }

    std::unordered_map<std::size_t, std::vector<NodeId>> by_root;
    for (std::size_t i = 0; i < nodes.size(); ++i) by_root[uf.find(i)].push_back(nodes[i]);
    std::vector<std::vector<NodeId>> groups;
    groups.reserve(by_root.size());
    for (auto& [root, members] : by_root) groups.push_back(std::move(members));
    return finalize_classes(std::move(groups), graph);
}

void SummaryGraph::rebuild_node_index(std::size_t node_count) {
    node_class_.assign(node_count, -1);
    for (const EquivalenceClass& cls : classes)
        for (NodeId member : cls.members) {
            if (member < node_class_.size() && node_class_[member] != -1)
                throw IoError("summary: node in more than one class: " +
                              std::to_string(member));
            node_class_[member] = cls.class_id;
        }
}

SummaryGraph build_summary(const RdfGraph& graph, std::vector<EquivalenceClass> subject_classes,
                           const ClusterConfig& cfg, double beta) {
    std::vector<std::vector<NodeId>> groups;
    groups.reserve(subject_classes.size());
    std::vector<bool> classified(graph.node_count(), false);
    for (EquivalenceClass& cls : subject_classes) {
        for (NodeId member : cls.members) classified[member] = true;
        groups.push_back(std::move(cls.members));
    }
    for (NodeId id = 0; id < graph.node_count(); ++id) {
        if (classified[id] || graph.kind(id) == NodeKind::Literal) continue;
        if (graph.is_subject(id))
            throw BuildError("summary: subject node missing from partition: " +
                             graph.node_name(id));
        groups.push_back({id});  // object-only node
    }

    SummaryGraph summary;
    summary.tau = cfg.tau;
    summary.beta = beta;
    summary.classes = finalize_classes(std::move(groups), graph);
    summary.rebuild_node_index(graph.node_count());

    graph.for_each_triple([&](NodeId s, PredicateId p, NodeId o) {
        if (graph.kind(o) == NodeKind::Literal) return;
        summary.edges.emplace_back(summary.class_of(s), p, summary.class_of(o));
    });
    std::sort(summary.edges.begin(), summary.edges.end());
    summary.edges.erase(std::unique(summary.edges.begin(), summary.edges.end()),
                        summary.edges.end());
    return summary;
}

void SummaryGraph::save(std::ostream& out, const RdfGraph& graph,
                        const std::string& build_id) const {
    ArtifactHeader header{"summary",
                          1,
                          build_id,
                          {{"tau", format_score(tau)},
                           {"beta", format_score(beta)},
                           {"classes", std::to_string(classes.size())}}};
    write_artifact_header(out, header);
    for (const EquivalenceClass& cls : classes) {
        out << cls.class_id << '\t';
        for (std::size_t i = 0; i < cls.members.size(); ++i) {
            if (i != 0) out << ',';
            out << escape_member(graph.node_name(cls.members[i]));
        }
        out << '\n';
    }
    for (const auto& [from, predicate, to] : edges)
        out << from << '\t' << graph.predicate_name(predicate) << '\t' << to << '\n';
}

SummaryGraph SummaryGraph::load(std::istream& in, const RdfGraph& graph,
                                const std::string& expected_build_id) {
    ArtifactHeader header = read_artifact_header(in, "summary", 1, expected_build_id);
    SummaryGraph summary;
    summary.tau = std::stod(require_param(header, "tau"));
    summary.beta = std::stod(require_param(header, "beta"));
    const auto expected_classes = std::stoull(require_param(header, "classes"));

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab1 = line.find('\t');
        if (tab1 == std::string::npos) throw IoError("summary: malformed row: " + line);
        auto tab2 = line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) {
            // class row: id \t member,member,...
            EquivalenceClass cls;
            cls.class_id = std::stoi(line.substr(0, tab1));
            std::string members = line.substr(tab1 + 1);
            std::size_t start = 0;
            while (start <= members.size()) {
                auto comma = members.find(',', start);
                std::string name = unescape_member(
                    members.substr(start, comma == std::string::npos ? comma : comma - start));
                auto node = graph.find_node_by_name(name);
                if (!node) throw IoError("summary: unknown class member: " + name);
                cls.members.push_back(*node);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            if (cls.members.empty()) throw IoError("summary: empty class row: " + line);
            summary.classes.push_back(std::move(cls));
        } else {
            // edge row: class \t predicate \t class
            int from = std::stoi(line.substr(0, tab1));
            std::string predicate = line.substr(tab1 + 1, tab2 - tab1 - 1);
            int to = std::stoi(line.substr(tab2 + 1));
            auto p = graph.find_predicate(predicate);
            if (!p) throw IoError("summary: unknown predicate in edge: " + predicate);
            summary.edges.emplace_back(from, *p, to);
        }
    }
    if (summary.classes.size() != expected_classes)
        throw IoError("summary: class count does not match header");
    for (std::size_t i = 0; i < summary.classes.size(); ++i)
        if (summary.classes[i].class_id != static_cast<int>(i))
            throw IoError("summary: class ids not contiguous");
    for (const auto& [from, predicate, to] : summary.edges)
        if (from < 0 || to < 0 || from >= static_cast<int>(summary.classes.size()) ||
            to >= static_cast<int>(summary.classes.size()))
            throw IoError("summary: edge references unknown class");
    summary.rebuild_node_index(graph.node_count());  // throws on overlap
    return summary;
}

}  // namespace semsearch
