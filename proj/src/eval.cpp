#include "semsearch/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "semsearch/errors.hpp"

namespace semsearch {

double precision(std::size_t tp, std::size_t fp) {
    if (tp + fp == 0) return 0.0;  // empty answer set scores worst
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double recall(std::size_t tp, std::size_t fn) {
    if (tp + fn == 0) throw std::invalid_argument("recall undefined for an empty relevant set");
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double f_measure(double p, double r) {
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

GoldSet load_gold(std::istream& in) {
    GoldSet gold;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("gold line needs `query \\t iri,iri,...`", line_number);
        GoldEntry entry;
        entry.query = line.substr(0, tab);
        std::string iris = line.substr(tab + 1);
        std::size_t start = 0;
        while (start < iris.size()) {
            auto comma = iris.find(',', start);
            std::string iri =
                iris.substr(start, comma == std::string::npos ? comma : comma - start);
            if (!iri.empty()) entry.relevant.push_back(std::move(iri));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        std::sort(entry.relevant.begin(), entry.relevant.end());
        entry.relevant.erase(std::unique(entry.relevant.begin(), entry.relevant.end()),
                             entry.relevant.end());
        if (entry.relevant.empty())
            throw ParseError("gold entry has an empty relevant set", line_number);
        gold.entries.push_back(std::move(entry));
    }
    return gold;
}

GoldSet load_gold_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open gold file: " + path);
    return load_gold(in);
}

EvalReport evaluate(const SearchEngine& engine, const GoldSet& gold, int k) {
    EvalReport report;
    SearchConfig cfg = engine.defaults();
    cfg.k = k;
    for (const GoldEntry& entry : gold.entries) {
        for (const std::string& iri : entry.relevant)
            if (!engine.knows_entity(iri))
                report.warnings.push_back("gold entity not in graph: " + iri + " (query: " +
                                          entry.query + ")");

        std::vector<ResultEntry> results;
        try {
            results = engine.search(entry.query, cfg);
        } catch (const QueryError& e) {
            report.warnings.push_back("invalid gold query '" + entry.query +
                                      "': " + e.what());
        }

        std::set<std::string> returned;
        for (const ResultEntry& r : results) returned.insert(r.iri);
        std::size_t tp = 0;
        for (const std::string& iri : entry.relevant) tp += returned.count(iri);

        QueryEval qe;
        qe.query = entry.query;
        qe.tp = tp;
        qe.fp = returned.size() - tp;
        qe.fn = entry.relevant.size() - tp;
        qe.precision = precision(qe.tp, qe.fp);
        qe.recall = recall(qe.tp, qe.fn);
        qe.f_measure = f_measure(qe.precision, qe.recall);
        report.per_query.push_back(std::move(qe));
    }

    if (!report.per_query.empty()) {
        const auto n = static_cast<double>(report.per_query.size());
        for (const QueryEval& qe : report.per_query) {
            report.macro_precision += qe.precision / n;
            report.macro_recall += qe.recall / n;
            report.macro_f += qe.f_measure / n;
        }
        report.f_of_macro = f_measure(report.macro_precision, report.macro_recall);
    }
    return report;
}

void render_report_table(std::ostream& out, const EvalReport& report) {
    char row[64];
    out << "query\ttp\tfp\tfn\tP\tR\tF\n";
    for (const QueryEval& qe : report.per_query) {
        std::snprintf(row, sizeof(row), "\t%zu\t%zu\t%zu\t%.3f\t%.3f\t%.3f", qe.tp, qe.fp,
                      qe.fn, qe.precision, qe.recall, qe.f_measure);
        out << qe.query << row << '\n';
    }
    std::snprintf(row, sizeof(row), "macro\t\t\t\t%.3f\t%.3f\t%.3f", report.macro_precision,
                  report.macro_recall, report.macro_f);
    out << row << '\n';
    std::snprintf(row, sizeof(row), "%.3f", report.f_of_macro);
    out << "F(macro-P, macro-R) = " << row << '\n';
    for (const std::string& warning : report.warnings) out << "warning: " << warning << '\n';
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json object;
    object["macro"] = {{"precision", report.macro_precision},
                       {"recall", report.macro_recall},
                       {"f_measure", report.macro_f},
                       {"f_of_macro_pr", report.f_of_macro}};
    nlohmann::json queries = nlohmann::json::array();
    for (const QueryEval& qe : report.per_query)
        queries.push_back({{"query", qe.query},
                           {"tp", qe.tp},
                           {"fp", qe.fp},
                           {"fn", qe.fn},
                           {"precision", qe.precision},
                           {"recall", qe.recall},
                           {"f_measure", qe.f_measure}});
    object["per_query"] = queries;
    object["warnings"] = report.warnings;
    return object.dump(2);
}

}  // namespace semsearch
