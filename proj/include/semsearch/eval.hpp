#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "semsearch/search.hpp"

namespace semsearch {

// precision = tp / (tp + fp); 0 when the system returned nothing.
double precision(std::size_t tp, std::size_t fp);
// recall = tp / (tp + fn); throws std::invalid_argument when tp + fn = 0
// (gold sets are non-empty by contract).
double recall(std::size_t tp, std::size_t fn);
// harmonic mean; 0 when p + r = 0.
double f_measure(double p, double r);

struct GoldEntry {
    std::string query;
    std::vector<std::string> relevant;  // sorted, unique, non-empty
};

struct GoldSet {
    std::vector<GoldEntry> entries;
};

// Lines `query text \t iri1,iri2,...`; '#' comments and blank lines allowed.
GoldSet load_gold(std::istream& in);
GoldSet load_gold_file(const std::string& path);

struct QueryEval {
    std::string query;
    std::size_t tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f_measure = 0.0;
};

struct EvalReport {
    std::vector<QueryEval> per_query;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    // mean of per-query F values (the primary macro F)
    double macro_f = 0.0;
    // F of the macro-averaged precision/recall, reported alongside
    double f_of_macro = 0.0;
    std::vector<std::string> warnings;
};

// Runs every gold query at cutoff k and macro-averages the per-query scores.
// Gold entities unknown to the engine produce warnings (and count as false
// negatives unless returned); invalid queries return empty result sets.
EvalReport evaluate(const SearchEngine& engine, const GoldSet& gold, int k);

void render_report_table(std::ostream& out, const EvalReport& report);
std::string report_to_json(const EvalReport& report);

}  // namespace semsearch
