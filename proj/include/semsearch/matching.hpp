#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace semsearch {

// Weight matrix of one per-predicate neighborhood comparison: rows index the
// neighbors of u, columns the neighbors of v, entries are Sim scores in [0,1].
class MatchingProblem {
public:
    MatchingProblem(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), weights_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t r, std::size_t c) const { return weights_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, double w) { weights_[r * cols_ + c] = w; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> weights_;
};

struct MatchingResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), size min(rows, cols)
    double value = 0.0;  // best matching sum / (rows + cols - |M|)
    bool exact = true;   // false when the greedy fallback decided the value
};

// Value of the best maximal nonrepeating matching: every maximal matching has
// size min(rows, cols), so the denominator rows + cols - |M| is constant and
// the search reduces to a maximum-weight assignment of the smaller side.
// Exact (Hungarian) when min(rows, cols) <= exact_limit, greedy otherwise.
MatchingResult max_matching_value(const MatchingProblem& problem, std::size_t exact_limit);

}  // namespace semsearch
