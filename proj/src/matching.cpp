#include "semsearch/matching.hpp"

#include <algorithm>
#include <limits>

namespace semsearch {

namespace {

// Hungarian algorithm with potentials on an n x m matrix, n <= m, maximizing.
// Assigns every row; returns col index per row. O(n^2 m).
std::vector<std::size_t> assign_rows(const MatchingProblem& p, bool transposed) {
    const std::size_t n = transposed ? p.cols() : p.rows();
    const std::size_t m = transposed ? p.rows() : p.cols();
    auto weight = [&](std::size_t r, std::size_t c) {
        return transposed ? p.at(c, r) : p.at(r, c);
    };
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // 1-based arrays; column 0 is the virtual start of augmenting paths.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1, 0.0);
    std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
    std::vector<bool> used(m + 1, false);

    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            std::size_t i0 = match[j0], j1 = 0;
            double delta = kInf;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                // minimize negated weight
                double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= m; ++j)
        if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

MatchingResult greedy_matching(const MatchingProblem& p) {
    struct Cell {
        double w;
        std::size_t r, c;
    };
    std::vector<Cell> cells;
    cells.reserve(p.rows() * p.cols());
    for (std::size_t r = 0; r < p.rows(); ++r)
        for (std::size_t c = 0; c < p.cols(); ++c) cells.push_back({p.at(r, c), r, c});
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.w != b.w) return a.w > b.w;
        if (a.r != b.r) return a.r < b.r;
        return a.c < b.c;
    });

    const std::size_t target = std::min(p.rows(), p.cols());
    std::vector<bool> row_used(p.rows(), false), col_used(p.cols(), false);
    MatchingResult result;
    result.exact = false;
    double sum = 0.0;
    for (const Cell& cell : cells) {
        if (result.pairs.size() == target) break;
        if (row_used[cell.r] || col_used[cell.c]) continue;
        row_used[cell.r] = true;
        col_used[cell.c] = true;
        result.pairs.emplace_back(cell.r, cell.c);
        sum += cell.w;
    }
    result.value = sum / static_cast<double>(p.rows() + p.cols() - target);
    return result;
}

}  // namespace

MatchingResult max_matching_value(const MatchingProblem& problem, std::size_t exact_limit) {
    MatchingResult result;
    const std::size_t min_side = std::min(problem.rows(), problem.cols());
    if (min_side == 0) return result;  // value 0, no pairs

    if (min_side > exact_limit) return greedy_matching(problem);

    const bool transposed = problem.rows() > problem.cols();
    std::vector<std::size_t> row_to_col = assign_rows(problem, transposed);
    double sum = 0.0;
    for (std::size_t i = 0; i < row_to_col.size(); ++i) {
        std::size_t r = transposed ? row_to_col[i] : i;
        std::size_t c = transposed ? i : row_to_col[i];
        result.pairs.emplace_back(r, c);
        sum += problem.at(r, c);
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    result.value = sum / static_cast<double>(problem.rows() + problem.cols() - min_side);
    return result;
}

}  // namespace semsearch
