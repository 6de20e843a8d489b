// Exact min-cost assignment (Jonker-Volgenant style shortest augmenting
// paths) over rational costs. Exact comparisons make the optimum and its
// value reproducible; no epsilon games.
#pragma once

#include <cassert>
#include <vector>

#include "pcx/common.hpp"

namespace pcx {

struct AssignmentResult {
    std::vector<int> row_to_col;
    Rat total_cost;
};

inline AssignmentResult min_cost_assignment(const std::vector<std::vector<Rat>>& cost) {
    const int n = static_cast<int>(cost.size());
    assert(n > 0);
    for (const auto& row : cost) assert(static_cast<int>(row.size()) == n);

    // Finite bound larger than any achievable path cost.
    Rat big(1);
    for (const auto& row : cost)
        for (const auto& c : row) big += (c >= 0 ? c : -c);

    std::vector<Rat> u(static_cast<std::size_t>(n) + 1, Rat(0));
    std::vector<Rat> v(static_cast<std::size_t>(n) + 1, Rat(0));
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // col -> row (1-based)
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<Rat> minv(static_cast<std::size_t>(n) + 1, big);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = 0;
            Rat delta = big;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                Rat cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                          u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    AssignmentResult res;
    res.row_to_col.assign(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (match[static_cast<std::size_t>(j)] != 0)
            res.row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
    res.total_cost = Rat(0);
    for (int i = 0; i < n; ++i)
        res.total_cost += cost[static_cast<std::size_t>(i)]
                              [static_cast<std::size_t>(res.row_to_col[static_cast<std::size_t>(i)])];
    return res;
}

}  // namespace pcx
