// Independent brute-force oracles and random-instance generators used by the
// unit and acceptance suites. Everything here recomputes from definitions;
// none of it calls the solvers it is used to check.
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/measure_space.hpp"
#include "pcx/partition.hpp"

namespace pcx::oracle {

// Minimum of sum_i mu(A_i delta B_sigma(i)) over all permutations, both
// partitions padded to the larger size. Factorial enumeration; r <= 8.
inline Rat matching_distance_brute(const Partition& alpha, const Partition& beta) {
    const std::size_t r = std::max(alpha.size(), beta.size());
    const MeasurableSet empty = MeasurableSet::empty_like(*alpha.space);
    auto atom_of = [&](const Partition& p, std::size_t i) -> const MeasurableSet& {
        return i < p.size() ? p.atoms[i] : empty;
    };
    std::vector<std::vector<Rat>> cost(r, std::vector<Rat>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            cost[i][j] =
                measure(*alpha.space, symmetric_difference(atom_of(alpha, i), atom_of(beta, j)));
    std::vector<std::size_t> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    Rat best(-1);
    do {
        Rat total(0);
        for (std::size_t i = 0; i < r; ++i) total += cost[i][perm[i]];
        if (best < 0 || total < best) best = total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Smallest subset of the family whose eps-balls (in the given metric) cover
// the whole family. Exhaustive over subsets; family size <= ~16.
inline std::size_t min_net_brute(const std::vector<Partition>& family, double eps,
                                 PartitionMetric metric) {
    const std::size_t n = family.size();
    std::vector<std::vector<bool>> close(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            close[i][j] = partition_distance(family[i], family[j], metric) < eps;
    std::size_t best = n;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::size_t size = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (size >= best) continue;
        bool covers = true;
        for (std::size_t i = 0; i < n && covers; ++i) {
            bool hit = false;
            for (std::size_t c = 0; c < n; ++c)
                if ((mask >> c) & 1 && close[i][c]) { hit = true; break; }
            covers = hit;
        }
        if (covers) best = size;
    }
    return best;
}

// Minimum number of ball-sets (given as member lists over weighted cells)
// whose union exceeds the mass threshold. Exhaustive subset enumeration;
// candidate count <= ~16.
inline std::size_t min_cover_brute(const std::vector<std::vector<std::size_t>>& balls,
                                   const std::vector<Rat>& weights, const Rat& threshold) {
    const std::size_t n = balls.size();
    std::size_t best = n + 1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::size_t size = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (size >= best) continue;
        std::vector<bool> covered(weights.size(), false);
        for (std::size_t c = 0; c < n; ++c)
            if ((mask >> c) & 1)
                for (std::size_t m : balls[c]) covered[m] = true;
        Rat total(0);
        for (std::size_t m = 0; m < weights.size(); ++m)
            if (covered[m]) total += weights[m];
        if (total > threshold) best = size;
    }
    return best;
}

// Random partition of a point space into exactly r labeled atoms (possibly
// empty ones).
inline Partition random_label_partition(SpacePtr space, int r, Rng& rng) {
    std::vector<int> labels(space->point_count());
    for (auto& l : labels) l = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(r)));
    return label_partition(std::move(space), labels, r);
}

// Random partition of [0,1) into r atoms, each a union of grid segments.
inline Partition random_interval_partition(SpacePtr space, int r, int segments, Rng& rng) {
    // random cut points on a 1/1024 grid
    std::vector<long> cuts;
    for (int i = 0; i < segments - 1; ++i) cuts.push_back(static_cast<long>(rng.next_below(1023)) + 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<MeasurableSet> atoms(static_cast<std::size_t>(r),
                                     MeasurableSet::empty_like(*space));
    long prev = 0;
    for (std::size_t s = 0; s <= cuts.size(); ++s) {
        long next = s < cuts.size() ? cuts[s] : 1024;
        auto seg = MeasurableSet::from_interval(rat(prev, 1024), rat(next, 1024));
        std::size_t label = rng.next_below(static_cast<std::uint64_t>(r));
        atoms[label] = set_union(atoms[label], seg);
        prev = next;
    }
    return make_partition(std::move(space), std::move(atoms));
}

}  // namespace pcx::oracle
