// Hamming-ball covering numbers over name tables: lazy greedy max-coverage
// and an exact branch-and-bound, plus window profiles, the pullback
// invariance check, and the block-family (mean equicontinuity) diagnostic.
//
// Candidate centers are exactly the realized name vectors: the ball around
// any point equals the ball around its cell's name, because the distance to
// a point depends only on the cell containing it. The reduction is exact,
// not a heuristic.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/dynamics.hpp"
#include "pcx/name_table.hpp"

namespace pcx {

enum class CoverSolver { Greedy, Exact };

struct CoverEntry {
    std::size_t window_size = 0;  // |E| behind this entry
    std::size_t cover_size = 0;
    std::string solver;
    Rat covered_mass;
    std::vector<std::size_t> centers;  // cell indices
};

namespace detail {

// Largest diff count k with k/n < eps (exact rational comparison).
inline int hamming_radius_count(const Rat& eps, std::size_t n) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("covering: eps must be in (0,1)");
    Rat bound = eps * Rat(static_cast<long>(n));
    mpz_class fl = bound.get_num() / bound.get_den();
    if (Rat(fl) == bound) fl -= 1;  // strict inequality
    return static_cast<int>(fl.get_si());
}

// Members of every candidate's ball, computed either by enumerating all
// names within the radius (small radius, hash lookup) or by pairwise scans.
inline std::vector<std::vector<std::uint32_t>> ball_members(const NameTable& table, int k_max) {
    const std::size_t n = table.cell_count;
    const std::size_t width = table.num_partitions;
    std::vector<std::vector<std::uint32_t>> balls(n);

    // estimated neighbor-enumeration cost
    double enum_cost = 1;
    {
        double choose = 1;
        int max_r = 1;
        for (int ac : table.atom_counts) max_r = std::max(max_r, ac);
        for (int j = 1; j <= k_max; ++j) {
            choose *= static_cast<double>(width - static_cast<std::size_t>(j) + 1) /
                      static_cast<double>(j);
            double term = choose;
            for (int t = 0; t < j; ++t) term *= static_cast<double>(max_r - 1);
            enum_cost += term;
        }
    }

    if (enum_cost <= 4096.0) {
        std::unordered_map<std::string, std::uint32_t> index;
        index.reserve(n * 2);
        for (std::size_t c = 0; c < n; ++c)
            index.emplace(std::string(reinterpret_cast<const char*>(table.name(c)), width),
                          static_cast<std::uint32_t>(c));
        std::string probe(width, '\0');
        // DFS over coordinate subsets flipped to alternative atom values
        for (std::size_t c = 0; c < n; ++c) {
            probe.assign(reinterpret_cast<const char*>(table.name(c)), width);
            std::vector<std::uint32_t> found;
            auto visit = [&](auto&& self, std::size_t start, int budget) -> void {
                auto it = index.find(probe);
                if (it != index.end()) found.push_back(it->second);
                if (budget == 0) return;
                for (std::size_t pos = start; pos < width; ++pos) {
                    char orig = probe[pos];
                    for (int v = 0; v < table.atom_counts[pos]; ++v) {
                        if (static_cast<char>(v) == orig) continue;
                        probe[pos] = static_cast<char>(v);
                        self(self, pos + 1, budget - 1);
                    }
                    probe[pos] = orig;
                }
            };
            visit(visit, 0, k_max);
            std::sort(found.begin(), found.end());
            balls[c] = std::move(found);
        }
        return balls;
    }

    if (n > 8192) throw capacity_error("covering: too many cells for pairwise ball scan");
    // pairwise scan with 8-byte word compares
    const std::size_t words = (width + 7) / 8;
    std::vector<std::uint64_t> packed(n * words, 0);
    for (std::size_t c = 0; c < n; ++c)
        std::copy(table.name(c), table.name(c) + width,
                  reinterpret_cast<std::uint8_t*>(packed.data() + c * words));
    auto diff_count = [&](std::size_t a, std::size_t b) {
        int diff = 0;
        const std::uint64_t* pa = packed.data() + a * words;
        const std::uint64_t* pb = packed.data() + b * words;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t x = pa[w] ^ pb[w];
            while (x) {
                ++diff;
                x &= ~(std::uint64_t{0xff} << (static_cast<unsigned>(__builtin_ctzll(x)) & ~7u));
            }
        }
        return diff;
    };
    for (std::size_t a = 0; a < n; ++a) {
        balls[a].push_back(static_cast<std::uint32_t>(a));
        for (std::size_t b = a + 1; b < n; ++b) {
            if (diff_count(a, b) <= k_max) {
                balls[a].push_back(static_cast<std::uint32_t>(b));
                balls[b].push_back(static_cast<std::uint32_t>(a));
            }
        }
    }
    for (auto& v : balls) std::sort(v.begin(), v.end());
    return balls;
}

// Lazy max-coverage greedy: repeatedly take the ball with the largest
// uncovered mass (ties: smallest cell index = lexicographically smallest
// name) until the covered mass strictly exceeds the threshold.
inline CoverEntry greedy_cover(const NameTable& table,
                               const std::vector<std::vector<std::uint32_t>>& balls,
                               const Rat& threshold) {
    const std::size_t n = table.cell_count;
    CoverEntry entry;
    entry.solver = "greedy";
    entry.covered_mass = Rat(0);
    if (table.total_weight <= threshold)
        throw std::invalid_argument("covering: total mass cannot exceed the threshold");

    struct Item {
        Rat gain;
        std::size_t idx;
    };
    auto cmp = [](const Item& a, const Item& b) {
        if (a.gain != b.gain) return a.gain < b.gain;  // max-heap on gain
        return a.idx > b.idx;                          // then min index
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
    for (std::size_t c = 0; c < n; ++c) {
        Rat g(0);
        for (std::uint32_t m : balls[c]) g += table.weights[m];
        heap.push({std::move(g), c});
    }
    std::vector<bool> covered(n, false);
    while (entry.covered_mass <= threshold) {
        Item top = heap.top();
        heap.pop();
        Rat fresh(0);
        for (std::uint32_t m : balls[top.idx])
            if (!covered[m]) fresh += table.weights[m];
        if (!heap.empty() && (fresh < heap.top().gain ||
                              (fresh == heap.top().gain && heap.top().idx < top.idx))) {
            heap.push({std::move(fresh), top.idx});
            continue;
        }
        for (std::uint32_t m : balls[top.idx]) covered[m] = true;
        entry.covered_mass += fresh;
        entry.centers.push_back(top.idx);
    }
    entry.cover_size = entry.centers.size();
    return entry;
}

// Exact minimum cover by branch and bound over candidates sorted by ball
// mass. The bound takes the static ball masses as optimistic marginal gains.
inline CoverEntry exact_cover(const NameTable& table,
                              const std::vector<std::vector<std::uint32_t>>& balls,
                              const Rat& threshold) {
    const std::size_t n = table.cell_count;
    CoverEntry incumbent = greedy_cover(table, balls, threshold);
    incumbent.solver = "exact";

    std::vector<std::size_t> order(n);
    std::vector<Rat> ball_mass(n, Rat(0));
    for (std::size_t c = 0; c < n; ++c)
        for (std::uint32_t m : balls[c]) ball_mass[c] += table.weights[m];
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ball_mass[a] != ball_mass[b]) return ball_mass[b] < ball_mass[a];
        return a < b;
    });

    std::vector<bool> covered(n, false);
    std::vector<std::size_t> chosen;
    std::size_t best = incumbent.cover_size;
    std::vector<std::size_t> best_centers = incumbent.centers;
    Rat best_mass = incumbent.covered_mass;
    long long nodes = 0;
    const long long node_cap = 20'000'000;

    auto dfs = [&](auto&& self, std::size_t pos, Rat covered_mass) -> void {
        if (++nodes > node_cap) throw capacity_error("exact covering: branch-and-bound budget");
        if (covered_mass > threshold) {
            if (chosen.size() < best) {
                best = chosen.size();
                best_centers = chosen;
                best_mass = covered_mass;
            }
            return;
        }
        if (pos == n) return;
        // optimistic count of additional balls needed
        Rat need = threshold - covered_mass;
        std::size_t extra = 0;
        Rat acc(0);
        for (std::size_t i = pos; i < n && acc <= need; ++i) {
            acc += ball_mass[order[i]];
            ++extra;
        }
        if (acc <= need) return;  // cannot reach the threshold
        if (chosen.size() + extra >= best) return;

        const std::size_t cand = order[pos];
        // include
        std::vector<std::uint32_t> newly;
        Rat gain(0);
        for (std::uint32_t m : balls[cand])
            if (!covered[m]) {
                covered[m] = true;
                newly.push_back(m);
                gain += table.weights[m];
            }
        if (gain > 0) {
            chosen.push_back(cand);
            self(self, pos + 1, covered_mass + gain);
            chosen.pop_back();
        }
        for (std::uint32_t m : newly) covered[m] = false;
        // exclude
        self(self, pos + 1, covered_mass);
    };
    dfs(dfs, 0, Rat(0));

    CoverEntry entry;
    entry.solver = "exact";
    entry.cover_size = best;
    entry.centers = std::move(best_centers);
    std::sort(entry.centers.begin(), entry.centers.end());
    entry.covered_mass = std::move(best_mass);
    return entry;
}

}  // namespace detail

// C(E, eps) for the table of E: fewest Hamming-eps balls (centers at
// realized names) whose union has mass strictly greater than 1 - eps.
inline CoverEntry covering_number(const NameTable& table, const Rat& eps, CoverSolver solver) {
    const int k_max = detail::hamming_radius_count(eps, table.num_partitions);
    auto balls = detail::ball_members(table, k_max);
    const Rat threshold = Rat(1) - eps;
    CoverEntry entry;
    if (solver == CoverSolver::Greedy) {
        entry = detail::greedy_cover(table, balls, threshold);
    } else {
        if (table.cell_count > 4096)
            throw capacity_error("exact covering: too many candidate cells");
        entry = detail::exact_cover(table, balls, threshold);
    }
    entry.window_size = table.num_partitions;
    return entry;
}

enum class ProfileVerdict { BoundedPlateau, Growing, Inconclusive };

inline const char* verdict_name(ProfileVerdict v) {
    switch (v) {
        case ProfileVerdict::BoundedPlateau: return "bounded_plateau";
        case ProfileVerdict::Growing: return "growing";
        case ProfileVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

// Plateau: at least three entries and the last three equal. Growing: the
// last entry at least doubles the first. These thresholds are artifact
// conventions echoed into the profile metadata.
inline ProfileVerdict profile_verdict(const std::vector<CoverEntry>& entries) {
    if (entries.size() >= 3) {
        const std::size_t n = entries.size();
        if (entries[n - 1].cover_size == entries[n - 2].cover_size &&
            entries[n - 2].cover_size == entries[n - 3].cover_size)
            return ProfileVerdict::BoundedPlateau;
    }
    if (entries.size() >= 2 &&
        entries.back().cover_size >= 2 * entries.front().cover_size)
        return ProfileVerdict::Growing;
    return ProfileVerdict::Inconclusive;
}

enum class TableMode { Cells, Samples };

struct ComplexityProfile {
    Rat epsilon;
    std::vector<CoverEntry> entries;
    ProfileVerdict verdict = ProfileVerdict::Inconclusive;
};

// n -> C({g^-1 alpha : g in F_n}, eps) over the supplied windows.
inline ComplexityProfile complexity_profile(const Partition& alpha, const SystemAction& sys,
                                            const std::vector<std::vector<GroupElement>>& windows,
                                            const Rat& eps, CoverSolver solver = CoverSolver::Greedy,
                                            TableMode mode = TableMode::Cells,
                                            std::size_t sample_count = 0,
                                            std::uint64_t seed = 0) {
    if (windows.empty()) throw std::invalid_argument("complexity_profile: no windows");
    ComplexityProfile profile;
    profile.epsilon = eps;
    for (const auto& window : windows) {
        auto orbit = orbit_partitions(alpha, sys, window);
        NameTable table = mode == TableMode::Cells
                              ? build_name_table_cells(orbit)
                              : build_name_table_samples(orbit, sample_count, seed);
        CoverEntry entry = covering_number(table, eps, solver);
        entry.window_size = window.size();
        profile.entries.push_back(std::move(entry));
    }
    profile.verdict = profile_verdict(profile.entries);
    return profile;
}

// Exact covering numbers are invariant under a measure-preserving pullback
// of the whole family.
inline bool invariance_check(const std::vector<Partition>& family, const GroupElement& g,
                             const SystemAction& sys, const Rat& eps) {
    std::vector<Partition> pulled;
    pulled.reserve(family.size());
    for (const auto& p : family) pulled.push_back(pullback_partition(g, sys, p));
    auto lhs = covering_number(build_name_table_cells(family), eps, CoverSolver::Exact);
    auto rhs = covering_number(build_name_table_cells(pulled), eps, CoverSolver::Exact);
    return lhs.cover_size == rhs.cover_size;
}

}  // namespace pcx
