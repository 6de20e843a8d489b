// Sequence entropy along partition lists, the maximal joint-entropy pattern
// quantity over finite families, its Fekete rate certificate, and the
// union-subadditivity inequality check at the finite-window level.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/dynamics.hpp"
#include "pcx/partition.hpp"

namespace pcx {

// (n, H(join of the first n)/n) for n = 1..min(n_max, |list|). The profile
// is a finite trend; nothing asymptotic is certified.
inline std::vector<std::pair<std::size_t, double>> sequence_entropy_estimate(
    const std::vector<Partition>& list, std::size_t n_max) {
    if (list.empty()) throw std::invalid_argument("sequence_entropy_estimate: empty list");
    std::vector<std::pair<std::size_t, double>> out;
    Partition acc = list.front();
    out.emplace_back(1, entropy(acc));
    for (std::size_t n = 2; n <= std::min(n_max, list.size()); ++n) {
        acc = join(acc, list[n - 1]);
        out.emplace_back(n, entropy(acc) / static_cast<double>(n));
    }
    return out;
}

enum class PatternStrategy { Exhaustive, Greedy, Beam };
enum class BoundKind { Exact, LowerBound };

struct PatternEntry {
    std::size_t n = 0;
    double p_star = 0.0;
    PatternStrategy strategy = PatternStrategy::Exhaustive;
    BoundKind bound_kind = BoundKind::Exact;
};

struct PatternEntropyEstimate {
    std::vector<PatternEntry> entries;
    double rate = 0.0;  // last p_star / n
    std::string verdict;  // zero_trend | positive_trend
    double zero_threshold = 0.0;
};

inline constexpr std::size_t kPatternExhaustiveFamilyCap = 12;
inline constexpr std::size_t kPatternExhaustiveLengthCap = 6;

namespace detail {

// Exhaustive max of H(join of a selection of length n from K), selections
// with repetition. A repeated partition never refines the join further and
// the join entropy is monotone under adding partitions, so the maximum is
// attained on a subset of size min(n, |K|); enumerate those by DFS with
// shared join prefixes.
inline double max_pattern_exhaustive(const std::vector<Partition>& family, std::size_t n) {
    const std::size_t take = std::min(n, family.size());
    double best = 0.0;
    auto dfs = [&](auto&& self, std::size_t start, std::size_t picked,
                   const Partition& acc) -> void {
        if (picked == take) {
            best = std::max(best, entropy(acc));
            return;
        }
        for (std::size_t i = start; i + (take - picked) <= family.size(); ++i)
            self(self, i + 1, picked + 1, join(acc, family[i]));
    };
    Partition empty = trivial_partition(family.front().space);
    dfs(dfs, 0, 0, empty);
    return best;
}

inline double max_pattern_greedy(const std::vector<Partition>& family, std::size_t n) {
    Partition acc = trivial_partition(family.front().space);
    double best = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
        double step_best = -1.0;
        std::size_t pick = 0;
        for (std::size_t i = 0; i < family.size(); ++i) {
            double h = entropy(join(acc, family[i]));
            if (h > step_best) {
                step_best = h;
                pick = i;
            }
        }
        acc = join(acc, family[pick]);
        best = step_best;
    }
    return best;
}

inline double max_pattern_beam(const std::vector<Partition>& family, std::size_t n,
                               std::size_t width) {
    struct Cand {
        Partition part;
        double h;
    };
    std::vector<Cand> beam{{trivial_partition(family.front().space), 0.0}};
    for (std::size_t step = 0; step < n; ++step) {
        std::vector<Cand> next;
        for (const auto& c : beam) {
            for (const auto& p : family) {
                Partition j = join(c.part, p);
                double h = entropy(j);
                next.push_back({std::move(j), h});
            }
        }
        std::stable_sort(next.begin(), next.end(),
                         [](const Cand& a, const Cand& b) { return a.h > b.h; });
        if (next.size() > width) next.resize(width);
        beam = std::move(next);
    }
    return beam.front().h;
}

}  // namespace detail

// P*(n) over the family: exact for the exhaustive strategy (budget-guarded),
// a lower bound otherwise.
inline PatternEntry max_pattern_profile(const std::vector<Partition>& family, std::size_t n,
                                        PatternStrategy strategy, std::size_t beam_width = 4) {
    if (family.empty()) throw std::invalid_argument("max_pattern_profile: empty family");
    if (n == 0) throw std::invalid_argument("max_pattern_profile: n >= 1");
    PatternEntry entry;
    entry.n = n;
    entry.strategy = strategy;
    switch (strategy) {
        case PatternStrategy::Exhaustive:
            if (family.size() > kPatternExhaustiveFamilyCap || n > kPatternExhaustiveLengthCap)
                throw capacity_error("max_pattern_profile: exhaustive budget exceeded");
            entry.p_star = detail::max_pattern_exhaustive(family, n);
            entry.bound_kind = BoundKind::Exact;
            break;
        case PatternStrategy::Greedy:
            entry.p_star = detail::max_pattern_greedy(family, n);
            entry.bound_kind = BoundKind::LowerBound;
            break;
        case PatternStrategy::Beam:
            entry.p_star = detail::max_pattern_beam(family, n, beam_width);
            entry.bound_kind = BoundKind::LowerBound;
            break;
    }
    return entry;
}

// zero_trend threshold: P*(n_max)/n_max below 0.15 * log r, an artifact
// convention echoed in the output.
inline PatternEntropyEstimate max_pattern_entropy_estimate(
    const Partition& alpha, const SystemAction& sys, const std::vector<GroupElement>& window,
    const std::vector<std::size_t>& n_values, PatternStrategy strategy,
    std::size_t beam_width = 4) {
    auto orbit = orbit_partitions(alpha, sys, window);
    PatternEntropyEstimate est;
    for (std::size_t n : n_values)
        est.entries.push_back(max_pattern_profile(orbit, n, strategy, beam_width));
    const PatternEntry& last = est.entries.back();
    est.rate = last.p_star / static_cast<double>(last.n);
    est.zero_threshold = 0.15 * std::log(static_cast<double>(alpha.size()));
    est.verdict = est.rate < est.zero_threshold ? "zero_trend" : "positive_trend";
    return est;
}

struct FeketeRate {
    double rate = 0.0;
    std::size_t attained_n = 0;
};

// For exact subadditive values, lim P*(n)/n = inf P*(n)/n, so the smallest
// computed ratio is a certified upper bound. Refuses lower-bound data: an
// infimum of lower bounds certifies nothing.
inline FeketeRate fekete_rate(const std::vector<PatternEntry>& entries) {
    if (entries.empty()) throw std::invalid_argument("fekete_rate: empty profile");
    FeketeRate out;
    out.rate = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) {
        if (e.bound_kind != BoundKind::Exact)
            throw std::invalid_argument("fekete_rate: requires exact entries");
        double ratio = e.p_star / static_cast<double>(e.n);
        if (ratio < out.rate) {
            out.rate = ratio;
            out.attained_n = e.n;
        }
    }
    return out;
}

// H(join g^{-1}{AuB,(AuB)^c}) <= H(join g^{-1}{A,A^c}) + H(join g^{-1}{B,B^c})
// over each supplied finite window, within tolerance.
inline bool union_subadditivity_check(const MeasurableSet& a, const MeasurableSet& b,
                                      const SystemAction& sys,
                                      const std::vector<std::vector<GroupElement>>& windows) {
    SpacePtr space = sys.space();
    Partition pu = indicator_partition(space, set_union(a, b));
    Partition pa = indicator_partition(space, a);
    Partition pb = indicator_partition(space, b);
    for (const auto& window : windows) {
        double hu = entropy(join_all(orbit_partitions(pu, sys, window)));
        double ha = entropy(join_all(orbit_partitions(pa, sys, window)));
        double hb = entropy(join_all(orbit_partitions(pb, sys, window)));
        if (!(hu <= ha + hb + kChainRuleTol)) return false;
    }
    return true;
}

}  // namespace pcx
