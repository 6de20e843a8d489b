// Finite measurable partitions: entropy, conditional entropy, joins,
// refinement, the Rokhlin metric, the matching (symmetric-difference)
// metric, the constructive small-conditional-entropy refinement, and a
// greedy epsilon-net over finite partition families.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pcx/assignment.hpp"
#include "pcx/common.hpp"
#include "pcx/measure_space.hpp"

namespace pcx {

struct Partition {
    SpacePtr space;
    std::vector<MeasurableSet> atoms;

    std::size_t size() const { return atoms.size(); }
};

inline void validate_partition(const Partition& p) {
    if (!p.space) throw std::invalid_argument("partition without a space");
    if (p.atoms.empty()) throw std::invalid_argument("partition needs at least one atom");
    Rat total(0);
    for (const auto& a : p.atoms) total += measure(*p.space, a);
    Rat err = total - 1;
    if (err < 0) err = -err;
    if (err > rat_from_double(kWeightSumTol))
        throw std::invalid_argument("partition atoms do not have total measure 1");
    for (std::size_t i = 0; i < p.atoms.size(); ++i)
        for (std::size_t j = i + 1; j < p.atoms.size(); ++j)
            if (measure(*p.space, set_intersection(p.atoms[i], p.atoms[j])) != 0)
                throw std::invalid_argument("partition atoms overlap");
}

inline Partition make_partition(SpacePtr space, std::vector<MeasurableSet> atoms,
                                bool validate = true) {
    Partition p{std::move(space), std::move(atoms)};
    if (validate) validate_partition(p);
    return p;
}

inline Partition trivial_partition(SpacePtr space) {
    std::vector<MeasurableSet> atoms{MeasurableSet::full_like(*space)};
    return Partition{std::move(space), std::move(atoms)};
}

// Two-atom partition {A, X \ A}.
inline Partition indicator_partition(SpacePtr space, const MeasurableSet& a) {
    std::vector<MeasurableSet> atoms{a, set_complement(*space, a)};
    return Partition{std::move(space), std::move(atoms)};
}

// Partition of [0,1) from sorted interior cut points.
inline Partition interval_partition(SpacePtr space, const std::vector<Rat>& cuts) {
    std::vector<Rat> c(cuts);
    std::sort(c.begin(), c.end());
    std::vector<MeasurableSet> atoms;
    Rat lo(0);
    for (const Rat& cut : c) {
        if (cut <= lo || cut >= 1) throw std::invalid_argument("cuts must be strictly inside (0,1)");
        atoms.push_back(MeasurableSet::from_interval(lo, cut));
        lo = cut;
    }
    atoms.push_back(MeasurableSet::from_interval(lo, Rat(1)));
    return Partition{std::move(space), std::move(atoms)};
}

// Partition of a point space from per-point labels in {0..r-1}.
inline Partition label_partition(SpacePtr space, const std::vector<int>& labels, int r) {
    if (labels.size() != space->point_count())
        throw std::invalid_argument("label vector length mismatch");
    std::vector<MeasurableSet> atoms;
    for (int a = 0; a < r; ++a) {
        std::vector<bool> mask(labels.size(), false);
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == a) mask[i] = true;
        atoms.push_back(MeasurableSet::from_mask(std::move(mask)));
    }
    return Partition{std::move(space), std::move(atoms)};
}

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// H(alpha) in nats, with the 0 log 0 = 0 convention.
inline double entropy(const Partition& alpha) {
    double h = 0.0;
    for (const auto& a : alpha.atoms) h -= xlogx(to_double(measure(*alpha.space, a)));
    return h;
}

// H(alpha | beta) = sum_B mu(B) H(alpha | B), with mu(.|B) = 0 when mu(B)=0.
inline double conditional_entropy(const Partition& alpha, const Partition& beta) {
    if (alpha.space.get() != beta.space.get())
        throw std::invalid_argument("conditional_entropy: partitions on different spaces");
    double h = 0.0;
    for (const auto& b : beta.atoms) {
        Rat mb = measure(*beta.space, b);
        if (mb == 0) continue;
        double hb = 0.0;
        for (const auto& a : alpha.atoms) {
            Rat mab = measure(*alpha.space, set_intersection(a, b));
            if (mab == 0) continue;
            hb -= xlogx(to_double(Rat(mab / mb)));
        }
        h += to_double(mb) * hb;
    }
    return h;
}

// Common refinement with atoms A_i n B_j (measure-zero cells dropped),
// ordered lexicographically in (i, j).
inline Partition join(const Partition& alpha, const Partition& beta) {
    if (alpha.space.get() != beta.space.get())
        throw std::invalid_argument("join: partitions on different spaces");
    std::vector<MeasurableSet> atoms;
    const bool interval = alpha.space->backend() == Backend::IntervalAlgebra;
    for (const auto& a : alpha.atoms) {
        for (const auto& b : beta.atoms) {
            MeasurableSet cell = set_intersection(a, b);
            // nonempty canonical interval sets always have positive measure
            if (interval ? !cell.is_empty() : measure(*alpha.space, cell) != 0)
                atoms.push_back(std::move(cell));
            if (atoms.size() > kMaxCells) throw capacity_error("join exceeds cell cap");
        }
    }
    if (atoms.empty()) atoms.push_back(MeasurableSet::empty_like(*alpha.space));
    return Partition{alpha.space, std::move(atoms)};
}

inline Partition join_all(const std::vector<Partition>& parts) {
    if (parts.empty()) throw std::invalid_argument("join_all: empty list");
    Partition acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = join(acc, parts[i]);
    return acc;
}

// alpha finer-or-equal beta, decided numerically by H(beta|alpha) <= tol.
inline bool is_finer(const Partition& alpha, const Partition& beta) {
    return conditional_entropy(beta, alpha) <= kRefineTol;
}

struct MetricReport {
    double rho = std::numeric_limits<double>::quiet_NaN();
    double rho_tilde = std::numeric_limits<double>::quiet_NaN();
    Rat rho_tilde_exact;
    std::vector<int> witness_permutation;  // atom i of alpha matched to this atom of beta
};

inline MetricReport rokhlin_distance(const Partition& alpha, const Partition& beta) {
    MetricReport r;
    r.rho = conditional_entropy(alpha, beta) + conditional_entropy(beta, alpha);
    return r;
}

// min over permutations of sum_i mu(A_i delta B_sigma(i)), both partitions
// padded with empty atoms to a common size. Exact assignment optimum.
inline MetricReport matching_distance(const Partition& alpha, const Partition& beta) {
    if (alpha.space.get() != beta.space.get())
        throw std::invalid_argument("matching_distance: partitions on different spaces");
    const std::size_t r = std::max(alpha.size(), beta.size());
    if (r > static_cast<std::size_t>(kMaxMatchingAtoms))
        throw capacity_error("matching_distance: too many atoms for the assignment solver");
    const MeasurableSet empty = MeasurableSet::empty_like(*alpha.space);
    auto atom_of = [&](const Partition& p, std::size_t i) -> const MeasurableSet& {
        return i < p.size() ? p.atoms[i] : empty;
    };
    std::vector<std::vector<Rat>> cost(r, std::vector<Rat>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            cost[i][j] =
                measure(*alpha.space, symmetric_difference(atom_of(alpha, i), atom_of(beta, j)));
    AssignmentResult best = min_cost_assignment(cost);
    MetricReport rep;
    rep.rho_tilde_exact = best.total_cost;
    rep.rho_tilde = to_double(best.total_cost);
    rep.witness_permutation = std::move(best.row_to_col);
    return rep;
}

inline bool equivalent_mod0(const Partition& alpha, const Partition& beta) {
    return matching_distance(alpha, beta).rho_tilde_exact == 0;
}

// Constants for the constructive refinement; all pinned so the precondition
// H(alpha|beta) < delta is checkable.
struct RefineConstants {
    double a;
    double b;
    long c;
    double delta;
};

namespace detail {
// Root of -x log x = y on the increasing branch (0, 1/e].
inline double solve_xlogx_low(double y) {
    double lo = 1e-18, hi = 1.0 / std::exp(1.0);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (-xlogx(mid) < y ? lo : hi) = mid;
    }
    return lo;
}
// Root on the decreasing branch [start, 1).
inline double solve_xlogx_high(double y, double start) {
    double lo = start, hi = 1.0 - 1e-18;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (-xlogx(mid) > y ? lo : hi) = mid;
    }
    return hi;
}
}  // namespace detail

inline RefineConstants refine_constants(std::size_t r, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("refine: eps in (0,1)");
    const double rd = static_cast<double>(r);
    const double a0 = detail::solve_xlogx_low(std::log(2.0) / 2.0);
    double a = std::min(std::min(1.0 / (2.0 * rd), eps / (4.0 * rd * rd)),
                        std::min(1.0 / std::exp(1.0), a0));
    double b = detail::solve_xlogx_high(-xlogx(a), std::max(1.0 / std::exp(1.0), 0.5));
    long c = static_cast<long>(std::ceil(2.0 * (rd + 1.0) / eps)) + 1;
    double delta = -xlogx(a) / (2.0 * static_cast<double>(c));
    return RefineConstants{a, b, c, delta};
}

// Given H(alpha|beta) < delta(eps, r), coarsen beta into beta' with at most
// r+1 atoms such that beta' <= beta and the matching distance between
// alpha (padded by one empty atom) and beta' is below eps. Groups the
// beta-atoms whose conditional mass concentrates on a single alpha-atom;
// the leftover low-information atoms form the final cell.
inline Partition refine_from_conditional(const Partition& alpha, const Partition& beta,
                                         double eps) {
    if (alpha.space.get() != beta.space.get())
        throw std::invalid_argument("refine_from_conditional: different spaces");
    const std::size_t r = alpha.size();
    const RefineConstants k = refine_constants(r, eps);
    const double h_ab = conditional_entropy(alpha, beta);
    if (!(h_ab < k.delta))
        throw std::invalid_argument("refine_from_conditional: H(alpha|beta) >= delta threshold");

    const double cdelta = static_cast<double>(k.c) * k.delta;
    std::vector<MeasurableSet> groups(r + 1, MeasurableSet::empty_like(*alpha.space));
    for (const auto& b : beta.atoms) {
        Rat mb = measure(*beta.space, b);
        if (mb == 0) continue;
        // H(alpha | this atom)
        double hb = 0.0;
        std::vector<double> frac(r, 0.0);
        for (std::size_t i = 0; i < r; ++i) {
            Rat mab = measure(*alpha.space, set_intersection(alpha.atoms[i], b));
            frac[i] = to_double(Rat(mab / mb));
            hb -= xlogx(frac[i]);
        }
        std::size_t target = r;  // leftover cell by default
        if (hb < cdelta) {
            int hits = 0;
            for (std::size_t i = 0; i < r; ++i) {
                if (frac[i] > k.b) {
                    target = i;
                    ++hits;
                }
            }
            if (hits != 1)
                throw postcondition_error(
                    "refine_from_conditional: dominance dichotomy failed on a low-entropy atom");
        }
        groups[target] = set_union(groups[target], b);
    }

    Partition refined{alpha.space, std::move(groups)};

    // Contract checks: coarsening of beta, size r+1, close to padded alpha.
    if (!is_finer(beta, refined))
        throw postcondition_error("refine_from_conditional: output does not coarsen input");
    Partition padded{alpha.space, alpha.atoms};
    padded.atoms.push_back(MeasurableSet::empty_like(*alpha.space));
    MetricReport rep = matching_distance(padded, refined);
    if (!(rep.rho_tilde < eps))
        throw postcondition_error("refine_from_conditional: matching distance not below eps");
    return refined;
}

enum class PartitionMetric { Rho, RhoTilde };

inline double partition_distance(const Partition& a, const Partition& b, PartitionMetric m) {
    return m == PartitionMetric::Rho ? rokhlin_distance(a, b).rho : matching_distance(a, b).rho_tilde;
}

// Greedy epsilon-net over a finite family: walk the family in order, adding
// any member not within eps of the net so far. Every member ends up within
// eps of some net element.
inline std::size_t epsilon_net_size(const std::vector<Partition>& family, double eps,
                                    PartitionMetric metric) {
    if (family.empty()) throw std::invalid_argument("epsilon_net_size: empty family");
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon_net_size: eps > 0");
    std::vector<std::size_t> net;
    for (std::size_t i = 0; i < family.size(); ++i) {
        bool covered = false;
        for (std::size_t c : net) {
            if (partition_distance(family[i], family[c], metric) < eps) {
                covered = true;
                break;
            }
        }
        if (!covered) net.push_back(i);
    }
    return net.size();
}

}  // namespace pcx
