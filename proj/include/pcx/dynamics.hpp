// Exactly representable group actions on the two space backends, acting on
// sets through preimages. Interval maps are piecewise rational translations
// (rotation, odometer) or the doubling endomorphism; point maps are
// permutations. Products concatenate coordinates and group ranks.
#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/measure_space.hpp"
#include "pcx/partition.hpp"

namespace pcx {

// Element of Z^d (rank 1 for the cyclic kinds).
using GroupElement = std::vector<long long>;

inline GroupElement z_element(long long k) { return GroupElement{k}; }

enum class SystemKind { Rotation, Doubling, Odometer, FinitePermutation, TorusRotation, Product };

class SystemAction;
using SystemPtr = std::shared_ptr<const SystemAction>;

class SystemAction {
  public:
    static SystemPtr rotation(SpacePtr space, Rat angle) {
        require_interval(space, 1, "rotation");
        SystemAction s;
        s.kind_ = SystemKind::Rotation;
        s.space_ = std::move(space);
        s.angles_ = {reduce_mod1(std::move(angle))};
        return finish(std::move(s));
    }

    static SystemPtr doubling(SpacePtr space) {
        require_interval(space, 1, "doubling");
        SystemAction s;
        s.kind_ = SystemKind::Doubling;
        s.space_ = std::move(space);
        return finish(std::move(s));
    }

    static SystemPtr odometer(SpacePtr space, int base) {
        require_interval(space, 1, "odometer");
        if (base < 2) throw std::invalid_argument("odometer base >= 2");
        SystemAction s;
        s.kind_ = SystemKind::Odometer;
        s.space_ = std::move(space);
        s.base_ = base;
        return finish(std::move(s));
    }

    static SystemPtr finite_permutation(SpacePtr space, std::vector<long> perm) {
        if (space->backend() != Backend::WeightedPoints)
            throw std::invalid_argument("finite_permutation needs a point space");
        const std::size_t n = space->point_count();
        if (perm.size() != n) throw std::invalid_argument("permutation length mismatch");
        std::vector<bool> seen(n, false);
        for (long v : perm) {
            if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)])
                throw std::invalid_argument("not a permutation");
            seen[static_cast<std::size_t>(v)] = true;
        }
        SystemAction s;
        s.kind_ = SystemKind::FinitePermutation;
        s.space_ = std::move(space);
        s.perm_ = std::move(perm);
        return finish(std::move(s));
    }

    static SystemPtr torus_rotation(SpacePtr space, std::vector<Rat> angles) {
        if (angles.empty()) throw std::invalid_argument("torus_rotation: needs angles");
        require_interval(space, static_cast<int>(angles.size()), "torus_rotation");
        SystemAction s;
        s.kind_ = SystemKind::TorusRotation;
        s.space_ = std::move(space);
        for (Rat& a : angles) a = reduce_mod1(std::move(a));
        s.angles_ = std::move(angles);
        return finish(std::move(s));
    }

    // Product action on the product space. Only interval-backend factors are
    // supported; the product space is the box space of summed dimension and
    // the group is Z^(sum of ranks).
    static SystemPtr product(std::vector<SystemPtr> factors) {
        if (factors.empty()) throw std::invalid_argument("product: needs at least one factor");
        for (const auto& f : factors)
            if (f->space()->backend() != Backend::IntervalAlgebra)
                throw std::invalid_argument("product: only interval-backend factors are supported");
        int dim = 0;
        for (const auto& f : factors) dim += f->space()->dim();
        SystemAction s;
        s.kind_ = SystemKind::Product;
        s.space_ = MeasureSpace::interval(dim);
        s.factors_ = std::move(factors);
        return finish(std::move(s));
    }

    SystemKind kind() const { return kind_; }
    const SpacePtr& space() const { return space_; }
    int base() const { return base_; }
    const std::vector<Rat>& angles() const { return angles_; }
    const std::vector<long>& perm() const { return perm_; }
    const std::vector<SystemPtr>& factors() const { return factors_; }

    int group_rank() const {
        switch (kind_) {
            case SystemKind::TorusRotation: return static_cast<int>(angles_.size());
            case SystemKind::Product: {
                int r = 0;
                for (const auto& f : factors_) r += f->group_rank();
                return r;
            }
            default: return 1;
        }
    }

    bool invertible() const {
        if (kind_ == SystemKind::Doubling) return false;
        if (kind_ == SystemKind::Product)
            return std::all_of(factors_.begin(), factors_.end(),
                               [](const SystemPtr& f) { return f->invertible(); });
        return true;
    }

    static Rat reduce_mod1(Rat q) {
        Rat f = q - Rat(mpz_class(q.get_num() / q.get_den()));
        if (f < 0) f += 1;
        return f;
    }

  private:
    SystemAction() = default;
    static SystemPtr finish(SystemAction&& s) {
        return std::make_shared<const SystemAction>(std::move(s));
    }
    static void require_interval(const SpacePtr& space, int dim, const char* what) {
        if (space->backend() != Backend::IntervalAlgebra || space->dim() != dim)
            throw std::invalid_argument(std::string(what) + ": wrong space backend/dimension");
    }

    SystemKind kind_ = SystemKind::Rotation;
    SpacePtr space_;
    int base_ = 2;
    std::vector<Rat> angles_;
    std::vector<long> perm_;
    std::vector<SystemPtr> factors_;
};

namespace detail {

// Wrapped translate of a 1-D interval list by delta in [0,1).
inline BoxSet translate_wrap_1d(const BoxSet& a, const Rat& delta) {
    if (delta == 0 || a.empty()) return a;
    std::vector<Interval> stay, wrap;
    for (const Interval& iv : a.flat()) {
        Rat lo = iv.lo + delta;
        Rat hi = iv.hi + delta;
        if (hi <= 1) {
            stay.push_back({std::move(lo), std::move(hi)});
        } else if (lo >= 1) {
            wrap.push_back({lo - 1, hi - 1});
        } else {
            wrap.push_back({Rat(0), hi - 1});
            stay.push_back({std::move(lo), Rat(1)});
        }
    }
    // Wrapped pieces land below the others; concatenation stays sorted.
    std::vector<Interval> flat(std::move(wrap));
    flat.insert(flat.end(), stay.begin(), stay.end());
    return BoxSet::from_flat(1, std::move(flat), true);
}

// Preimage under the doubling map: [p,q) -> [p/2,q/2) u [p/2+1/2,q/2+1/2).
inline BoxSet doubling_preimage_1d(const BoxSet& a) {
    static const Rat kHalf(1, 2);
    std::vector<Interval> flat;
    flat.reserve(2 * a.flat().size());
    for (const Interval& iv : a.flat()) flat.push_back({iv.lo / 2, iv.hi / 2});
    for (const Interval& iv : a.flat())
        flat.push_back({iv.lo / 2 + kHalf, iv.hi / 2 + kHalf});
    return BoxSet::from_flat(1, std::move(flat), true);
}

// The base-b adding machine is a countable interval exchange: on
// D_k = [1 - b^{1-k}, 1 - b^{-k}) it translates by t_k = b^{-k} + b^{1-k} - 1,
// with image I_k = [b^{-k}, b^{1-k}). Domain pieces accumulate at 1 and image
// pieces at 0, but preimages of rational interval sets stay finite: once the
// pieces are entirely inside (or outside) the set they map whole-to-whole
// and their union telescopes to a single interval.
inline BoxSet odometer_preimage_1d(const BoxSet& a, int base) {
    if (a.empty()) return a;
    std::vector<Interval> acc;
    const Interval& first = a.flat().front();
    const bool tail = (first.lo == 0);
    const Rat m = tail ? first.hi : first.lo;  // I_k inside [0, m) needs no split
    Rat upper(1);                              // b^{1-k}
    while (upper > m) {
        Rat lower = upper / base;
        Rat t = lower + upper - 1;  // translation on D_k
        BoxSet slice = intersect(a, BoxSet::from_interval(lower, upper));
        if (!slice.empty()) {
            BoxSet moved = translate_wrap_1d(slice, SystemAction::reduce_mod1(-t));
            acc.insert(acc.end(), moved.flat().begin(), moved.flat().end());
        }
        upper = std::move(lower);
    }
    if (tail) acc.push_back({1 - upper, Rat(1)});  // merged domains of the deep pieces
    return BoxSet::from_flat(1, std::move(acc));
}

// Forward image under the adding machine (used for negative exponents).
// Works mod 0: the single never-hit point 0 is included so half-open sets
// stay half-open and measure is preserved exactly.
inline BoxSet odometer_forward_1d(const BoxSet& a, int base) {
    if (a.empty()) return a;
    std::vector<Interval> acc;
    const Interval& last = a.flat().back();
    const bool tail = (last.hi == 1);
    const Rat m = tail ? last.lo : last.hi;  // D_k inside [m, 1) needs no split
    Rat upper(1);                            // b^{1-k}
    while (upper > 1 - m) {
        Rat dlo = 1 - upper;
        Rat dhi = 1 - upper / base;
        Rat t = upper / base + upper - 1;
        BoxSet slice = intersect(a, BoxSet::from_interval(dlo, dhi));
        if (!slice.empty()) {
            BoxSet moved = translate_wrap_1d(slice, SystemAction::reduce_mod1(t));
            acc.insert(acc.end(), moved.flat().begin(), moved.flat().end());
        }
        upper /= base;
    }
    if (tail) acc.push_back({Rat(0), upper});  // merged images of the deep pieces
    return BoxSet::from_flat(1, std::move(acc));
}

inline BoxSet rotation_pullback_1d(const BoxSet& a, const Rat& angle, long long k) {
    // (T^k)^{-1} A = A - k*angle (mod 1)
    return translate_wrap_1d(a, SystemAction::reduce_mod1(Rat(static_cast<long>(-k)) * angle));
}

// sigma^k(i) for every i, folding k through each cycle of the permutation.
inline std::vector<long> permutation_power(const std::vector<long>& perm, long long k) {
    const std::size_t n = perm.size();
    std::vector<long> out(n, -1);
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<long> cycle{static_cast<long>(i)};
        while (true) {
            long nxt = perm[static_cast<std::size_t>(cycle.back())];
            if (nxt == static_cast<long>(i)) break;
            cycle.push_back(nxt);
        }
        const long long len = static_cast<long long>(cycle.size());
        const long long off = ((k % len) + len) % len;
        for (std::size_t j = 0; j < cycle.size(); ++j) {
            done[static_cast<std::size_t>(cycle[j])] = true;
            out[static_cast<std::size_t>(cycle[j])] =
                cycle[(j + static_cast<std::size_t>(off)) % cycle.size()];
        }
    }
    return out;
}

}  // namespace detail

// Exact preimage of A under the action of g.
inline MeasurableSet pullback_set(const GroupElement& g, const SystemAction& sys,
                                  const MeasurableSet& a) {
    if (static_cast<int>(g.size()) != sys.group_rank())
        throw std::invalid_argument("group element rank mismatch");
    switch (sys.kind()) {
        case SystemKind::Rotation:
            return MeasurableSet::from_boxes(
                detail::rotation_pullback_1d(a.boxes(), sys.angles()[0], g[0]));
        case SystemKind::Doubling: {
            if (g[0] < 0)
                throw std::invalid_argument("doubling acts by preimages only (exponent >= 0)");
            BoxSet cur = a.boxes();
            for (long long i = 0; i < g[0]; ++i) cur = detail::doubling_preimage_1d(cur);
            return MeasurableSet::from_boxes(std::move(cur));
        }
        case SystemKind::Odometer: {
            BoxSet cur = a.boxes();
            const long long reps = g[0] >= 0 ? g[0] : -g[0];
            for (long long i = 0; i < reps; ++i)
                cur = g[0] >= 0 ? detail::odometer_preimage_1d(cur, sys.base())
                                : detail::odometer_forward_1d(cur, sys.base());
            return MeasurableSet::from_boxes(std::move(cur));
        }
        case SystemKind::FinitePermutation: {
            // x in (T^k)^{-1} A  <=>  sigma^k(x) in A
            std::vector<long> power = detail::permutation_power(sys.perm(), g[0]);
            std::vector<bool> out(power.size());
            for (std::size_t i = 0; i < power.size(); ++i)
                out[i] = a.mask()[static_cast<std::size_t>(power[i])];
            return MeasurableSet::from_mask(std::move(out));
        }
        case SystemKind::TorusRotation: {
            // Componentwise wrapped translation; a box splits into <= 2^d pieces.
            const int d = static_cast<int>(sys.angles().size());
            const BoxSet& bs = a.boxes();
            std::vector<Interval> flat;
            for (std::size_t b = 0; b < bs.box_count(); ++b) {
                std::vector<std::vector<Interval>> pieces(static_cast<std::size_t>(d));
                for (int ax = 0; ax < d; ++ax) {
                    Rat delta = SystemAction::reduce_mod1(
                        Rat(static_cast<long>(-g[static_cast<std::size_t>(ax)])) *
                        sys.angles()[static_cast<std::size_t>(ax)]);
                    BoxSet moved = detail::translate_wrap_1d(
                        BoxSet::from_interval(bs.side(b, ax).lo, bs.side(b, ax).hi), delta);
                    pieces[static_cast<std::size_t>(ax)].assign(moved.flat().begin(),
                                                                moved.flat().end());
                }
                std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
                while (true) {
                    for (int ax = 0; ax < d; ++ax)
                        flat.push_back(
                            pieces[static_cast<std::size_t>(ax)][idx[static_cast<std::size_t>(ax)]]);
                    int ax = d - 1;
                    while (ax >= 0 && ++idx[static_cast<std::size_t>(ax)] ==
                                          pieces[static_cast<std::size_t>(ax)].size()) {
                        idx[static_cast<std::size_t>(ax)] = 0;
                        --ax;
                    }
                    if (ax < 0) break;
                }
            }
            return MeasurableSet::from_boxes(BoxSet::from_flat(d, std::move(flat)));
        }
        case SystemKind::Product: {
            // Preimage of each box is the cross product of per-factor
            // preimages of its per-factor slices.
            const auto& factors = sys.factors();
            const BoxSet& bs = a.boxes();
            std::vector<Interval> flat;
            for (std::size_t b = 0; b < bs.box_count(); ++b) {
                std::vector<std::vector<Interval>> factor_boxes(factors.size());
                std::vector<int> factor_dims(factors.size());
                std::size_t goff = 0;
                int axoff = 0;
                bool any_empty = false;
                for (std::size_t fi = 0; fi < factors.size(); ++fi) {
                    const auto& f = factors[fi];
                    const int fd = f->space()->dim();
                    const int fr = f->group_rank();
                    GroupElement sub(g.begin() + static_cast<long>(goff),
                                     g.begin() + static_cast<long>(goff) + fr);
                    std::vector<Interval> slice;
                    for (int k = 0; k < fd; ++k) slice.push_back(bs.side(b, axoff + k));
                    MeasurableSet pre = pullback_set(
                        sub, *f, MeasurableSet::from_boxes(BoxSet::from_flat(fd, std::move(slice))));
                    factor_boxes[fi].assign(pre.boxes().flat().begin(), pre.boxes().flat().end());
                    factor_dims[fi] = fd;
                    if (factor_boxes[fi].empty()) any_empty = true;
                    goff += static_cast<std::size_t>(fr);
                    axoff += fd;
                }
                if (any_empty) continue;
                std::vector<std::size_t> idx(factors.size(), 0);
                std::vector<std::size_t> counts(factors.size());
                for (std::size_t fi = 0; fi < factors.size(); ++fi)
                    counts[fi] = factor_boxes[fi].size() / static_cast<std::size_t>(factor_dims[fi]);
                while (true) {
                    for (std::size_t fi = 0; fi < factors.size(); ++fi)
                        for (int k = 0; k < factor_dims[fi]; ++k)
                            flat.push_back(
                                factor_boxes[fi][idx[fi] * static_cast<std::size_t>(factor_dims[fi]) +
                                                 static_cast<std::size_t>(k)]);
                    std::size_t fi = factors.size();
                    while (fi > 0 && ++idx[fi - 1] == counts[fi - 1]) {
                        idx[fi - 1] = 0;
                        --fi;
                    }
                    if (fi == 0) break;
                }
            }
            return MeasurableSet::from_boxes(
                BoxSet::from_flat(sys.space()->dim(), std::move(flat)));
        }
    }
    throw std::logic_error("unreachable");
}

inline Partition pullback_partition(const GroupElement& g, const SystemAction& sys,
                                    const Partition& alpha) {
    if (alpha.space.get() != sys.space().get())
        throw std::invalid_argument("pullback_partition: partition not on the system's space");
    std::vector<MeasurableSet> atoms;
    atoms.reserve(alpha.size());
    for (const auto& a : alpha.atoms) atoms.push_back(pullback_set(g, sys, a));
    return Partition{alpha.space, std::move(atoms)};
}

inline std::vector<Partition> orbit_partitions(const Partition& alpha, const SystemAction& sys,
                                               const std::vector<GroupElement>& window) {
    if (window.empty()) throw std::invalid_argument("orbit_partitions: empty window");
    std::vector<Partition> out;
    out.reserve(window.size());
    for (const auto& g : window) out.push_back(pullback_partition(g, sys, alpha));
    return out;
}

// Join over the window [0, n) of a rank-1 action via the recursion
// J_n = alpha v T^{-1} J_{n-1}, so deep pullbacks never materialize interval
// lists of exponential size.
inline Partition orbit_join_prefix(const Partition& alpha, const SystemAction& sys, long long n) {
    if (sys.group_rank() != 1)
        throw std::invalid_argument("orbit_join_prefix: rank-1 actions only");
    if (n < 1) throw std::invalid_argument("orbit_join_prefix: n >= 1");
    Partition acc = alpha;
    for (long long i = 1; i < n; ++i)
        acc = join(alpha, pullback_partition(z_element(1), sys, acc));
    return acc;
}

// Entropies of the prefix joins for n = 1..n_max, one pass.
inline std::vector<double> orbit_join_entropies(const Partition& alpha, const SystemAction& sys,
                                                long long n_max) {
    std::vector<double> out;
    Partition acc = alpha;
    out.push_back(entropy(acc));
    for (long long i = 1; i < n_max; ++i) {
        acc = join(alpha, pullback_partition(z_element(1), sys, acc));
        out.push_back(entropy(acc));
    }
    return out;
}

// Pointwise forward action on double coordinates (sampling diagnostics).
inline Point point_forward(const SystemAction& sys, const GroupElement& g, const Point& p) {
    auto frac = [](double x) {
        double f = x - std::floor(x);
        return f < 1.0 ? f : 0.0;
    };
    switch (sys.kind()) {
        case SystemKind::Rotation: {
            const double theta = to_double(sys.angles()[0]);
            return Point{-1, {frac(p.coords[0] + static_cast<double>(g[0]) * theta)}};
        }
        case SystemKind::Doubling: {
            if (g[0] < 0) throw std::invalid_argument("doubling: forward exponent >= 0");
            double x = p.coords[0];
            for (long long i = 0; i < g[0]; ++i) x = frac(2.0 * x);
            return Point{-1, {x}};
        }
        case SystemKind::Odometer: {
            double x = p.coords[0];
            const double b = static_cast<double>(sys.base());
            const long long reps = g[0] >= 0 ? g[0] : -g[0];
            for (long long i = 0; i < reps; ++i) {
                double upper = 1.0;
                if (g[0] >= 0) {
                    while (x >= 1.0 - upper / b && upper > 1e-300) upper /= b;
                    x = frac(x + upper / b + upper - 1.0 + 1.0);
                } else {
                    while (x < upper / b && upper > 1e-300) upper /= b;
                    x = frac(x - (upper / b + upper - 1.0) + 1.0);
                }
            }
            return Point{-1, {x}};
        }
        case SystemKind::FinitePermutation: {
            std::vector<long> power = detail::permutation_power(sys.perm(), g[0]);
            return Point{power[static_cast<std::size_t>(p.index)], {}};
        }
        case SystemKind::TorusRotation: {
            Point out{-1, p.coords};
            for (std::size_t ax = 0; ax < sys.angles().size(); ++ax)
                out.coords[ax] = frac(out.coords[ax] + static_cast<double>(g[ax]) *
                                                           to_double(sys.angles()[ax]));
            return out;
        }
        case SystemKind::Product: {
            Point out{-1, {}};
            std::size_t goff = 0, coff = 0;
            for (const auto& f : sys.factors()) {
                const int fr = f->group_rank();
                const std::size_t fd = static_cast<std::size_t>(f->space()->dim());
                GroupElement sub(g.begin() + static_cast<long>(goff),
                                 g.begin() + static_cast<long>(goff) + fr);
                Point fp{-1, std::vector<double>(p.coords.begin() + static_cast<long>(coff),
                                                 p.coords.begin() + static_cast<long>(coff + fd))};
                Point fo = point_forward(*f, sub, fp);
                out.coords.insert(out.coords.end(), fo.coords.begin(), fo.coords.end());
                goff += static_cast<std::size_t>(fr);
                coff += fd;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

struct PreservationReport {
    double max_deviation = 0.0;
    bool exact = true;
    std::size_t trials = 0;
};

// Spot-check mu(A) = mu(g^{-1} A) on random test sets and small exponents.
inline PreservationReport check_measure_preserving(const SystemAction& sys, std::size_t trials,
                                                   std::uint64_t seed) {
    Rng rng(seed);
    PreservationReport rep;
    rep.trials = trials;
    const MeasureSpace& sp = *sys.space();
    const int rank = sys.group_rank();
    for (std::size_t t = 0; t < trials; ++t) {
        MeasurableSet a = MeasurableSet::empty_like(sp);
        if (sp.backend() == Backend::WeightedPoints) {
            std::vector<bool> mask(sp.point_count());
            for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = rng.next_u64() & 1;
            a = MeasurableSet::from_mask(std::move(mask));
        } else {
            BoxSet acc = BoxSet::empty_set(sp.dim());
            const int nb = 1 + static_cast<int>(rng.next_below(3));
            for (int b = 0; b < nb; ++b) {
                std::vector<Interval> one;
                for (int ax = 0; ax < sp.dim(); ++ax) {
                    long p = static_cast<long>(rng.next_below(1024));
                    long q = static_cast<long>(rng.next_below(1024));
                    if (p > q) std::swap(p, q);
                    if (p == q) ++q;
                    one.push_back({rat(p, 1024), rat(q, 1024)});
                }
                acc = unite(acc, BoxSet::from_flat(sp.dim(), std::move(one)));
            }
            a = MeasurableSet::from_boxes(std::move(acc));
        }
        GroupElement g(static_cast<std::size_t>(rank));
        for (auto& c : g) {
            long long v = static_cast<long long>(rng.next_below(7)) - 3;
            if (!sys.invertible() && v < 0) v = -v;
            c = v;
        }
        Rat before = measure(sp, a);
        Rat after = measure(sp, pullback_set(g, sys, a));
        Rat diff = after - before;
        if (diff < 0) diff = -diff;
        if (diff != 0) rep.exact = false;
        rep.max_deviation = std::max(rep.max_deviation, to_double(diff));
    }
    return rep;
}

}  // namespace pcx
