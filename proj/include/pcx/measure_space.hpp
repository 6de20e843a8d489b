// The probability space (X, B, mu) in two exactly-representable backends:
// finitely many weighted points, or the unit box [0,1)^d with Lebesgue
// measure and rational box sets.
#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/interval_set.hpp"

namespace pcx {

enum class Backend { WeightedPoints, IntervalAlgebra };

class MeasureSpace;
using SpacePtr = std::shared_ptr<const MeasureSpace>;

class MeasureSpace {
  public:
    static SpacePtr uniform_points(std::size_t n) {
        if (n == 0) throw std::invalid_argument("uniform_points: need at least one point");
        MeasureSpace s;
        s.backend_ = Backend::WeightedPoints;
        s.weights_.assign(n, 1.0 / static_cast<double>(n));
        return std::make_shared<const MeasureSpace>(std::move(s));
    }

    static SpacePtr weighted_points(std::vector<double> weights) {
        if (weights.empty()) throw std::invalid_argument("weighted_points: empty weight vector");
        double sum = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("weighted_points: negative weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > kWeightSumTol)
            throw std::invalid_argument("weighted_points: weights must sum to 1");
        MeasureSpace s;
        s.backend_ = Backend::WeightedPoints;
        s.weights_ = std::move(weights);
        return std::make_shared<const MeasureSpace>(std::move(s));
    }

    static SpacePtr interval(int dim = 1) {
        if (dim < 1) throw std::invalid_argument("interval space: dim >= 1");
        MeasureSpace s;
        s.backend_ = Backend::IntervalAlgebra;
        s.dim_ = dim;
        return std::make_shared<const MeasureSpace>(std::move(s));
    }

    Backend backend() const { return backend_; }
    int dim() const { return dim_; }
    std::size_t point_count() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }

    // Exact weight of point i (doubles embed exactly into Rat).
    Rat point_weight(std::size_t i) const { return rat_from_double(weights_[i]); }

  private:
    MeasureSpace() = default;
    Backend backend_ = Backend::IntervalAlgebra;
    int dim_ = 1;
    std::vector<double> weights_;  // WeightedPoints only
};

// A point of the space: an index for point backends, coordinates for box
// backends. Used by sampling and by the pointwise (forward) dynamics.
struct Point {
    long index = -1;
    std::vector<double> coords;
};

// A measurable set in one backend: a point bitmask or a canonical box union.
class MeasurableSet {
  public:
    MeasurableSet() = default;

    static MeasurableSet from_boxes(BoxSet boxes) {
        MeasurableSet s;
        s.backend_ = Backend::IntervalAlgebra;
        s.boxes_ = std::move(boxes);
        return s;
    }

    static MeasurableSet from_interval(const Rat& lo, const Rat& hi) {
        return from_boxes(BoxSet::from_interval(lo, hi));
    }

    static MeasurableSet from_mask(std::vector<bool> mask) {
        MeasurableSet s;
        s.backend_ = Backend::WeightedPoints;
        s.mask_ = std::move(mask);
        return s;
    }

    static MeasurableSet from_indices(std::size_t n, const std::vector<std::size_t>& idx) {
        std::vector<bool> mask(n, false);
        for (std::size_t i : idx) {
            if (i >= n) throw std::invalid_argument("point index out of range");
            mask[i] = true;
        }
        return from_mask(std::move(mask));
    }

    static MeasurableSet empty_like(const MeasureSpace& space) {
        if (space.backend() == Backend::WeightedPoints)
            return from_mask(std::vector<bool>(space.point_count(), false));
        return from_boxes(BoxSet::empty_set(space.dim()));
    }

    static MeasurableSet full_like(const MeasureSpace& space) {
        if (space.backend() == Backend::WeightedPoints)
            return from_mask(std::vector<bool>(space.point_count(), true));
        return from_boxes(BoxSet::unit(space.dim()));
    }

    Backend backend() const { return backend_; }
    const BoxSet& boxes() const { return boxes_; }
    const std::vector<bool>& mask() const { return mask_; }

    bool is_empty() const {
        if (backend_ == Backend::WeightedPoints)
            return std::find(mask_.begin(), mask_.end(), true) == mask_.end();
        return boxes_.empty();
    }

    bool operator==(const MeasurableSet& o) const {
        return backend_ == o.backend_ && mask_ == o.mask_ && boxes_ == o.boxes_;
    }

  private:
    Backend backend_ = Backend::IntervalAlgebra;
    std::vector<bool> mask_;
    BoxSet boxes_{1};
};

namespace detail {
inline void check_same_backend(const MeasurableSet& a, const MeasurableSet& b) {
    if (a.backend() != b.backend())
        throw std::invalid_argument("set operation across different backends");
    if (a.backend() == Backend::WeightedPoints) {
        if (a.mask().size() != b.mask().size())
            throw std::invalid_argument("sets live on different point spaces");
    } else if (a.boxes().dim() != b.boxes().dim()) {
        throw std::invalid_argument("sets live in different dimensions");
    }
}

inline std::vector<bool> mask_op(const std::vector<bool>& a, const std::vector<bool>& b,
                                 bool (*op)(bool, bool)) {
    std::vector<bool> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return out;
}
}  // namespace detail

inline MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b) {
    detail::check_same_backend(a, b);
    if (a.backend() == Backend::WeightedPoints)
        return MeasurableSet::from_mask(
            detail::mask_op(a.mask(), b.mask(), [](bool x, bool y) { return x || y; }));
    return MeasurableSet::from_boxes(unite(a.boxes(), b.boxes()));
}

inline MeasurableSet set_intersection(const MeasurableSet& a, const MeasurableSet& b) {
    detail::check_same_backend(a, b);
    if (a.backend() == Backend::WeightedPoints)
        return MeasurableSet::from_mask(
            detail::mask_op(a.mask(), b.mask(), [](bool x, bool y) { return x && y; }));
    return MeasurableSet::from_boxes(intersect(a.boxes(), b.boxes()));
}

inline MeasurableSet set_difference(const MeasurableSet& a, const MeasurableSet& b) {
    detail::check_same_backend(a, b);
    if (a.backend() == Backend::WeightedPoints)
        return MeasurableSet::from_mask(
            detail::mask_op(a.mask(), b.mask(), [](bool x, bool y) { return x && !y; }));
    return MeasurableSet::from_boxes(subtract(a.boxes(), b.boxes()));
}

inline MeasurableSet set_complement(const MeasureSpace& space, const MeasurableSet& a) {
    if (space.backend() != a.backend())
        throw std::invalid_argument("complement: set does not belong to space");
    if (a.backend() == Backend::WeightedPoints) {
        std::vector<bool> out(a.mask());
        out.flip();
        return MeasurableSet::from_mask(std::move(out));
    }
    return MeasurableSet::from_boxes(complement(a.boxes()));
}

inline MeasurableSet symmetric_difference(const MeasurableSet& a, const MeasurableSet& b) {
    detail::check_same_backend(a, b);
    if (a.backend() == Backend::WeightedPoints)
        return MeasurableSet::from_mask(
            detail::mask_op(a.mask(), b.mask(), [](bool x, bool y) { return x != y; }));
    return MeasurableSet::from_boxes(symmetric_difference(a.boxes(), b.boxes()));
}

// Exact measure. Interval sets are exact by construction; point weights are
// doubles embedded exactly and summed without rounding.
inline Rat measure(const MeasureSpace& space, const MeasurableSet& a) {
    if (space.backend() != a.backend())
        throw std::invalid_argument("measure: set does not belong to space");
    if (a.backend() == Backend::WeightedPoints) {
        if (a.mask().size() != space.point_count())
            throw std::invalid_argument("measure: set does not belong to space");
        Rat total(0);
        for (std::size_t i = 0; i < a.mask().size(); ++i)
            if (a.mask()[i]) total += space.point_weight(i);
        return total;
    }
    if (a.boxes().dim() != space.dim())
        throw std::invalid_argument("measure: set dimension mismatch");
    return a.boxes().volume();
}

inline double measure_d(const MeasureSpace& space, const MeasurableSet& a) {
    return to_double(measure(space, a));
}

// n i.i.d. samples from mu, deterministic in the seed. Point backends use
// inverse-CDF lookup; box backends draw uniform coordinates.
inline std::vector<Point> sample_points(const MeasureSpace& space, std::size_t n,
                                        std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample_points: n >= 1");
    Rng rng(seed);
    std::vector<Point> out;
    out.reserve(n);
    if (space.backend() == Backend::WeightedPoints) {
        std::vector<double> cdf(space.point_count());
        std::partial_sum(space.weights().begin(), space.weights().end(), cdf.begin());
        for (std::size_t i = 0; i < n; ++i) {
            double u = rng.next_double();
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            long idx = std::min<long>(static_cast<long>(it - cdf.begin()),
                                      static_cast<long>(space.point_count()) - 1);
            out.push_back(Point{idx, {}});
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Point p;
        p.coords.resize(static_cast<std::size_t>(space.dim()));
        for (double& c : p.coords) c = rng.next_double();
        out.push_back(std::move(p));
    }
    return out;
}

// Membership test for sampled points (box backend: half-open test per axis).
inline bool contains(const MeasurableSet& a, const Point& p) {
    if (a.backend() == Backend::WeightedPoints) {
        return p.index >= 0 && static_cast<std::size_t>(p.index) < a.mask().size() &&
               a.mask()[static_cast<std::size_t>(p.index)];
    }
    const BoxSet& bs = a.boxes();
    for (std::size_t b = 0; b < bs.box_count(); ++b) {
        bool inside = true;
        for (int k = 0; k < bs.dim(); ++k) {
            const Interval& iv = bs.side(b, k);
            double x = p.coords[static_cast<std::size_t>(k)];
            if (!(to_double(iv.lo) <= x && x < to_double(iv.hi))) { inside = false; break; }
        }
        if (inside) return true;
    }
    return false;
}

}  // namespace pcx
