// Exact box algebra on [0,1)^d with rational endpoints. Sets are finite
// unions of pairwise-disjoint half-open boxes kept in a canonical order.
// Dimension 1 (plain interval lists) is the hot path.
#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

#include "pcx/common.hpp"

namespace pcx {

struct Interval {
    Rat lo, hi;  // half-open [lo, hi)
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

// A union of disjoint axis-aligned boxes; each box is `dim` consecutive
// intervals in `parts`. Boxes are sorted lexicographically by coordinates.
class BoxSet {
  public:
    BoxSet() : dim_(1) {}
    explicit BoxSet(int dim) : dim_(dim) { assert(dim >= 1); }

    static BoxSet empty_set(int dim = 1) { return BoxSet(dim); }

    static BoxSet unit(int dim = 1) {
        BoxSet s(dim);
        for (int k = 0; k < dim; ++k) s.parts_.push_back({Rat(0), Rat(1)});
        return s;
    }

    static BoxSet from_interval(const Rat& lo, const Rat& hi) {
        BoxSet s(1);
        if (lo < hi) s.parts_.push_back({lo, hi});
        s.canonicalize();
        return s;
    }

    // Caller guarantees sorted, pairwise-disjoint, non-adjacent boxes.
    static BoxSet from_canonical(int dim, std::vector<Interval> flat) {
        BoxSet s(dim);
        if (flat.size() / static_cast<std::size_t>(dim) > kMaxComponents)
            throw capacity_error("interval set exceeds component cap");
        s.parts_ = std::move(flat);
        return s;
    }

    // `flat` holds dim intervals per box. Degenerate boxes (any empty side)
    // are dropped. `sorted_hint` skips the sort when the caller guarantees
    // lexicographic order.
    static BoxSet from_flat(int dim, std::vector<Interval> flat, bool sorted_hint = false) {
        assert(flat.size() % static_cast<std::size_t>(dim) == 0);
        BoxSet s(dim);
        s.parts_.reserve(flat.size());
        for (std::size_t b = 0; b + dim <= flat.size(); b += dim) {
            bool nonempty = true;
            for (int k = 0; k < dim; ++k)
                if (!(flat[b + k].lo < flat[b + k].hi)) { nonempty = false; break; }
            if (nonempty)
                for (int k = 0; k < dim; ++k) s.parts_.push_back(std::move(flat[b + k]));
        }
        s.canonicalize(sorted_hint);
        return s;
    }

    int dim() const { return dim_; }
    std::size_t box_count() const { return parts_.size() / static_cast<std::size_t>(dim_); }
    bool empty() const { return parts_.empty(); }

    const Interval& side(std::size_t box, int axis) const {
        return parts_[box * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(axis)];
    }

    const std::vector<Interval>& flat() const { return parts_; }

    Rat volume() const {
        Rat total(0);
        for (std::size_t b = 0; b < box_count(); ++b) {
            Rat v(1);
            for (int k = 0; k < dim_; ++k) v *= side(b, k).hi - side(b, k).lo;
            total += v;
        }
        return total;
    }

    bool operator==(const BoxSet& o) const { return dim_ == o.dim_ && parts_ == o.parts_; }

    // Sorts boxes, merges adjacent ones, enforces the component cap.
    // Disjointness of the input boxes is the caller's invariant; in 1-D a
    // genuine overlap is detected and rejected.
    void canonicalize(bool sorted_hint = false) {
        const std::size_t d = static_cast<std::size_t>(dim_);
        if (parts_.size() / d > kMaxComponents)
            throw capacity_error("interval set exceeds component cap");
        if (dim_ == 1) {
            canonicalize_1d(sorted_hint);
            return;
        }
        bool merged = true;
        while (merged) {
            merged = false;
            for (int axis = dim_ - 1; axis >= 0; --axis) merged |= merge_pass(axis);
        }
        sort_boxes(0);
    }

  private:
    void canonicalize_1d(bool sorted_hint) {
        if (parts_.empty()) return;
        if (!sorted_hint || !std::is_sorted(parts_.begin(), parts_.end(),
                                            [](const Interval& a, const Interval& b) {
                                                return a.lo < b.lo;
                                            })) {
            std::sort(parts_.begin(), parts_.end(),
                      [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        }
        bool clean = parts_.front().lo < parts_.front().hi;
        for (std::size_t i = 1; clean && i < parts_.size(); ++i)
            clean = parts_[i].lo < parts_[i].hi && parts_[i - 1].hi < parts_[i].lo;
        if (clean) return;
        std::vector<Interval> out;
        out.reserve(parts_.size());
        for (auto& iv : parts_) {
            if (!(iv.lo < iv.hi)) continue;
            if (!out.empty() && iv.lo < out.back().hi)
                throw std::logic_error("overlapping intervals in canonicalize");
            if (!out.empty() && iv.lo == out.back().hi)
                out.back().hi = std::move(iv.hi);
            else
                out.push_back(std::move(iv));
        }
        parts_ = std::move(out);
    }

    // Lexicographic box order, with the `axis` coordinate compared last so a
    // merge pass along `axis` sees mergeable boxes adjacently.
    void sort_boxes(int last_axis) {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t nb = box_count();
        std::vector<std::size_t> order(nb);
        for (std::size_t i = 0; i < nb; ++i) order[i] = i;
        auto cmp_axis = [&](std::size_t a, std::size_t b, int ax) {
            const Interval& x = parts_[a * d + static_cast<std::size_t>(ax)];
            const Interval& y = parts_[b * d + static_cast<std::size_t>(ax)];
            if (x.lo != y.lo) return x.lo < y.lo ? -1 : 1;
            if (x.hi != y.hi) return x.hi < y.hi ? -1 : 1;
            return 0;
        };
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            for (int ax = 0; ax < dim_; ++ax) {
                if (ax == last_axis) continue;
                if (int c = cmp_axis(a, b, ax)) return c < 0;
            }
            return cmp_axis(a, b, last_axis) < 0;
        });
        std::vector<Interval> next;
        next.reserve(parts_.size());
        for (std::size_t i : order)
            for (std::size_t k = 0; k < d; ++k) next.push_back(std::move(parts_[i * d + k]));
        parts_ = std::move(next);
    }

    bool merge_pass(int axis) {
        if (box_count() < 2) return false;
        sort_boxes(axis);
        const std::size_t d = static_cast<std::size_t>(dim_);
        std::vector<Interval> out;
        out.reserve(parts_.size());
        bool merged = false;
        auto same_except_axis = [&](std::size_t out_box, std::size_t in_box) {
            for (int k = 0; k < dim_; ++k) {
                if (k == axis) continue;
                if (!(out[out_box * d + static_cast<std::size_t>(k)] ==
                      parts_[in_box * d + static_cast<std::size_t>(k)]))
                    return false;
            }
            return true;
        };
        for (std::size_t b = 0; b < box_count(); ++b) {
            std::size_t nout = out.size() / d;
            if (nout > 0 && same_except_axis(nout - 1, b) &&
                out[(nout - 1) * d + static_cast<std::size_t>(axis)].hi ==
                    parts_[b * d + static_cast<std::size_t>(axis)].lo) {
                out[(nout - 1) * d + static_cast<std::size_t>(axis)].hi =
                    parts_[b * d + static_cast<std::size_t>(axis)].hi;
                merged = true;
            } else {
                for (std::size_t k = 0; k < d; ++k) out.push_back(std::move(parts_[b * d + k]));
            }
        }
        parts_ = std::move(out);
        return merged;
    }

    int dim_;
    std::vector<Interval> parts_;
};

namespace detail {

// 1-D intersection. When one list is much shorter, binary-search the longer
// one instead of merge-walking it; join-cell refinement against deep
// pullbacks depends on this being O(small * log big).
inline std::vector<Interval> intersect_1d(const std::vector<Interval>& a,
                                          const std::vector<Interval>& b) {
    const std::vector<Interval>* small = &a;
    const std::vector<Interval>* big = &b;
    if (small->size() > big->size()) std::swap(small, big);
    std::vector<Interval> out;
    if (small->empty()) return out;
    if (small->size() <= 4 && big->size() > 16) {
        for (const Interval& s : *small) {
            auto it = std::upper_bound(big->begin(), big->end(), s.lo,
                                       [](const Rat& v, const Interval& iv) { return v < iv.lo; });
            if (it != big->begin()) --it;
            for (; it != big->end() && it->lo < s.hi; ++it) {
                Rat lo = std::max(s.lo, it->lo);
                Rat hi = std::min(s.hi, it->hi);
                if (lo < hi) out.push_back({std::move(lo), std::move(hi)});
            }
        }
        std::sort(out.begin(), out.end(),
                  [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
        return out;
    }
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        Rat lo = std::max(a[i].lo, b[j].lo);
        Rat hi = std::min(a[i].hi, b[j].hi);
        if (lo < hi) out.push_back({std::move(lo), std::move(hi)});
        if (a[i].hi < b[j].hi)
            ++i;
        else
            ++j;
    }
    return out;
}

inline std::vector<Interval> unite_1d(const std::vector<Interval>& a,
                                      const std::vector<Interval>& b) {
    std::vector<Interval> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    auto push = [&out](const Interval& iv) {
        if (!out.empty() && iv.lo <= out.back().hi) {
            if (out.back().hi < iv.hi) out.back().hi = iv.hi;
        } else {
            out.push_back(iv);
        }
    };
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].lo <= b[j].lo))
            push(a[i++]);
        else
            push(b[j++]);
    }
    return out;
}

// a \ b, both sorted disjoint.
inline std::vector<Interval> subtract_1d(const std::vector<Interval>& a,
                                         const std::vector<Interval>& b) {
    std::vector<Interval> out;
    std::size_t j = 0;
    for (const Interval& iv : a) {
        Rat cur = iv.lo;
        while (j < b.size() && b[j].hi <= cur) ++j;
        std::size_t k = j;
        while (k < b.size() && b[k].lo < iv.hi) {
            if (cur < b[k].lo) out.push_back({cur, b[k].lo});
            if (cur < b[k].hi) cur = b[k].hi;
            ++k;
        }
        if (cur < iv.hi) out.push_back({cur, iv.hi});
    }
    return out;
}

}  // namespace detail

inline BoxSet intersect(const BoxSet& a, const BoxSet& b) {
    assert(a.dim() == b.dim());
    if (a.dim() == 1) {
        // Clipping a canonical list against one interval keeps it canonical;
        // this is the innermost operation of every join refinement.
        if (a.flat().size() == 1 || b.flat().size() == 1) {
            const Interval& s = a.flat().size() == 1 ? a.flat().front() : b.flat().front();
            const std::vector<Interval>& list = a.flat().size() == 1 ? b.flat() : a.flat();
            std::vector<Interval> out;
            for (const Interval& iv : list) {
                if (iv.hi <= s.lo) continue;
                if (iv.lo >= s.hi) break;
                out.push_back({std::max(s.lo, iv.lo), std::min(s.hi, iv.hi)});
            }
            return BoxSet::from_canonical(1, std::move(out));
        }
        return BoxSet::from_flat(1, detail::intersect_1d(a.flat(), b.flat()), true);
    }
    std::vector<Interval> flat;
    const int d = a.dim();
    for (std::size_t i = 0; i < a.box_count(); ++i) {
        for (std::size_t j = 0; j < b.box_count(); ++j) {
            std::vector<Interval> box;
            box.reserve(static_cast<std::size_t>(d));
            bool nonempty = true;
            for (int k = 0; k < d; ++k) {
                Rat lo = std::max(a.side(i, k).lo, b.side(j, k).lo);
                Rat hi = std::min(a.side(i, k).hi, b.side(j, k).hi);
                if (!(lo < hi)) { nonempty = false; break; }
                box.push_back({std::move(lo), std::move(hi)});
            }
            if (nonempty) flat.insert(flat.end(), box.begin(), box.end());
        }
    }
    return BoxSet::from_flat(d, std::move(flat));
}

inline BoxSet subtract(const BoxSet& a, const BoxSet& b) {
    assert(a.dim() == b.dim());
    if (a.dim() == 1) {
        return BoxSet::from_flat(1, detail::subtract_1d(a.flat(), b.flat()), true);
    }
    // Subtract each box of b in turn, splitting boxes of a along axes.
    const int d = a.dim();
    std::vector<Interval> cur(a.flat());
    for (std::size_t j = 0; j < b.box_count(); ++j) {
        std::vector<Interval> next;
        for (std::size_t i = 0; i + static_cast<std::size_t>(d) <= cur.size();
             i += static_cast<std::size_t>(d)) {
            const Interval* box = &cur[i];
            bool overlaps = true;
            for (int k = 0; k < d; ++k) {
                if (!(std::max(box[k].lo, b.side(j, k).lo) <
                      std::min(box[k].hi, b.side(j, k).hi))) {
                    overlaps = false;
                    break;
                }
            }
            if (!overlaps) {
                next.insert(next.end(), box, box + d);
                continue;
            }
            std::vector<Interval> rem(box, box + d);
            for (int k = 0; k < d; ++k) {
                const Rat& blo = b.side(j, k).lo;
                const Rat& bhi = b.side(j, k).hi;
                if (rem[static_cast<std::size_t>(k)].lo < blo) {
                    std::vector<Interval> piece(rem);
                    piece[static_cast<std::size_t>(k)].hi = blo;
                    next.insert(next.end(), piece.begin(), piece.end());
                    rem[static_cast<std::size_t>(k)].lo = blo;
                }
                if (bhi < rem[static_cast<std::size_t>(k)].hi) {
                    std::vector<Interval> piece(rem);
                    piece[static_cast<std::size_t>(k)].lo = bhi;
                    next.insert(next.end(), piece.begin(), piece.end());
                    rem[static_cast<std::size_t>(k)].hi = bhi;
                }
            }
        }
        cur = std::move(next);
        if (cur.size() / static_cast<std::size_t>(d) > kMaxComponents)
            throw capacity_error("box subtraction exceeds component cap");
    }
    return BoxSet::from_flat(d, std::move(cur));
}

inline BoxSet unite(const BoxSet& a, const BoxSet& b) {
    assert(a.dim() == b.dim());
    if (a.dim() == 1) {
        return BoxSet::from_flat(1, detail::unite_1d(a.flat(), b.flat()), true);
    }
    BoxSet extra = subtract(b, a);
    std::vector<Interval> flat(a.flat());
    flat.insert(flat.end(), extra.flat().begin(), extra.flat().end());
    return BoxSet::from_flat(a.dim(), std::move(flat));
}

inline BoxSet complement(const BoxSet& a) {
    return subtract(BoxSet::unit(a.dim()), a);
}

inline BoxSet symmetric_difference(const BoxSet& a, const BoxSet& b) {
    return unite(subtract(a, b), subtract(b, a));
}

}  // namespace pcx
