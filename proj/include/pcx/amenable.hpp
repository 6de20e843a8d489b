// Folner windows for Z^d: translation defects, temperedness ratios, the
// window-averaged mean metric on the state space, its sampled covering
// number, and the cross-check between the partition-based and metric-based
// complexity verdicts.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/covering.hpp"
#include "pcx/dynamics.hpp"
#include "pcx/measure_space.hpp"

namespace pcx {

struct FolnerSequence {
    int dim = 1;
    std::vector<std::vector<GroupElement>> windows;  // indexed from 1 in reports
    bool boxes = false;                              // every window is [0, size)^dim
    std::vector<long long> sizes;                    // side lengths when boxes
};

// F_n = [0, sizes[n])^dim, elements in lexicographic order.
inline FolnerSequence folner_boxes(int dim, const std::vector<long long>& sizes) {
    if (dim < 1) throw std::invalid_argument("folner_boxes: dim >= 1");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) throw std::invalid_argument("folner_boxes: sizes positive");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw std::invalid_argument("folner_boxes: sizes strictly increasing");
    }
    FolnerSequence seq;
    seq.dim = dim;
    seq.boxes = true;
    seq.sizes = sizes;
    for (long long s : sizes) {
        std::vector<GroupElement> window;
        GroupElement cur(static_cast<std::size_t>(dim), 0);
        while (true) {
            window.push_back(cur);
            int ax = dim - 1;
            while (ax >= 0 && ++cur[static_cast<std::size_t>(ax)] == s) {
                cur[static_cast<std::size_t>(ax)] = 0;
                --ax;
            }
            if (ax < 0) break;
        }
        seq.windows.push_back(std::move(window));
    }
    return seq;
}

namespace detail {
struct ElementHash {
    std::size_t operator()(const GroupElement& g) const {
        std::size_t h = 1469598103934665603ULL;
        for (long long v : g) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL;
            h *= 1099511628211ULL;
        }
        return h;
    }
};
using ElementSet = std::unordered_set<GroupElement, ElementHash>;
}  // namespace detail

// |g F_n delta F_n| / |F_n| as an exact rational.
inline Rat folner_defect(const FolnerSequence& seq, const GroupElement& g, std::size_t n) {
    if (n < 1 || n > seq.windows.size()) throw std::invalid_argument("folner_defect: bad index");
    const auto& window = seq.windows[n - 1];
    detail::ElementSet base(window.begin(), window.end());
    std::size_t sym = 0;
    for (const auto& f : window) {
        GroupElement shifted(f);
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += g[i];
        if (!base.count(shifted)) sym += 2;  // shifted escapes, and its slot is vacated
    }
    Rat r(static_cast<long>(sym), static_cast<long>(window.size()));
    r.canonicalize();
    return r;
}

struct TemperedReport {
    std::size_t n_checked = 0;
    std::vector<Rat> c_values;  // index i corresponds to n = i + 2
    Rat c_max;
};

// c_n = |union over i<n of F_i^{-1} F_n| / |F_n| for 2 <= n <= n_max. The
// union equals the Minkowski sum (union over i<n of -F_i) + F_n. Boxes take
// the closed-form product; general windows enumerate pairs (budget-capped).
inline TemperedReport temperedness_profile(const FolnerSequence& seq, std::size_t n_max) {
    TemperedReport rep;
    rep.c_max = Rat(0);
    const std::size_t limit = std::min(n_max, seq.windows.size());
    if (limit < 2) return rep;

    if (seq.boxes) {
        for (std::size_t n = 2; n <= limit; ++n) {
            // union over i<n of -F_i = [-(s_{n-1}-1), 0]^d; sum with [0, s_n-1]^d
            mpz_class count = 1;
            for (int ax = 0; ax < seq.dim; ++ax)
                count *= mpz_class(static_cast<long>(seq.sizes[n - 2] + seq.sizes[n - 1] - 1));
            mpz_class denom = 1;
            for (int ax = 0; ax < seq.dim; ++ax)
                denom *= mpz_class(static_cast<long>(seq.sizes[n - 1]));
            Rat c(count, denom);
            c.canonicalize();
            rep.c_values.push_back(c);
            if (c > rep.c_max) rep.c_max = c;
        }
        rep.n_checked = limit;
        return rep;
    }

    detail::ElementSet neg_union;
    std::size_t budget = 0;
    for (const auto& f : seq.windows[0]) {
        GroupElement neg(f);
        for (auto& v : neg) v = -v;
        neg_union.insert(std::move(neg));
    }
    for (std::size_t n = 2; n <= limit; ++n) {
        const auto& window = seq.windows[n - 1];
        budget += neg_union.size() * window.size();
        if (budget > 50'000'000)
            throw capacity_error("temperedness_profile: pair enumeration budget exceeded");
        detail::ElementSet sum;
        sum.reserve(neg_union.size() * 2);
        for (const auto& u : neg_union) {
            for (const auto& f : window) {
                GroupElement s(u);
                for (std::size_t i = 0; i < s.size(); ++i) s[i] += f[i];
                sum.insert(std::move(s));
            }
        }
        Rat c(static_cast<long>(sum.size()), static_cast<long>(window.size()));
        c.canonicalize();
        rep.c_values.push_back(c);
        if (c > rep.c_max) rep.c_max = c;
        for (const auto& f : window) {
            GroupElement neg(f);
            for (auto& v : neg) v = -v;
            neg_union.insert(std::move(neg));
        }
    }
    rep.n_checked = limit;
    return rep;
}

// Base metric on the state space: circle metric per axis (max over axes) for
// box backends, discrete 0/1 metric for point backends.
inline double base_metric(const MeasureSpace& space, const Point& x, const Point& y) {
    if (space.backend() == Backend::WeightedPoints) return x.index == y.index ? 0.0 : 1.0;
    double best = 0.0;
    for (std::size_t ax = 0; ax < x.coords.size(); ++ax) {
        double d = std::abs(x.coords[ax] - y.coords[ax]);
        d = std::min(d, 1.0 - d);
        best = std::max(best, d);
    }
    return best;
}

// Mean metric over the window: average of the base metric along the orbits.
inline double mean_metric(const SystemAction& sys, const std::vector<GroupElement>& window,
                          const Point& x, const Point& y) {
    if (window.empty()) throw std::invalid_argument("mean_metric: empty window");
    double acc = 0.0;
    for (const auto& g : window)
        acc += base_metric(*sys.space(), point_forward(sys, g, x), point_forward(sys, g, y));
    return acc / static_cast<double>(window.size());
}

struct MetricCoverEntry {
    std::size_t window_size = 0;
    std::size_t cover_size = 0;
    std::string solver = "greedy_net";
    double covered_mass = 0.0;  // empirical fraction of samples covered
};

namespace detail {

// Orbit of a point over a window, specialized to step incrementally when the
// window is the elementwise prefix [0,n) of a rank-1 action.
class OrbitWalker {
  public:
    OrbitWalker(const SystemAction& sys, const std::vector<GroupElement>& window)
        : sys_(sys), window_(window) {
        prefix_ = sys.group_rank() == 1;
        for (std::size_t i = 0; i < window.size() && prefix_; ++i)
            prefix_ = window[i].size() == 1 && window[i][0] == static_cast<long long>(i);
    }

    // fills out[i] = g_i . x
    void orbit(const Point& x, std::vector<Point>& out) const {
        out.resize(window_.size());
        if (prefix_) {
            Point cur = x;
            for (std::size_t i = 0; i < window_.size(); ++i) {
                out[i] = cur;
                if (i + 1 < window_.size()) cur = point_forward(sys_, z_element(1), cur);
            }
            return;
        }
        for (std::size_t i = 0; i < window_.size(); ++i)
            out[i] = point_forward(sys_, window_[i], x);
    }

  private:
    const SystemAction& sys_;
    const std::vector<GroupElement>& window_;
    bool prefix_;
};

}  // namespace detail

// Sampled covering number of the mean metric: greedy net over the sample
// (first uncovered point becomes the next center) until the covered fraction
// strictly exceeds 1 - eps. Centers are sample points, so the value is an
// upper bound on the sampled-measure covering number; the cell reduction of
// the Hamming case has no analogue here.
inline MetricCoverEntry metric_covering_number(const SystemAction& sys,
                                               const std::vector<GroupElement>& window,
                                               double eps, std::size_t sample_count,
                                               std::uint64_t seed) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("metric_covering_number: eps in (0,1)");
    auto points = sample_points(*sys.space(), sample_count, seed);
    detail::OrbitWalker walker(sys, window);
    const double thresh = eps * static_cast<double>(window.size());

    std::vector<std::vector<Point>> orbits;  // computed lazily per point
    std::vector<bool> covered(points.size(), false);
    std::size_t covered_count = 0;
    MetricCoverEntry entry;
    entry.window_size = window.size();

    std::vector<Point> center_orbit, point_orbit;
    const double need = (1.0 - eps) * static_cast<double>(points.size());
    std::size_t scan = 0;
    while (static_cast<double>(covered_count) <= need) {
        while (scan < points.size() && covered[scan]) ++scan;
        if (scan == points.size()) break;
        walker.orbit(points[scan], center_orbit);
        ++entry.cover_size;
        for (std::size_t i = scan; i < points.size(); ++i) {
            if (covered[i]) continue;
            walker.orbit(points[i], point_orbit);
            double acc = 0.0;
            bool inside = true;
            for (std::size_t k = 0; k < center_orbit.size(); ++k) {
                acc += base_metric(*sys.space(), center_orbit[k], point_orbit[k]);
                if (acc >= thresh) {
                    inside = false;
                    break;
                }
            }
            if (inside) {
                covered[i] = true;
                ++covered_count;
            }
        }
    }
    entry.covered_mass =
        static_cast<double>(covered_count) / static_cast<double>(points.size());
    return entry;
}

struct MetricProfile {
    double epsilon = 0.0;
    std::vector<MetricCoverEntry> entries;
    ProfileVerdict verdict = ProfileVerdict::Inconclusive;
};

inline MetricProfile metric_profile(const SystemAction& sys, const FolnerSequence& seq,
                                    double eps, std::size_t sample_count, std::uint64_t seed) {
    MetricProfile profile;
    profile.epsilon = eps;
    for (const auto& window : seq.windows)
        profile.entries.push_back(metric_covering_number(sys, window, eps, sample_count, seed));
    std::vector<CoverEntry> shim;
    for (const auto& e : profile.entries) {
        CoverEntry c;
        c.cover_size = e.cover_size;
        shim.push_back(std::move(c));
    }
    profile.verdict = profile_verdict(shim);
    return profile;
}

struct CrosscheckReport {
    ProfileVerdict partition_verdict = ProfileVerdict::Inconclusive;
    ProfileVerdict metric_verdict = ProfileVerdict::Inconclusive;
    bool agree = false;
    ComplexityProfile partition_profile;
    MetricProfile metric_profile_result;
};

// Runs the partition-complexity profile and the mean-metric profile over the
// same windows and compares the two boundedness verdicts. Disagreement is
// reported, not asserted away: the underlying equivalence is asymptotic and
// this check lives at a finite horizon.
inline CrosscheckReport theorem5_crosscheck(const Partition& alpha, const SystemAction& sys,
                                            const FolnerSequence& seq, const Rat& eps,
                                            std::size_t sample_count, std::uint64_t seed,
                                            CoverSolver solver = CoverSolver::Greedy) {
    CrosscheckReport rep;
    rep.partition_profile = complexity_profile(alpha, sys, seq.windows, eps, solver);
    rep.metric_profile_result = metric_profile(sys, seq, to_double(eps), sample_count, seed);
    rep.partition_verdict = rep.partition_profile.verdict;
    rep.metric_verdict = rep.metric_profile_result.verdict;
    rep.agree = rep.partition_verdict == rep.metric_verdict;
    return rep;
}

}  // namespace pcx
