#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "pcx/dynamics.hpp"

using namespace pcx;
using Catch::Approx;

namespace {
SpacePtr unit_interval() {
    static SpacePtr sp = MeasureSpace::interval();
    return sp;
}
const Rat kGolden = rat(832040, 1346269);  // F_30 / F_31
}  // namespace

TEST_CASE("doubling preimage of an interval") {
    auto sp = unit_interval();
    auto sys = SystemAction::doubling(sp);
    auto a = MeasurableSet::from_interval(rat(0), rat(1, 2));
    auto pre = pullback_set(z_element(1), *sys, a);
    REQUIRE(pre.boxes().box_count() == 2);
    CHECK(pre.boxes().side(0, 0).lo == 0);
    CHECK(pre.boxes().side(0, 0).hi == rat(1, 4));
    CHECK(pre.boxes().side(1, 0).lo == rat(1, 2));
    CHECK(pre.boxes().side(1, 0).hi == rat(3, 4));

    CHECK(pullback_set(z_element(0), *sys, a) == a);
    CHECK_THROWS_AS(pullback_set(z_element(-1), *sys, a), std::invalid_argument);
}

TEST_CASE("rotation pullback wraps exactly") {
    auto sp = unit_interval();
    auto sys = SystemAction::rotation(sp, rat(1, 3));
    auto a = MeasurableSet::from_interval(rat(0), rat(1, 3));
    auto pre = pullback_set(z_element(1), *sys, a);
    // preimage = A - 1/3 = [2/3, 1)
    REQUIRE(pre.boxes().box_count() == 1);
    CHECK(pre.boxes().side(0, 0).lo == rat(2, 3));
    CHECK(pre.boxes().side(0, 0).hi == rat(1));
    CHECK(measure(*sp, pre) == measure(*sp, a));

    // negative exponent (forward translate)
    auto fwd = pullback_set(z_element(-1), *sys, a);
    CHECK(measure(*sp, fwd) == rat(1, 3));
    CHECK(fwd.boxes().side(0, 0).lo == rat(1, 3));
}

TEST_CASE("cocycle identity on the interval zoo") {
    auto sp = unit_interval();
    Rng rng(3);
    std::vector<SystemPtr> zoo{SystemAction::rotation(sp, kGolden), SystemAction::doubling(sp),
                               SystemAction::odometer(sp, 2), SystemAction::odometer(sp, 3)};
    for (const auto& sys : zoo) {
        for (int t = 0; t < 25; ++t) {
            long p = static_cast<long>(rng.next_below(255));
            long q = static_cast<long>(rng.next_below(255));
            if (p > q) std::swap(p, q);
            if (p == q) ++q;
            auto a = MeasurableSet::from_interval(rat(p, 255), rat(q, 255));
            long long g = static_cast<long long>(rng.next_below(3));
            long long h = static_cast<long long>(rng.next_below(3));
            auto lhs = pullback_set(z_element(g + h), *sys, a);
            auto rhs = pullback_set(z_element(h), *sys, pullback_set(z_element(g), *sys, a));
            CHECK(measure(*sp, symmetric_difference(lhs, rhs)) == 0);
        }
    }
}

TEST_CASE("pullback preserves measure and entropy") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 3), rat(2, 3)});
    std::vector<SystemPtr> zoo{SystemAction::rotation(sp, kGolden), SystemAction::doubling(sp),
                               SystemAction::odometer(sp, 2)};
    for (const auto& sys : zoo) {
        auto pulled = pullback_partition(z_element(2), *sys, alpha);
        CHECK(entropy(pulled) == Approx(entropy(alpha)).margin(1e-12));
        for (std::size_t i = 0; i < alpha.size(); ++i)
            CHECK(measure(*sp, pulled.atoms[i]) == measure(*sp, alpha.atoms[i]));
    }
}

TEST_CASE("measure preservation reports are exact for the interval zoo") {
    auto sp = unit_interval();
    for (const auto& sys :
         {SystemAction::rotation(sp, kGolden), SystemAction::doubling(sp),
          SystemAction::odometer(sp, 2), SystemAction::odometer(sp, 5)}) {
        auto rep = check_measure_preserving(*sys, 40, 99);
        CHECK(rep.exact);
        CHECK(rep.max_deviation == 0.0);
    }
    auto pts = MeasureSpace::uniform_points(8);
    auto perm = SystemAction::finite_permutation(pts, {3, 0, 1, 2, 5, 4, 7, 6});
    auto rep = check_measure_preserving(*perm, 40, 99);
    CHECK(rep.exact);
}

TEST_CASE("odometer acts as the adding machine") {
    auto sp = unit_interval();
    auto sys = SystemAction::odometer(sp, 2);
    // forward map sends [0,1/2) -> [1/2,1); preimage of [1/2,1) is [0,1/2)
    auto upper = MeasurableSet::from_interval(rat(1, 2), rat(1));
    auto pre = pullback_set(z_element(1), *sys, upper);
    CHECK(measure(*sp, symmetric_difference(
                           pre, MeasurableSet::from_interval(rat(0), rat(1, 2)))) == 0);

    // preimage of a set touching 0 merges the deep tail into one interval
    auto a = MeasurableSet::from_interval(rat(0), rat(1, 4));
    auto p = pullback_set(z_element(1), *sys, a);
    CHECK(measure(*sp, p) == rat(1, 4));
    // inverse followed by forward is the identity (mod 0)
    auto roundtrip = pullback_set(z_element(-1), *sys, p);
    CHECK(measure(*sp, symmetric_difference(roundtrip, a)) == 0);

    // orbit of [0,1/2) under repeated preimages keeps measure 1/2
    auto cur = MeasurableSet::from_interval(rat(0), rat(1, 2));
    for (int i = 0; i < 6; ++i) {
        cur = pullback_set(z_element(1), *sys, cur);
        CHECK(measure(*sp, cur) == rat(1, 2));
    }
}

TEST_CASE("finite permutation pullback") {
    auto pts = MeasureSpace::uniform_points(5);
    auto sys = SystemAction::finite_permutation(pts, {1, 2, 0, 4, 3});
    auto a = MeasurableSet::from_indices(5, {0, 3});
    // x in T^{-1}A iff sigma(x) in A: sigma(2)=0, sigma(4)=3
    auto pre = pullback_set(z_element(1), *sys, a);
    CHECK(pre.mask() == std::vector<bool>{false, false, true, false, true});
    // exponent folding matches repeated application
    auto pre5 = pullback_set(z_element(5), *sys, a);
    auto step = a;
    for (int i = 0; i < 5; ++i) step = pullback_set(z_element(1), *sys, step);
    CHECK(pre5.mask() == step.mask());
    // negative exponent inverts
    auto back = pullback_set(z_element(-1), *sys, pre);
    CHECK(back.mask() == a.mask());
}

TEST_CASE("torus rotation pullback splits boxes componentwise") {
    auto sp = MeasureSpace::interval(2);
    auto sys = SystemAction::torus_rotation(sp, {rat(1, 4), rat(1, 3)});
    std::vector<Interval> box{{rat(0), rat(1, 2)}, {rat(0), rat(1, 2)}};
    auto a = MeasurableSet::from_boxes(BoxSet::from_flat(2, std::move(box)));
    auto pre = pullback_set({1, 1}, *sys, a);
    CHECK(measure(*sp, pre) == rat(1, 4));
    // pulling back by (0,0) is the identity
    CHECK(pullback_set({0, 0}, *sys, a) == a);
    // cocycle in each coordinate
    auto two = pullback_set({2, 0}, *sys, a);
    auto twice = pullback_set({1, 0}, *sys, pullback_set({1, 0}, *sys, a));
    CHECK(measure(*sp, symmetric_difference(two, twice)) == 0);
}

TEST_CASE("product action concatenates factors") {
    auto sp1 = unit_interval();
    auto rot = SystemAction::rotation(sp1, rat(1, 5));
    auto dbl = SystemAction::doubling(sp1);
    auto prod = SystemAction::product({rot, dbl});
    CHECK(prod->group_rank() == 2);
    CHECK(prod->space()->dim() == 2);

    std::vector<Interval> box{{rat(0), rat(1, 5)}, {rat(0), rat(1, 2)}};
    auto a = MeasurableSet::from_boxes(BoxSet::from_flat(2, std::move(box)));
    auto pre = pullback_set({1, 1}, *prod, a);
    CHECK(measure(*prod->space(), pre) == rat(1, 10));
    // factor 2 doubles: the box splits into two pieces
    CHECK(pre.boxes().box_count() == 2);

    auto rep = check_measure_preserving(*prod, 25, 7);
    CHECK(rep.exact);
}

TEST_CASE("orbit partitions") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 2)});
    auto sys = SystemAction::doubling(sp);
    auto orbit = orbit_partitions(alpha, *sys, {z_element(0), z_element(1), z_element(2)});
    REQUIRE(orbit.size() == 3);
    CHECK(matching_distance(orbit[0], orbit[1]).rho_tilde_exact > 0);
    CHECK(matching_distance(orbit[0], orbit[2]).rho_tilde_exact > 0);
    CHECK(matching_distance(orbit[1], orbit[2]).rho_tilde_exact > 0);

    auto single = orbit_partitions(alpha, *sys, {z_element(0)});
    CHECK(equivalent_mod0(single[0], alpha));
}

TEST_CASE("doubling join growth: H = n log 2") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 2)});
    auto sys = SystemAction::doubling(sp);
    auto hs = orbit_join_entropies(alpha, *sys, 10);
    for (std::size_t n = 1; n <= hs.size(); ++n)
        CHECK(hs[n - 1] == Approx(static_cast<double>(n) * std::log(2.0)).margin(1e-9));
    // the level-n join is the dyadic partition: 2^n atoms
    auto j = orbit_join_prefix(alpha, *sys, 8);
    CHECK(j.size() == 256);
}

TEST_CASE("rotation join atom count is at most 2n") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 2)});
    auto sys = SystemAction::rotation(sp, kGolden);
    for (long long n : {2, 4, 8, 16}) {
        auto j = orbit_join_prefix(alpha, *sys, n);
        CHECK(j.size() <= 2 * static_cast<std::size_t>(n));
        CHECK(entropy(j) <= std::log(2.0 * static_cast<double>(n)) + 1e-9);
    }
}

TEST_CASE("orbit join via recursion matches the direct join") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 3), rat(2, 3)});
    for (const auto& sys :
         {SystemAction::rotation(sp, rat(2, 7)), SystemAction::doubling(sp),
          SystemAction::odometer(sp, 2)}) {
        std::vector<GroupElement> window;
        for (long long i = 0; i < 5; ++i) window.push_back(z_element(i));
        auto direct = join_all(orbit_partitions(alpha, *sys, window));
        auto fast = orbit_join_prefix(alpha, *sys, 5);
        CHECK(matching_distance(direct, fast).rho_tilde_exact == 0);
    }
}

TEST_CASE("point forward maps agree with set preimages on membership") {
    auto sp = unit_interval();
    Rng rng(12);
    for (const auto& sys :
         {SystemAction::rotation(sp, rat(5, 17)), SystemAction::odometer(sp, 3)}) {
        for (int t = 0; t < 50; ++t) {
            double x = rng.next_double();
            long long k = static_cast<long long>(rng.next_below(4));
            Point p{-1, {x}};
            Point fx = point_forward(*sys, z_element(k), p);
            // A = [0, 1/2); x in (T^k)^{-1}A iff T^k x in A
            auto a = MeasurableSet::from_interval(rat(0), rat(1, 2));
            auto pre = pullback_set(z_element(k), *sys, a);
            CHECK(contains(pre, p) == (fx.coords[0] < 0.5));
        }
    }
}
