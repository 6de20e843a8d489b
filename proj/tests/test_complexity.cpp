#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "oracles.hpp"
#include "pcx/block_family.hpp"
#include "pcx/covering.hpp"
#include "pcx/name_table.hpp"

using namespace pcx;

namespace {
SpacePtr unit_interval() {
    static SpacePtr sp = MeasureSpace::interval();
    return sp;
}
const Rat kGolden = rat(832040, 1346269);

std::vector<GroupElement> prefix_window(long long n) {
    std::vector<GroupElement> w;
    for (long long i = 0; i < n; ++i) w.push_back(z_element(i));
    return w;
}

NameTable random_table(Rng& rng) {
    auto sp = MeasureSpace::uniform_points(16);
    std::vector<Partition> fam;
    int parts = 2 + static_cast<int>(rng.next_below(3));
    for (int i = 0; i < parts; ++i) fam.push_back(oracle::random_label_partition(sp, 2, rng));
    return build_name_table_cells(fam);
}
}  // namespace

TEST_CASE("name table cell counts") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 4), rat(1, 2)});
    auto single = build_name_table_cells({alpha});
    CHECK(single.cell_count == 3);
    CHECK(single.total_weight == 1);

    // doubling: 2^n cells of weight 2^-n
    auto dbl = SystemAction::doubling(sp);
    auto halves = interval_partition(sp, {rat(1, 2)});
    auto orbit = orbit_partitions(halves, *dbl, prefix_window(6));
    auto table = build_name_table_cells(orbit);
    CHECK(table.cell_count == 64);
    for (const auto& w : table.weights) CHECK(w == rat(1, 64));

    // rotation: at most 2n cells
    auto rot = SystemAction::rotation(sp, kGolden);
    auto rorbit = orbit_partitions(halves, *rot, prefix_window(12));
    auto rtable = build_name_table_cells(rorbit);
    CHECK(rtable.cell_count <= 24);
    CHECK(rtable.total_weight == 1);
}

TEST_CASE("hamming distance on names") {
    auto sp = unit_interval();
    auto halves = interval_partition(sp, {rat(1, 2)});
    auto table = build_name_table_cells({halves, halves, halves, halves});
    std::vector<std::uint8_t> u{0, 0, 0, 0}, v{0, 0, 0, 1}, w{1, 1, 1, 1};
    CHECK(hamming_distance(table, u, u) == 0);
    CHECK(hamming_distance(table, u, v) == rat(1, 4));
    CHECK(hamming_distance(table, u, w) == 1);
    std::vector<std::uint8_t> short_name{0, 1};
    CHECK_THROWS_AS(hamming_distance(table, short_name, u), std::invalid_argument);

    auto one = build_name_table_cells({halves});
    CHECK(hamming_distance(one, {0}, {1}) == 1);
    CHECK(hamming_distance(one, {0}, {0}) == 0);
}

TEST_CASE("hamming triangle inequality (exact)") {
    auto sp = unit_interval();
    auto halves = interval_partition(sp, {rat(1, 2)});
    std::vector<Partition> fam(5, halves);
    auto table = build_name_table_cells(fam);
    Rng rng(4);
    for (int t = 0; t < 500; ++t) {
        auto mk = [&]() {
            std::vector<std::uint8_t> v(5);
            for (auto& x : v) x = static_cast<std::uint8_t>(rng.next_below(2));
            return v;
        };
        auto a = mk(), b = mk(), c = mk();
        CHECK(hamming_distance(table, a, b) <=
              hamming_distance(table, a, c) + hamming_distance(table, c, b));
    }
}

TEST_CASE("covering number small examples") {
    auto sp = unit_interval();
    // single trivial partition: one cell, one ball
    auto trivial = trivial_partition(sp);
    auto t0 = build_name_table_cells({trivial});
    CHECK(covering_number(t0, rat(1, 10), CoverSolver::Greedy).cover_size == 1);
    CHECK(covering_number(t0, rat(1, 10), CoverSolver::Exact).cover_size == 1);

    // uniform 2-atom partition at eps = 2/5: one atom holds mass 1/2 <= 3/5
    auto halves = interval_partition(sp, {rat(1, 2)});
    auto t1 = build_name_table_cells({halves});
    auto entry = covering_number(t1, rat(2, 5), CoverSolver::Exact);
    CHECK(entry.cover_size == 2);
    std::vector<std::vector<std::size_t>> balls{{0}, {1}};
    CHECK(oracle::min_cover_brute(balls, t1.weights, Rat(3, 5)) == 2);
}

TEST_CASE("greedy is an upper bound for exact; exact matches subset brute force") {
    Rng rng(77);
    for (int t = 0; t < 100; ++t) {
        NameTable table = random_table(rng);
        if (table.cell_count > 20) continue;
        Rat eps(1 + static_cast<long>(rng.next_below(3)), 10);
        eps.canonicalize();
        auto greedy = covering_number(table, eps, CoverSolver::Greedy);
        auto exact = covering_number(table, eps, CoverSolver::Exact);
        CHECK(greedy.cover_size >= exact.cover_size);
        CHECK(greedy.covered_mass > Rat(1) - eps);
        CHECK(exact.covered_mass > Rat(1) - eps);
        if (table.cell_count <= 12) {
            int k_max = detail::hamming_radius_count(eps, table.num_partitions);
            std::vector<std::vector<std::size_t>> balls(table.cell_count);
            for (std::size_t a = 0; a < table.cell_count; ++a)
                for (std::size_t b = 0; b < table.cell_count; ++b)
                    if (hamming_count(table, a, b) <= k_max) balls[a].push_back(b);
            CHECK(exact.cover_size ==
                  oracle::min_cover_brute(balls, table.weights, Rat(1) - eps));
        }
    }
}

TEST_CASE("covering number is non-increasing in eps") {
    auto sp = unit_interval();
    auto halves = interval_partition(sp, {rat(1, 2)});
    auto dbl = SystemAction::doubling(sp);
    auto table = build_name_table_cells(orbit_partitions(halves, *dbl, prefix_window(8)));
    std::size_t prev = table.cell_count + 1;
    for (Rat eps : {rat(1, 20), rat(1, 10), rat(1, 5), rat(2, 5)}) {
        auto entry = covering_number(table, eps, CoverSolver::Greedy);
        CHECK(entry.cover_size <= prev);
        prev = entry.cover_size;
    }
}

TEST_CASE("covering number bounded by cell count") {
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        NameTable table = random_table(rng);
        auto entry = covering_number(table, rat(1, 10), CoverSolver::Greedy);
        CHECK(entry.cover_size <= table.cell_count);
        double bound = 1.0;
        for (int ac : table.atom_counts) bound *= ac;
        CHECK(static_cast<double>(table.cell_count) <= bound);
    }
}

TEST_CASE("pullback invariance of exact covering numbers") {
    auto sp = unit_interval();
    auto rot = SystemAction::rotation(sp, kGolden);
    auto halves = interval_partition(sp, {rat(1, 2)});
    auto fam = orbit_partitions(halves, *rot, prefix_window(4));
    CHECK(invariance_check(fam, z_element(0), *rot, rat(1, 4)));
    CHECK(invariance_check(fam, z_element(3), *rot, rat(1, 4)));
    CHECK(invariance_check(fam, z_element(-2), *rot, rat(1, 10)));

    Rng rng(21);
    auto pts = MeasureSpace::uniform_points(10);
    for (int t = 0; t < 25; ++t) {
        std::vector<long> perm(10);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 9; i > 0; --i)
            std::swap(perm[i], perm[rng.next_below(i + 1)]);
        auto sys = SystemAction::finite_permutation(pts, perm);
        std::vector<Partition> family;
        int k = 2 + static_cast<int>(rng.next_below(2));
        for (int i = 0; i < k; ++i) family.push_back(oracle::random_label_partition(pts, 2, rng));
        long long g = static_cast<long long>(rng.next_below(9)) - 4;
        CHECK(invariance_check(family, z_element(g), *sys, rat(1, 4)));
    }
}

TEST_CASE("complexity profile verdicts") {
    auto sp = unit_interval();
    auto halves = interval_partition(sp, {rat(1, 2)});
    auto dbl = SystemAction::doubling(sp);

    std::vector<std::vector<GroupElement>> windows{prefix_window(2), prefix_window(3),
                                                   prefix_window(4)};
    auto profile = complexity_profile(halves, *dbl, windows, rat(1, 10));
    REQUIRE(profile.entries.size() == 3);
    CHECK(profile.entries[0].cover_size == 4);
    CHECK(profile.entries[1].cover_size == 8);
    CHECK(profile.entries[2].cover_size == 15);
    CHECK(profile.verdict == ProfileVerdict::Growing);

    std::vector<std::vector<GroupElement>> same(3, std::vector<GroupElement>{z_element(0)});
    auto flat = complexity_profile(halves, *dbl, same, rat(1, 10));
    CHECK(flat.verdict == ProfileVerdict::BoundedPlateau);
    CHECK(flat.entries[0].cover_size == flat.entries[2].cover_size);

    // exact spot check at n = 4: the mass bound forces 15 of 16 singleton balls
    auto table = build_name_table_cells(orbit_partitions(halves, *dbl, prefix_window(4)));
    CHECK(covering_number(table, rat(1, 10), CoverSolver::Exact).cover_size == 15);
}

TEST_CASE("sample-mode tables approximate cell weights") {
    auto sp = unit_interval();
    auto halves = interval_partition(sp, {rat(1, 2)});
    auto dbl = SystemAction::doubling(sp);
    auto orbit = orbit_partitions(halves, *dbl, prefix_window(3));
    auto sampled = build_name_table_samples(orbit, 20000, 7);
    CHECK(sampled.cell_count == 8);
    for (const auto& w : sampled.weights) {
        double err = std::abs(to_double(w) - 0.125);
        CHECK(err < 0.02);
    }
    auto again = build_name_table_samples(orbit, 20000, 7);
    CHECK(sampled.names == again.names);
    CHECK(sampled.weights == again.weights);
}

TEST_CASE("block family diagnostic: trivial partition gives one block") {
    auto sp = unit_interval();
    auto rot = SystemAction::rotation(sp, kGolden);
    auto trivial = trivial_partition(sp);
    std::vector<std::vector<GroupElement>> windows{prefix_window(4), prefix_window(8)};
    auto rep = mean_equicontinuity_diagnostic(trivial, *rot, windows, rat(1, 5));
    CHECK(rep.success);
    CHECK(rep.blocks.size() == 1);
    CHECK(rep.covered_mass == 1);
}

TEST_CASE("block family diagnostic: rotation succeeds at eps = 1/5") {
    auto sp = unit_interval();
    auto rot = SystemAction::rotation(sp, kGolden);
    auto halves = interval_partition(sp, {rat(1, 2)});
    std::vector<std::vector<GroupElement>> windows{prefix_window(16), prefix_window(32),
                                                   prefix_window(64)};
    auto rep = mean_equicontinuity_diagnostic(halves, *rot, windows, rat(1, 5));
    INFO("blocks=" << rep.blocks.size() << " cap=" << rep.attempted_cardinality
                   << " covered=" << to_double(rep.covered_mass));
    CHECK(rep.success);
    CHECK(rep.blocks.size() <= rep.attempted_cardinality);
    CHECK(rep.covered_mass > rat(4, 5));
    CHECK(rep.max_within_block_hamming < rat(1, 5));

    // one representative per block is a radius-eps covering witness in every
    // window: the union of those balls keeps mass above 1 - eps
    detail::JointTable jt = detail::build_joint_table(halves, *rot, windows);
    for (std::size_t w = 0; w < windows.size(); ++w) {
        int k_full = detail::hamming_radius_count(rat(1, 5), jt.window_coords[w].size());
        std::vector<bool> covered(jt.table.cell_count, false);
        for (const auto& block : rep.blocks) {
            std::size_t center = block.front();
            for (std::size_t c = 0; c < jt.table.cell_count; ++c) {
                int d = 0;
                for (std::size_t coord : jt.window_coords[w])
                    d += (jt.table.name(center)[coord] != jt.table.name(c)[coord]);
                if (d <= k_full) covered[c] = true;
            }
        }
        Rat mass(0);
        for (std::size_t c = 0; c < jt.table.cell_count; ++c)
            if (covered[c]) mass += jt.table.weights[c];
        CHECK(mass > rat(4, 5));
    }
}

TEST_CASE("block family diagnostic: doubling fails with the ball-mass certificate") {
    auto sp = unit_interval();
    auto dbl = SystemAction::doubling(sp);
    auto halves = interval_partition(sp, {rat(1, 2)});
    std::vector<std::vector<GroupElement>> windows;
    for (long long n = 1; n <= 12; ++n) windows.push_back(prefix_window(n));
    auto rep = mean_equicontinuity_diagnostic(halves, *dbl, windows, rat(1, 5));
    CHECK_FALSE(rep.success);
    // joint eps-ball around any cell: one exact pattern count (1 + 7 + 11)
    CHECK(rep.max_joint_ball_mass == Rat(19, 4096));
    CHECK(rep.min_family_cardinality == 173);
    CHECK(rep.witness_hamming >= rat(1, 5));
}
