#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "pcx/partition.hpp"

using namespace pcx;
using Catch::Approx;

namespace {
SpacePtr unit_interval() {
    static SpacePtr sp = MeasureSpace::interval();
    return sp;
}

Partition halves() { return interval_partition(unit_interval(), {rat(1, 2)}); }
}  // namespace

TEST_CASE("entropy basics") {
    auto sp = unit_interval();
    CHECK(entropy(halves()) == Approx(std::log(2.0)).margin(1e-12));

    auto trivial = trivial_partition(sp);
    CHECK(entropy(trivial) == 0.0);

    // {X, empty}: the 0 log 0 convention
    Partition padded{sp, {MeasurableSet::full_like(*sp), MeasurableSet::empty_like(*sp)}};
    CHECK(entropy(padded) == 0.0);

    auto quarter = interval_partition(sp, {rat(1, 4)});
    double expected = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
    CHECK(entropy(quarter) == Approx(expected).margin(1e-12));
    CHECK(entropy(quarter) == Approx(0.5623).margin(1e-4));
}

TEST_CASE("conditional entropy basics") {
    auto sp = unit_interval();
    auto alpha = halves();
    CHECK(conditional_entropy(alpha, alpha) == Approx(0.0).margin(1e-12));
    CHECK(conditional_entropy(alpha, trivial_partition(sp)) ==
          Approx(entropy(alpha)).margin(1e-12));

    // independent two-atom partitions on four uniform points
    auto pts = MeasureSpace::uniform_points(4);
    auto a = label_partition(pts, {0, 0, 1, 1}, 2);
    auto b = label_partition(pts, {0, 1, 0, 1}, 2);
    CHECK(conditional_entropy(a, b) == Approx(std::log(2.0)).margin(1e-12));
}

TEST_CASE("join basics") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 3), rat(2, 3)});
    CHECK(equivalent_mod0(join(alpha, alpha), alpha));
    CHECK(equivalent_mod0(join(alpha, trivial_partition(sp)), alpha));

    auto pts = MeasureSpace::uniform_points(4);
    auto a = label_partition(pts, {0, 0, 1, 1}, 2);
    auto b = label_partition(pts, {0, 1, 0, 1}, 2);
    auto j = join(a, b);
    REQUIRE(j.size() == 4);
    for (const auto& atom : j.atoms) CHECK(measure(*pts, atom) == rat(1, 4));
}

TEST_CASE("refinement order") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 4)});
    auto beta = halves();
    auto j = join(alpha, beta);
    CHECK(is_finer(j, beta));
    CHECK(is_finer(j, alpha));
    CHECK_FALSE(is_finer(beta, j));

    // dyadic level-3 refines level-2
    auto lvl2 = interval_partition(sp, {rat(1, 4), rat(1, 2), rat(3, 4)});
    auto lvl3 = interval_partition(sp, {rat(1, 8), rat(1, 4), rat(3, 8), rat(1, 2), rat(5, 8),
                                        rat(3, 4), rat(7, 8)});
    CHECK(is_finer(lvl3, lvl2));
    CHECK_FALSE(is_finer(lvl2, lvl3));
}

TEST_CASE("rokhlin distance basics") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 3), rat(2, 3)});
    CHECK(rokhlin_distance(alpha, alpha).rho == Approx(0.0).margin(1e-12));
    CHECK(rokhlin_distance(alpha, trivial_partition(sp)).rho ==
          Approx(entropy(alpha)).margin(1e-12));
}

TEST_CASE("matching distance basics and permutation invariance") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 3), rat(2, 3)});
    Partition shuffled{sp, {alpha.atoms[2], alpha.atoms[0], alpha.atoms[1]}};
    CHECK(matching_distance(alpha, shuffled).rho_tilde_exact == 0);

    // {A, A^c} vs {B, B^c}: min(2 mu(A delta B), 2 mu(A delta B^c))
    auto a = MeasurableSet::from_interval(rat(0), rat(1, 2));
    auto b = MeasurableSet::from_interval(rat(1, 4), rat(5, 8));
    auto pa = indicator_partition(sp, a);
    auto pb = indicator_partition(sp, b);
    Rat d1 = measure(*sp, symmetric_difference(a, b));
    Rat d2 = measure(*sp, symmetric_difference(a, set_complement(*sp, b)));
    Rat expect = 2 * std::min(d1, d2);
    CHECK(matching_distance(pa, pb).rho_tilde_exact == expect);
}

TEST_CASE("matching distance equals factorial brute force") {
    Rng rng(2024);
    auto sp = MeasureSpace::uniform_points(12);
    for (int t = 0; t < 200; ++t) {
        int ra = 2 + static_cast<int>(rng.next_below(5));
        int rb = 2 + static_cast<int>(rng.next_below(5));
        auto alpha = oracle::random_label_partition(sp, ra, rng);
        auto beta = oracle::random_label_partition(sp, rb, rng);
        auto rep = matching_distance(alpha, beta);
        CHECK(rep.rho_tilde_exact == oracle::matching_distance_brute(alpha, beta));
        // witness attains the reported value
        const std::size_t r = std::max(alpha.size(), beta.size());
        const MeasurableSet empty = MeasurableSet::empty_like(*sp);
        Rat attained(0);
        for (std::size_t i = 0; i < r; ++i) {
            const MeasurableSet& ai = i < alpha.size() ? alpha.atoms[i] : empty;
            std::size_t j = static_cast<std::size_t>(rep.witness_permutation[i]);
            const MeasurableSet& bj = j < beta.size() ? beta.atoms[j] : empty;
            attained += measure(*sp, symmetric_difference(ai, bj));
        }
        CHECK(attained == rep.rho_tilde_exact);
    }
}

TEST_CASE("chain rule and subadditivity on random pairs") {
    Rng rng(99);
    auto sp = MeasureSpace::uniform_points(40);
    for (int t = 0; t < 500; ++t) {
        auto alpha = oracle::random_label_partition(sp, 2 + static_cast<int>(rng.next_below(4)), rng);
        auto beta = oracle::random_label_partition(sp, 2 + static_cast<int>(rng.next_below(4)), rng);
        double lhs = entropy(join(alpha, beta));
        CHECK(lhs == Approx(entropy(beta) + conditional_entropy(alpha, beta)).margin(1e-10));
        CHECK(lhs <= entropy(alpha) + entropy(beta) + 1e-10);
    }
}

TEST_CASE("metric axioms on random triples") {
    Rng rng(5);
    auto sp = MeasureSpace::uniform_points(24);
    for (int t = 0; t < 500; ++t) {
        auto a = oracle::random_label_partition(sp, 3, rng);
        auto b = oracle::random_label_partition(sp, 3, rng);
        auto c = oracle::random_label_partition(sp, 3, rng);
        double rab = rokhlin_distance(a, b).rho;
        double rba = rokhlin_distance(b, a).rho;
        CHECK(rab == Approx(rba).margin(1e-12));
        CHECK(rab <= rokhlin_distance(a, c).rho + rokhlin_distance(c, b).rho + 1e-9);
        double tab = matching_distance(a, b).rho_tilde;
        double tba = matching_distance(b, a).rho_tilde;
        CHECK(tab == Approx(tba).margin(1e-12));
        CHECK(tab <= matching_distance(a, c).rho_tilde + matching_distance(c, b).rho_tilde + 1e-9);
    }
}

TEST_CASE("rho and rho_tilde vanish together") {
    Rng rng(17);
    auto sp = MeasureSpace::uniform_points(16);
    for (int t = 0; t < 100; ++t) {
        auto a = oracle::random_label_partition(sp, 3, rng);
        auto b = oracle::random_label_partition(sp, 3, rng);
        bool rho_zero = rokhlin_distance(a, b).rho <= 1e-12;
        bool tilde_zero = matching_distance(a, b).rho_tilde_exact == 0;
        CHECK(rho_zero == tilde_zero);
    }
}

TEST_CASE("shrink family: both metrics decrease to zero") {
    // move mass t from atom 1 to atom 0 of the halves partition
    auto sp = unit_interval();
    auto alpha = halves();
    double prev_rho = 1e9, prev_tilde = 1e9;
    for (double t : {0.2, 0.1, 0.05, 0.025}) {
        Rat rt = rat_from_double(t);
        auto beta = interval_partition(sp, {rat(1, 2) + rt});
        double rho = rokhlin_distance(alpha, beta).rho;
        double tilde = matching_distance(alpha, beta).rho_tilde;
        CHECK(rho < prev_rho);
        CHECK(tilde < prev_tilde);
        prev_rho = rho;
        prev_tilde = tilde;
    }
    CHECK(prev_rho < 0.2);
    CHECK(prev_tilde < 0.11);
}

TEST_CASE("constructive refinement: beta equal to alpha") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 3), rat(2, 3)});
    auto refined = refine_from_conditional(alpha, alpha, 0.1);
    REQUIRE(refined.size() == alpha.size() + 1);
    Partition padded{sp, alpha.atoms};
    padded.atoms.push_back(MeasurableSet::empty_like(*sp));
    CHECK(matching_distance(padded, refined).rho_tilde_exact == 0);
}

TEST_CASE("constructive refinement: beta strictly finer") {
    auto sp = unit_interval();
    auto alpha = interval_partition(sp, {rat(1, 2)});
    auto beta = interval_partition(sp, {rat(1, 4), rat(1, 2), rat(5, 8)});
    REQUIRE(conditional_entropy(alpha, beta) < refine_constants(alpha.size(), 0.1).delta);
    auto refined = refine_from_conditional(alpha, beta, 0.1);
    CHECK(is_finer(beta, refined));
    Partition padded{sp, alpha.atoms};
    padded.atoms.push_back(MeasurableSet::empty_like(*sp));
    CHECK(matching_distance(padded, refined).rho_tilde_exact == 0);
}

TEST_CASE("constructive refinement: random near-refinements satisfy the contract") {
    // Point space with a sliver point so H(alpha|beta) can be tiny but nonzero.
    Rng rng(31);
    int trials = 0;
    while (trials < 100) {
        const std::size_t n = 24;
        double sliver = 2e-5;
        std::vector<double> w(n, (1.0 - sliver) / static_cast<double>(n - 1));
        w[0] = sliver;
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) sum += w[i];
        w[n - 1] = 1.0 - sum;
        auto sp = MeasureSpace::weighted_points(w);

        const int r = 2 + static_cast<int>(rng.next_below(3));
        auto beta = oracle::random_label_partition(sp, 6, rng);
        std::vector<int> alpha_labels(n, 0);
        std::vector<int> group(6);
        for (auto& gi : group) gi = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(r)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t b = 0; b < beta.size(); ++b)
                if (beta.atoms[b].mask()[i]) alpha_labels[i] = group[b];
        alpha_labels[0] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(r)));
        auto alpha = label_partition(sp, alpha_labels, r);

        const double delta = refine_constants(alpha.size(), 0.1).delta;
        if (!(conditional_entropy(alpha, beta) < delta)) continue;  // resample
        ++trials;
        auto refined = refine_from_conditional(alpha, beta, 0.1);
        CHECK(refined.size() <= alpha.size() + 1);
        CHECK(is_finer(beta, refined));
        Partition padded{sp, alpha.atoms};
        padded.atoms.push_back(MeasurableSet::empty_like(*sp));
        CHECK(matching_distance(padded, refined).rho_tilde < 0.1);
    }
}

TEST_CASE("constructive refinement: precondition is enforced") {
    auto sp = unit_interval();
    auto alpha = halves();
    auto beta = interval_partition(sp, {rat(1, 4)});
    REQUIRE(conditional_entropy(alpha, beta) > refine_constants(2, 0.1).delta);
    CHECK_THROWS_AS(refine_from_conditional(alpha, beta, 0.1), std::invalid_argument);
}

TEST_CASE("epsilon net sizes") {
    auto sp = unit_interval();
    auto alpha = halves();
    CHECK(epsilon_net_size({alpha}, 0.1, PartitionMetric::RhoTilde) == 1);
    std::vector<Partition> copies{alpha, alpha, alpha};
    CHECK(epsilon_net_size(copies, 0.1, PartitionMetric::RhoTilde) == 1);
    CHECK(epsilon_net_size(copies, 0.1, PartitionMetric::Rho) == 1);
}
