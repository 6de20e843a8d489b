#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "oracles.hpp"
#include "pcx/serialize.hpp"

using namespace pcx;

TEST_CASE("partition text round trip is bit-exact (interval)") {
    auto sp = MeasureSpace::interval();
    Rng rng(51);
    for (int t = 0; t < 50; ++t) {
        auto p = oracle::random_interval_partition(sp, 3, 8, rng);
        std::string text = partition_to_string(p);
        auto q = partition_from_string(text, sp);
        REQUIRE(q.size() == p.size());
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.atoms[i] == q.atoms[i]);
        CHECK(partition_to_string(q) == text);
    }
}

TEST_CASE("partition text round trip is bit-exact (points)") {
    auto sp = MeasureSpace::uniform_points(17);
    Rng rng(52);
    for (int t = 0; t < 50; ++t) {
        auto p = oracle::random_label_partition(sp, 4, rng);
        std::string text = partition_to_string(p);
        auto q = partition_from_string(text, sp);
        REQUIRE(q.size() == p.size());
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.atoms[i].mask() == q.atoms[i].mask());
        CHECK(partition_to_string(q) == text);
    }
}

TEST_CASE("partition text round trip covers boxes in dimension 2") {
    auto sp = MeasureSpace::interval(2);
    std::vector<Interval> a1{{rat(0), rat(1, 2)}, {rat(0), rat(1)}};
    std::vector<Interval> a2{{rat(1, 2), rat(1)}, {rat(0), rat(1, 3)}};
    std::vector<Interval> a3{{rat(1, 2), rat(1)}, {rat(1, 3), rat(1)}};
    Partition p{sp,
                {MeasurableSet::from_boxes(BoxSet::from_flat(2, a1)),
                 MeasurableSet::from_boxes(BoxSet::from_flat(2, a2)),
                 MeasurableSet::from_boxes(BoxSet::from_flat(2, a3))}};
    std::string text = partition_to_string(p);
    auto q = partition_from_string(text, sp);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.atoms[i] == q.atoms[i]);
}

TEST_CASE("partition reader rejects mismatched spaces and garbage") {
    auto sp = MeasureSpace::interval();
    auto p = interval_partition(sp, {rat(1, 2)});
    std::string text = partition_to_string(p);
    auto pts = MeasureSpace::uniform_points(4);
    CHECK_THROWS_AS(partition_from_string(text, pts), std::invalid_argument);
    CHECK_THROWS_AS(partition_from_string("nonsense", nullptr), std::invalid_argument);
}

TEST_CASE("deterministic number formatting") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_rat(rat(2, 4)) == "1/2");
    CHECK(format_rat(Rat(7)) == "7");
}

TEST_CASE("csv emission and parsing round trip") {
    CsvTable t;
    t.header = {"n", "cover_size", "solver"};
    t.rows = {{"4", "15", "greedy"}, {"8", "231", "greedy"}};
    std::string s = t.to_string();
    CHECK(s == "n,cover_size,solver\n4,15,greedy\n8,231,greedy\n");
    auto back = parse_csv(s);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
}

TEST_CASE("plot data merges profiles in long format") {
    namespace fs = std::filesystem;
    fs::create_directories("test_out");
    CsvTable t;
    t.header = {"n", "cover_size", "solver", "covered_mass", "wall_time_ms"};
    t.rows = {{"4", "15", "greedy", "0.9375", "na"}, {"8", "231", "greedy", "0.90234375", "na"}};
    write_text_file("test_out/demo_profile.csv", t.to_string());

    auto table = plot_data_from_profiles({"test_out/demo_profile.csv"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0] == std::vector<std::string>{"demo_profile", "4", "15", "cover_size"});

    auto empty = plot_data_from_profiles({});
    CHECK(empty.rows.empty());
    CHECK(empty.header == std::vector<std::string>{"experiment", "n", "value", "quantity"});
}
