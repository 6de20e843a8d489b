// Declarative experiment configs and the deterministic runner behind the
// CLI: parse + validate a JSON config, execute the requested quantity, and
// write byte-stable CSV/JSON artifacts.
#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcx/amenable.hpp"
#include "pcx/block_family.hpp"
#include "pcx/common.hpp"
#include "pcx/covering.hpp"
#include "pcx/dynamics.hpp"
#include "pcx/pattern_entropy.hpp"
#include "pcx/serialize.hpp"

namespace pcx {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Exact rational from "p/q" or a decimal literal like "0.1".
inline Rat parse_exact_number(const std::string& text, const std::string& field) {
    try {
        if (text.find('/') != std::string::npos) return parse_rat(text);
        auto dot = text.find('.');
        if (dot == std::string::npos) return parse_rat(text);
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::string denom = "1" + std::string(text.size() - dot - 1, '0');
        Rat q(digits + "/" + denom, 10);
        q.canonicalize();
        return q;
    } catch (const std::exception&) {
        throw config_error(field, "cannot parse exact number in field '" + field + "': " + text);
    }
}

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string name;
    std::string quantity;
    SystemPtr system;                 // absent for tempered_check
    std::optional<Partition> partition;
    std::vector<std::vector<GroupElement>> windows;
    FolnerSequence folner;            // parallel view of `windows`
    bool has_epsilon = false;
    Rat epsilon;
    CoverSolver solver = CoverSolver::Greedy;
    PatternStrategy strategy = PatternStrategy::Exhaustive;
    std::size_t beam_width = 4;
    std::vector<std::size_t> n_values;
    std::size_t samples = 10000;
    std::size_t n_max = 0;
    std::uint64_t seed = 0;
    std::string log_base = "nat";
    bool emit_timings = false;
    std::string out_csv, out_json;
    json raw;
};

namespace detail_cfg {

inline const json& require(const json& j, const std::string& field) {
    auto it = j.find(field);
    if (it == j.end()) throw config_error(field, "missing required field: " + field);
    return *it;
}

inline std::string require_string(const json& j, const std::string& field) {
    const json& v = require(j, field);
    if (!v.is_string()) throw config_error(field, "field must be a string: " + field);
    return v.get<std::string>();
}

inline SystemPtr parse_system(const json& j) {
    std::string kind = require_string(j, "kind");
    if (kind == "rotation") {
        return SystemAction::rotation(MeasureSpace::interval(),
                                      parse_exact_number(require_string(j, "angle"), "angle"));
    }
    if (kind == "doubling") return SystemAction::doubling(MeasureSpace::interval());
    if (kind == "odometer") {
        const json& b = require(j, "base");
        if (!b.is_number_integer()) throw config_error("base", "odometer base must be an integer");
        return SystemAction::odometer(MeasureSpace::interval(), b.get<int>());
    }
    if (kind == "finite_permutation") {
        const json& p = require(j, "perm");
        if (!p.is_array() || p.empty())
            throw config_error("perm", "perm must be a nonempty array");
        std::vector<long> perm;
        for (const auto& v : p) perm.push_back(v.get<long>());
        SpacePtr space;
        if (j.contains("weights")) {
            std::vector<double> w;
            for (const auto& v : j["weights"]) w.push_back(v.get<double>());
            space = MeasureSpace::weighted_points(std::move(w));
        } else {
            space = MeasureSpace::uniform_points(perm.size());
        }
        return SystemAction::finite_permutation(std::move(space), std::move(perm));
    }
    if (kind == "torus_rotation") {
        const json& a = require(j, "angles");
        if (!a.is_array() || a.empty())
            throw config_error("angles", "angles must be a nonempty array");
        std::vector<Rat> angles;
        for (const auto& v : a)
            angles.push_back(parse_exact_number(v.get<std::string>(), "angles"));
        return SystemAction::torus_rotation(MeasureSpace::interval(static_cast<int>(angles.size())),
                                            std::move(angles));
    }
    if (kind == "product") {
        const json& f = require(j, "factors");
        if (!f.is_array() || f.empty())
            throw config_error("factors", "factors must be a nonempty array");
        std::vector<SystemPtr> factors;
        for (const auto& v : f) factors.push_back(parse_system(v));
        return SystemAction::product(std::move(factors));
    }
    throw config_error("kind", "unknown system kind: " + kind);
}

inline Partition parse_partition(const json& j, const SpacePtr& space) {
    std::string type = require_string(j, "type");
    if (type == "trivial") return trivial_partition(space);
    if (type == "interval_cuts") {
        const json& c = require(j, "cuts");
        std::vector<Rat> cuts;
        for (const auto& v : c) cuts.push_back(parse_exact_number(v.get<std::string>(), "cuts"));
        if (space->backend() != Backend::IntervalAlgebra || space->dim() != 1)
            throw config_error("partition", "interval_cuts needs a 1-d interval system");
        return interval_partition(space, cuts);
    }
    if (type == "interval_atoms") {
        const json& a = require(j, "atoms");
        if (!a.is_array() || a.empty()) throw config_error("atoms", "atoms must be nonempty");
        std::vector<MeasurableSet> atoms;
        const int dim = space->dim();
        for (const auto& atom_spec : a) {
            std::vector<Interval> flat;
            for (const auto& box : atom_spec) {
                std::string text = box.get<std::string>();
                std::size_t start = 0;
                int axes = 0;
                while (start <= text.size()) {
                    std::size_t comma = text.find(',', start);
                    std::string range = text.substr(
                        start, comma == std::string::npos ? std::string::npos : comma - start);
                    std::size_t dots = range.find("..");
                    if (dots == std::string::npos)
                        throw config_error("atoms", "bad interval range: " + range);
                    flat.push_back({parse_exact_number(range.substr(0, dots), "atoms"),
                                    parse_exact_number(range.substr(dots + 2), "atoms")});
                    ++axes;
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                if (axes != dim) throw config_error("atoms", "box dimension mismatch");
            }
            atoms.push_back(MeasurableSet::from_boxes(BoxSet::from_flat(dim, std::move(flat))));
        }
        return make_partition(space, std::move(atoms));
    }
    if (type == "point_labels") {
        const json& l = require(j, "labels");
        std::vector<int> labels;
        for (const auto& v : l) labels.push_back(v.get<int>());
        int r = 0;
        for (int v : labels) r = std::max(r, v + 1);
        if (j.contains("r")) r = j["r"].get<int>();
        return label_partition(space, labels, r);
    }
    throw config_error("type", "unknown partition type: " + type);
}

inline void parse_windows(const json& j, int rank, ExperimentConfig& cfg) {
    std::string type = require_string(j, "type");
    if (type == "boxes") {
        int dim = rank;
        if (j.contains("dim")) dim = j["dim"].get<int>();
        const json& s = require(j, "sizes");
        std::vector<long long> sizes;
        for (const auto& v : s) sizes.push_back(v.get<long long>());
        if (sizes.empty()) throw config_error("sizes", "sizes must be nonempty");
        cfg.folner = folner_boxes(dim, sizes);
        cfg.windows = cfg.folner.windows;
        return;
    }
    if (type == "explicit") {
        const json& e = require(j, "elements");
        if (!e.is_array() || e.empty())
            throw config_error("elements", "elements must be a nonempty array of windows");
        cfg.folner.dim = rank;
        cfg.folner.boxes = false;
        for (const auto& window : e) {
            std::vector<GroupElement> w;
            for (const auto& g : window) {
                GroupElement elem;
                for (const auto& v : g) elem.push_back(v.get<long long>());
                w.push_back(std::move(elem));
            }
            if (w.empty()) throw config_error("elements", "windows must be nonempty");
            cfg.windows.push_back(w);
            cfg.folner.windows.push_back(std::move(w));
        }
        return;
    }
    throw config_error("type", "unknown windows type: " + type);
}

}  // namespace detail_cfg

inline ExperimentConfig parse_config(const json& j) {
    using namespace detail_cfg;
    ExperimentConfig cfg;
    cfg.raw = j;
    const json& sv = require(j, "schema_version");
    if (!sv.is_number_integer() || sv.get<int>() != kSchemaVersion)
        throw config_error("schema_version", "unsupported schema_version");
    cfg.name = require_string(j, "name");
    cfg.quantity = require_string(j, "quantity");
    static const std::vector<std::string> kQuantities{
        "entropy_profile", "complexity_profile", "pattern_entropy",
        "metric_profile",  "crosscheck",         "tempered_check"};
    if (std::find(kQuantities.begin(), kQuantities.end(), cfg.quantity) == kQuantities.end())
        throw config_error("quantity", "unknown quantity: " + cfg.quantity);

    const bool needs_system = cfg.quantity != "tempered_check";
    const bool needs_partition = cfg.quantity == "entropy_profile" ||
                                 cfg.quantity == "complexity_profile" ||
                                 cfg.quantity == "pattern_entropy" || cfg.quantity == "crosscheck";
    const bool needs_epsilon = cfg.quantity == "complexity_profile" ||
                               cfg.quantity == "metric_profile" || cfg.quantity == "crosscheck";

    if (needs_system) cfg.system = parse_system(require(j, "system"));
    if (needs_partition)
        cfg.partition = parse_partition(require(j, "partition"), cfg.system->space());
    detail_cfg::parse_windows(require(j, "windows"), needs_system ? cfg.system->group_rank() : 1,
                              cfg);
    if (needs_epsilon) {
        cfg.epsilon = parse_exact_number(require_string(j, "epsilon"), "epsilon");
        if (!(cfg.epsilon > 0 && cfg.epsilon < 1))
            throw config_error("epsilon", "epsilon must lie strictly between 0 and 1");
        cfg.has_epsilon = true;
    }
    if (j.contains("solver")) {
        std::string s = j["solver"].get<std::string>();
        if (s == "greedy")
            cfg.solver = CoverSolver::Greedy;
        else if (s == "exact")
            cfg.solver = CoverSolver::Exact;
        else
            throw config_error("solver", "solver must be greedy or exact");
    }
    if (j.contains("strategy")) {
        std::string s = j["strategy"].get<std::string>();
        if (s == "exhaustive")
            cfg.strategy = PatternStrategy::Exhaustive;
        else if (s == "greedy")
            cfg.strategy = PatternStrategy::Greedy;
        else if (s == "beam")
            cfg.strategy = PatternStrategy::Beam;
        else
            throw config_error("strategy", "strategy must be exhaustive, greedy or beam");
    }
    if (j.contains("beam_width")) cfg.beam_width = j["beam_width"].get<std::size_t>();
    if (cfg.quantity == "pattern_entropy") {
        const json& nv = require(j, "n_values");
        for (const auto& v : nv) cfg.n_values.push_back(v.get<std::size_t>());
        if (cfg.n_values.empty()) throw config_error("n_values", "n_values must be nonempty");
        if (cfg.windows.size() != 1)
            throw config_error("windows", "pattern_entropy takes exactly one window (the set S)");
    }
    if (cfg.quantity == "metric_profile" || cfg.quantity == "crosscheck") {
        if (j.contains("samples")) cfg.samples = j["samples"].get<std::size_t>();
        if (cfg.samples == 0) throw config_error("samples", "samples must be positive");
    }
    if (cfg.quantity == "tempered_check") {
        cfg.n_max = cfg.windows.size();
        if (j.contains("n_max")) cfg.n_max = j["n_max"].get<std::size_t>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("log_base")) {
        cfg.log_base = j["log_base"].get<std::string>();
        if (cfg.log_base != "nat" && cfg.log_base != "bit")
            throw config_error("log_base", "log_base must be nat or bit");
    }
    if (j.contains("emit_timings")) cfg.emit_timings = j["emit_timings"].get<bool>();
    cfg.out_csv = cfg.name + ".csv";
    cfg.out_json = cfg.name + ".json";
    if (j.contains("out")) {
        const json& o = j["out"];
        if (o.contains("csv")) cfg.out_csv = o["csv"].get<std::string>();
        if (o.contains("json")) cfg.out_json = o["json"].get<std::string>();
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("(file)", std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> log_base;
    int threads = 1;
};

struct RunResult {
    std::string verdict;
    std::string summary;
    std::vector<std::string> artifacts;
};

namespace detail_run {

inline double display_entropy(double nats, const std::string& log_base) {
    return log_base == "bit" ? nats / std::log(2.0) : nats;
}

class StopWatch {
  public:
    void start() { t0_ = std::chrono::steady_clock::now(); }
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

inline json base_metadata(const ExperimentConfig& cfg) {
    json meta;
    meta["schema_version"] = kSchemaVersion;
    meta["name"] = cfg.name;
    meta["quantity"] = cfg.quantity;
    meta["seed"] = cfg.seed;
    meta["log_base"] = cfg.log_base;
    if (cfg.has_epsilon) meta["epsilon"] = format_rat(cfg.epsilon);
    if (cfg.raw.contains("system")) meta["system"] = cfg.raw["system"];
    if (cfg.raw.contains("partition")) meta["partition"] = cfg.raw["partition"];
    if (cfg.raw.contains("windows")) meta["windows"] = cfg.raw["windows"];
    meta["conventions"] = {
        {"entropy_unit", cfg.log_base == "bit" ? "bits" : "nats"},
        {"plateau_rule", "last three profile entries equal"},
        {"growing_rule", "last entry at least twice the first"},
        {"covering_inequality", "covered mass strictly exceeds 1 - epsilon"},
        {"zero_trend_threshold", "p_star(n_max)/n_max below 0.15 * log(atom count)"}};
    return meta;
}

}  // namespace detail_run

// Executes the experiment; artifacts land in out_dir. Deterministic: the
// same config and seed produce byte-identical CSV and JSON files.
inline RunResult run_experiment(ExperimentConfig cfg, const std::string& out_dir,
                                const RunOverrides& overrides = {}) {
    namespace fs = std::filesystem;
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.log_base) cfg.log_base = *overrides.log_base;
    fs::create_directories(out_dir);
    const std::string csv_path = (fs::path(out_dir) / cfg.out_csv).string();
    const std::string json_path = (fs::path(out_dir) / cfg.out_json).string();

    RunResult result;
    json meta = detail_run::base_metadata(cfg);
    CsvTable csv;
    detail_run::StopWatch watch;

    auto time_cell = [&](long long ms) {
        return cfg.emit_timings ? std::to_string(ms) : std::string("na");
    };

    if (cfg.quantity == "entropy_profile") {
        csv.header = {"n", "entropy", "normalized"};
        std::vector<std::pair<std::size_t, double>> values;  // (n, H)
        const bool prefix = cfg.folner.boxes && cfg.folner.dim == 1;
        if (prefix) {
            long long n_top = cfg.folner.sizes.back();
            auto hs = orbit_join_entropies(*cfg.partition, *cfg.system, n_top);
            for (long long n : cfg.folner.sizes)
                values.emplace_back(static_cast<std::size_t>(n),
                                    hs[static_cast<std::size_t>(n - 1)]);
        } else {
            for (const auto& window : cfg.windows)
                values.emplace_back(window.size(),
                                    entropy(join_all(orbit_partitions(*cfg.partition, *cfg.system,
                                                                      window))));
        }
        json entries = json::array();
        for (const auto& [n, h] : values) {
            double hd = detail_run::display_entropy(h, cfg.log_base);
            double norm = hd / static_cast<double>(n);
            csv.rows.push_back({std::to_string(n), format_double(hd), format_double(norm)});
            entries.push_back({{"n", n}, {"entropy", hd}, {"normalized", norm}});
        }
        meta["entries"] = entries;
        double trend = values.empty() ? 0.0
                                      : detail_run::display_entropy(values.back().second,
                                                                    cfg.log_base) /
                                            static_cast<double>(values.back().first);
        meta["trend_normalized_entropy"] = trend;
        result.verdict = "trend";
        result.summary = cfg.name + ": normalized entropy at largest window = " +
                         format_double(trend);
    } else if (cfg.quantity == "complexity_profile") {
        csv.header = {"n", "cover_size", "solver", "covered_mass", "wall_time_ms"};
        json entries = json::array();
        std::vector<CoverEntry> profile_entries;
        for (const auto& window : cfg.windows) {
            watch.start();
            auto orbit = orbit_partitions(*cfg.partition, *cfg.system, window);
            auto table = build_name_table_cells(orbit);
            auto entry = covering_number(table, cfg.epsilon, cfg.solver);
            entry.window_size = window.size();
            long long ms = watch.ms();
            csv.rows.push_back({std::to_string(entry.window_size),
                                std::to_string(entry.cover_size), entry.solver,
                                format_double(to_double(entry.covered_mass)), time_cell(ms)});
            json je{{"n", entry.window_size},
                    {"cover_size", entry.cover_size},
                    {"solver", entry.solver},
                    {"covered_mass", format_rat(entry.covered_mass)}};
            if (cfg.emit_timings) je["wall_time_ms"] = ms;
            entries.push_back(std::move(je));
            profile_entries.push_back(std::move(entry));
        }
        ProfileVerdict verdict = profile_verdict(profile_entries);
        meta["entries"] = entries;
        meta["verdict"] = verdict_name(verdict);
        result.verdict = verdict_name(verdict);
        result.summary = cfg.name + ": verdict " + result.verdict;
    } else if (cfg.quantity == "pattern_entropy") {
        csv.header = {"n", "p_star", "strategy", "bound_kind", "ratio"};
        auto est = max_pattern_entropy_estimate(*cfg.partition, *cfg.system, cfg.windows[0],
                                                cfg.n_values, cfg.strategy, cfg.beam_width);
        json entries = json::array();
        bool all_exact = true;
        for (const auto& e : est.entries) {
            double p = detail_run::display_entropy(e.p_star, cfg.log_base);
            double ratio = p / static_cast<double>(e.n);
            const char* strat = e.strategy == PatternStrategy::Exhaustive ? "exhaustive"
                                : e.strategy == PatternStrategy::Greedy   ? "greedy"
                                                                          : "beam";
            const char* kind = e.bound_kind == BoundKind::Exact ? "exact" : "lower_bound";
            all_exact = all_exact && e.bound_kind == BoundKind::Exact;
            csv.rows.push_back({std::to_string(e.n), format_double(p), strat, kind,
                                format_double(ratio)});
            entries.push_back({{"n", e.n},
                               {"p_star", p},
                               {"strategy", strat},
                               {"bound_kind", kind},
                               {"ratio", ratio}});
        }
        meta["entries"] = entries;
        meta["rate"] = detail_run::display_entropy(est.rate, cfg.log_base);
        meta["zero_trend_threshold"] =
            detail_run::display_entropy(est.zero_threshold, cfg.log_base);
        meta["verdict"] = est.verdict;
        if (all_exact) {
            auto fk = fekete_rate(est.entries);
            meta["fekete_upper_bound"] = detail_run::display_entropy(fk.rate, cfg.log_base);
            meta["fekete_attained_n"] = fk.attained_n;
        }
        result.verdict = est.verdict;
        result.summary = cfg.name + ": verdict " + est.verdict;
    } else if (cfg.quantity == "metric_profile") {
        csv.header = {"n", "cover_size", "solver", "covered_mass", "wall_time_ms"};
        json entries = json::array();
        MetricProfile profile;
        profile.epsilon = to_double(cfg.epsilon);
        for (const auto& window : cfg.windows) {
            watch.start();
            auto entry = metric_covering_number(*cfg.system, window, to_double(cfg.epsilon),
                                                cfg.samples, cfg.seed);
            long long ms = watch.ms();
            csv.rows.push_back({std::to_string(entry.window_size),
                                std::to_string(entry.cover_size), entry.solver,
                                format_double(entry.covered_mass), time_cell(ms)});
            json je{{"n", entry.window_size},
                    {"cover_size", entry.cover_size},
                    {"solver", entry.solver},
                    {"covered_mass", entry.covered_mass}};
            if (cfg.emit_timings) je["wall_time_ms"] = ms;
            entries.push_back(std::move(je));
            profile.entries.push_back(std::move(entry));
        }
        std::vector<CoverEntry> shim;
        for (const auto& e : profile.entries) {
            CoverEntry c;
            c.cover_size = e.cover_size;
            shim.push_back(std::move(c));
        }
        ProfileVerdict verdict = profile_verdict(shim);
        meta["entries"] = entries;
        meta["samples"] = cfg.samples;
        meta["center_policy"] = "sampled points; values upper-bound the sampled covering number";
        meta["verdict"] = verdict_name(verdict);
        result.verdict = verdict_name(verdict);
        result.summary = cfg.name + ": verdict " + result.verdict;
    } else if (cfg.quantity == "crosscheck") {
        auto rep = theorem5_crosscheck(*cfg.partition, *cfg.system, cfg.folner, cfg.epsilon,
                                       cfg.samples, cfg.seed, cfg.solver);
        csv.header = {"profile", "verdict"};
        csv.rows.push_back({"partition", verdict_name(rep.partition_verdict)});
        csv.rows.push_back({"metric", verdict_name(rep.metric_verdict)});
        csv.rows.push_back({"agree", rep.agree ? "yes" : "no"});

        // the two underlying profiles as separate artifacts
        CsvTable pcsv;
        pcsv.header = {"n", "cover_size", "solver", "covered_mass", "wall_time_ms"};
        for (const auto& e : rep.partition_profile.entries)
            pcsv.rows.push_back({std::to_string(e.window_size), std::to_string(e.cover_size),
                                 e.solver, format_double(to_double(e.covered_mass)), "na"});
        CsvTable mcsv;
        mcsv.header = {"n", "cover_size", "solver", "covered_mass", "wall_time_ms"};
        for (const auto& e : rep.metric_profile_result.entries)
            mcsv.rows.push_back({std::to_string(e.window_size), std::to_string(e.cover_size),
                                 e.solver, format_double(e.covered_mass), "na"});
        std::string stem = csv_path.substr(0, csv_path.size() - 4);
        write_text_file(stem + ".partition.csv", pcsv.to_string());
        write_text_file(stem + ".metric.csv", mcsv.to_string());
        result.artifacts.push_back(stem + ".partition.csv");
        result.artifacts.push_back(stem + ".metric.csv");

        meta["partition_verdict"] = verdict_name(rep.partition_verdict);
        meta["metric_verdict"] = verdict_name(rep.metric_verdict);
        meta["agree"] = rep.agree;
        meta["samples"] = cfg.samples;
        result.verdict = rep.agree ? "agree" : "disagree";
        result.summary = cfg.name + ": partition=" +
                         std::string(verdict_name(rep.partition_verdict)) +
                         " metric=" + verdict_name(rep.metric_verdict) +
                         " agree=" + (rep.agree ? "yes" : "no");
    } else if (cfg.quantity == "tempered_check") {
        auto rep = temperedness_profile(cfg.folner, cfg.n_max);
        csv.header = {"n", "c_num", "c_den", "c_value"};
        json entries = json::array();
        for (std::size_t i = 0; i < rep.c_values.size(); ++i) {
            std::size_t n = i + 2;
            const Rat& c = rep.c_values[i];
            csv.rows.push_back({std::to_string(n), c.get_num().get_str(), c.get_den().get_str(),
                                format_double(to_double(c))});
            entries.push_back({{"n", n},
                               {"c_num", c.get_num().get_str()},
                               {"c_den", c.get_den().get_str()}});
        }
        meta["entries"] = entries;
        meta["n_checked"] = rep.n_checked;
        meta["c_max"] = format_rat(rep.c_max);
        meta["scope"] = "ratios certified only for the checked indices";
        if (cfg.folner.boxes && cfg.folner.dim == 1 &&
            cfg.folner.sizes.size() >= 2 && cfg.folner.sizes[0] == 1 &&
            cfg.folner.sizes[1] == 2)
            meta["closed_form_note"] = "integer boxes [0,n): ratio (2n-2)/n";
        result.verdict = "checked";
        result.summary = cfg.name + ": c_max = " + format_rat(rep.c_max) + " over n <= " +
                         std::to_string(rep.n_checked);
    }

    write_text_file(csv_path, csv.to_string());
    meta["outputs"] = {{"csv", cfg.out_csv}, {"json", cfg.out_json}};
    meta["verdict_summary"] = result.summary;
    write_text_file(json_path, meta.dump(2) + "\n");
    result.artifacts.insert(result.artifacts.begin(), {csv_path, json_path});
    return result;
}

struct CompareResult {
    RunResult a, b;
    CsvTable table;
    bool verdicts_agree = false;
};

// Runs both configs and aligns their profile rows index-by-index.
inline CompareResult compare_experiments(const ExperimentConfig& a, const ExperimentConfig& b,
                                         const std::string& out_dir,
                                         const RunOverrides& overrides = {}) {
    namespace fs = std::filesystem;
    CompareResult cmp;
    cmp.a = run_experiment(a, (fs::path(out_dir) / a.name).string(), overrides);
    cmp.b = run_experiment(b, (fs::path(out_dir) / b.name).string(), overrides);

    CsvTable ta = parse_csv(read_text_file(cmp.a.artifacts[0]));
    CsvTable tb = parse_csv(read_text_file(cmp.b.artifacts[0]));
    cmp.table.header = {"row", "n_a", "value_a", "n_b", "value_b"};
    const std::size_t rows = std::max(ta.rows.size(), tb.rows.size());
    for (std::size_t i = 0; i < rows; ++i) {
        std::string na = i < ta.rows.size() ? ta.rows[i][0] : "";
        std::string va = i < ta.rows.size() && ta.rows[i].size() > 1 ? ta.rows[i][1] : "";
        std::string nb = i < tb.rows.size() ? tb.rows[i][0] : "";
        std::string vb = i < tb.rows.size() && tb.rows[i].size() > 1 ? tb.rows[i][1] : "";
        cmp.table.rows.push_back({std::to_string(i), na, va, nb, vb});
    }
    cmp.verdicts_agree = cmp.a.verdict == cmp.b.verdict;
    CsvTable summary;
    summary.header = {"experiment", "verdict"};
    summary.rows.push_back({a.name, cmp.a.verdict});
    summary.rows.push_back({b.name, cmp.b.verdict});
    summary.rows.push_back({"agree", cmp.verdicts_agree ? "yes" : "no"});
    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "compare.csv").string(), cmp.table.to_string());
    write_text_file((fs::path(out_dir) / "compare_summary.csv").string(), summary.to_string());
    return cmp;
}

}  // namespace pcx
