// Command-line experiment runner: declarative configs in, deterministic
// CSV/JSON profiles and verdict tables out.
//
// Exit codes: 0 success (verdicts are data, not failures), 2 malformed
// config, 3 capacity exceeded, 4 internal postcondition violation.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcx/experiment.hpp"

namespace {

struct CommonOpts {
    std::string out_dir = ".";
    pcx::RunOverrides overrides;
};

void apply_env(CommonOpts& opts, bool out_set, bool seed_set) {
    if (!seed_set) {
        if (const char* env = std::getenv("PCX_SEED"))
            opts.overrides.seed = static_cast<std::uint64_t>(std::stoull(env));
    }
    if (!out_set) {
        if (const char* env = std::getenv("PCX_OUT")) opts.out_dir = env;
    }
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const pcx::config_error& e) {
        std::cerr << "config error [" << e.field << "]: " << e.what() << "\n";
        return 2;
    } catch (const pcx::capacity_error& e) {
        std::cerr << "capacity exceeded: " << e.what()
                  << "\nhint: shrink the window list or switch to sample mode\n";
        return 3;
    } catch (const pcx::postcondition_error& e) {
        std::cerr << "internal postcondition violation: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partition-complexity experiment runner"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<std::string> config_paths;
    std::uint64_t seed_flag = 0;
    std::string log_base_flag;
    int threads = 1;
    bool seed_set = false, out_set = false;

    auto add_common = [&](CLI::App* sub, int config_count) {
        sub->add_option("--config", config_paths, "experiment config path(s)")
            ->expected(config_count)
            ->required();
        sub->add_option("--seed", seed_flag, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--out", opts.out_dir, "output directory")
            ->each([&](const std::string&) { out_set = true; });
        sub->add_option("--log-base", log_base_flag, "entropy display base")
            ->check(CLI::IsMember({"nat", "bit"}));
        sub->add_option("--threads", threads, "worker thread count (results are identical)")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
    add_common(run_cmd, 1);

    CLI::App* compare_cmd = app.add_subcommand("compare", "run two experiments side by side");
    add_common(compare_cmd, 2);

    CLI::App* validate_cmd = app.add_subcommand("validate", "parse and validate a config");
    validate_cmd->add_option("--config", config_paths, "experiment config path")
        ->expected(1)
        ->required();

    CLI::App* plot_cmd =
        app.add_subcommand("emit-plot-data", "merge profile CSVs into a long-format table");
    std::vector<std::string> profile_paths;
    std::string plot_out = "plot_data.csv";
    plot_cmd->add_option("profiles", profile_paths, "profile CSV files");
    plot_cmd->add_option("--out", plot_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    if (seed_set) opts.overrides.seed = seed_flag;
    if (!log_base_flag.empty()) opts.overrides.log_base = log_base_flag;
    opts.overrides.threads = threads;

    if (run_cmd->parsed()) {
        return run_guarded([&] {
            apply_env(opts, out_set, seed_set);
            auto cfg = pcx::load_config(config_paths[0]);
            auto result = pcx::run_experiment(cfg, opts.out_dir, opts.overrides);
            std::cout << result.summary << "\n";
            for (const auto& a : result.artifacts) std::cout << "wrote " << a << "\n";
            return 0;
        });
    }
    if (compare_cmd->parsed()) {
        return run_guarded([&] {
            apply_env(opts, out_set, seed_set);
            auto cfg_a = pcx::load_config(config_paths[0]);
            auto cfg_b = pcx::load_config(config_paths[1]);
            auto cmp = pcx::compare_experiments(cfg_a, cfg_b, opts.out_dir, opts.overrides);
            std::cout << cmp.a.summary << "\n" << cmp.b.summary << "\n";
            std::cout << "verdicts agree: " << (cmp.verdicts_agree ? "yes" : "no") << "\n";
            std::cout << cmp.table.to_string();
            return 0;
        });
    }
    if (validate_cmd->parsed()) {
        return run_guarded([&] {
            auto cfg = pcx::load_config(config_paths[0]);
            std::cout << "ok: " << cfg.name << " (" << cfg.quantity << ")\n";
            return 0;
        });
    }
    if (plot_cmd->parsed()) {
        return run_guarded([&] {
            auto table = pcx::plot_data_from_profiles(profile_paths);
            pcx::write_text_file(plot_out, table.to_string());
            std::cout << "wrote " << plot_out << " (" << table.rows.size() << " rows)\n";
            return 0;
        });
    }
    return 0;
}
