// Command-line benchmark driver: synthetic sweeps, figure replication grids,
// and dataset-driven runs, with deterministic seed-keyed outputs.

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <thread>
#include <vector>

#include "groupfair/groupfair.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int seeds = 0; // 0: keep config/preset default
    int jobs = 1;
    std::vector<std::string> overrides;
    std::string preset;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_preset) {
    cmd->add_option("--config", args.config_path, "JSON configuration file");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seeds", args.seeds, "number of seeds (1..k)");
    cmd->add_option("--jobs", args.jobs, "worker thread count")->check(CLI::PositiveNumber);
    cmd->add_option("--set", args.overrides, "config override key=value (repeatable)");
    if (with_preset) cmd->add_option("--preset", args.preset, "figure preset name");
}

fs::path resolve_out(const CommonArgs& args, const json& cfg) {
    if (!args.out_dir.empty()) return args.out_dir;
    if (cfg.contains("out") && cfg.at("out").is_string()) return cfg.at("out").get<std::string>();
    if (const char* env = std::getenv("GFBANDIT_OUT"); env && *env) return env;
    return "out";
}

json load_json_file(const std::string& path, bool data_file = false) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        const std::string msg = "cannot open " + path;
        if (data_file) throw groupfair::DataError(msg);
        throw groupfair::ConfigError(msg);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw groupfair::ConfigError("cannot parse " + path + ": " + e.what());
    }
}

/// Apply `key=value` overrides; dotted keys address nested objects.
void apply_overrides(json& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw groupfair::ConfigError("--set expects key=value, got '" + kv + "'");
        std::string key = kv.substr(0, eq);
        const std::string raw = kv.substr(eq + 1);
        for (auto& c : key)
            if (c == '.') c = '/';
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw; // plain string
        }
        try {
            cfg[json::json_pointer("/" + key)] = value;
        } catch (const json::exception& e) {
            throw groupfair::ConfigError("--set " + kv + ": " + e.what());
        }
    }
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw groupfair::DataError("cannot write " + path.string());
    out << content;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_tables(const fs::path& out, const groupfair::SweepResult& result) {
    std::ostringstream rounds;
    groupfair::write_rounds_csv(rounds, result.trajectories, result.run_ids);
    write_text(out / "rounds.csv", rounds.str());
    std::ostringstream summary;
    groupfair::write_summary_csv(summary, result.summary);
    write_text(out / "summary.csv", summary.str());
}

std::vector<groupfair::ExperimentConfig> override_grid(
    std::vector<groupfair::ExperimentConfig> grid, const CommonArgs& args) {
    for (auto& cfg : grid) {
        if (!args.overrides.empty()) {
            json j = groupfair::experiment_to_json(cfg);
            apply_overrides(j, args.overrides);
            cfg = groupfair::experiment_from_json(j);
        }
        if (args.seeds > 0) cfg.seeds = groupfair::default_seeds(args.seeds);
    }
    return grid;
}

json grid_to_json(const std::vector<groupfair::ExperimentConfig>& grid) {
    json arr = json::array();
    for (const auto& cfg : grid) arr.push_back(groupfair::experiment_to_json(cfg));
    return arr;
}

int cmd_run(const CommonArgs& args) {
    if (args.config_path.empty()) throw groupfair::ConfigError("run: --config is required");
    json cfg = load_json_file(args.config_path);
    apply_overrides(cfg, args.overrides);
    groupfair::ExperimentConfig exp = groupfair::experiment_from_json(cfg);
    if (cfg.contains("policy")) exp.policies = {cfg.at("policy").get<std::string>()};
    if (cfg.contains("seed")) exp.seeds = {cfg.at("seed").get<std::uint64_t>()};
    if (args.seeds > 0) exp.seeds = groupfair::default_seeds(args.seeds);
    exp.validate();

    const fs::path out = resolve_out(args, cfg);
    fs::create_directories(out);
    const auto result = groupfair::run_sweep({exp}, args.jobs);
    write_tables(out, result);

    json instances = json::object();
    for (const auto seed : exp.seeds)
        instances[std::to_string(seed)] =
            groupfair::to_json(groupfair::instance_for_seed(exp.synthetic, seed));
    write_json(out / "instances.json", instances);
    write_json(out / "effective_config.json",
               {{"command", "run"}, {"experiment", groupfair::experiment_to_json(exp)}});
    std::cout << "wrote " << (out / "rounds.csv").string() << " and summary.csv ("
              << result.trajectories.size() << " trials)\n";
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    if (args.config_path.empty()) throw groupfair::ConfigError("sweep: --config is required");
    json cfg = load_json_file(args.config_path);
    apply_overrides(cfg, args.overrides);
    auto grid = groupfair::sweep_from_json(cfg);
    if (args.seeds > 0)
        for (auto& g : grid) g.seeds = groupfair::default_seeds(args.seeds);

    const fs::path out = resolve_out(args, cfg);
    fs::create_directories(out);
    const auto result = groupfair::run_sweep(grid, args.jobs);
    write_tables(out, result);
    write_json(out / "effective_config.json", {{"command", "sweep"}, {"grid", grid_to_json(grid)}});
    std::cout << "wrote " << (out / "summary.csv").string() << " (" << grid.size()
              << " configs, " << result.trajectories.size() << " trials)\n";
    return 0;
}

int cmd_replicate(const CommonArgs& args, const std::string& positional_preset) {
    std::string preset = !positional_preset.empty() ? positional_preset : args.preset;
    if (preset.empty())
        throw groupfair::ConfigError("replicate: preset name required (positional or --preset)");
    const int n_seeds = args.seeds > 0 ? args.seeds : 20;
    auto grid = groupfair::figure_preset(preset, n_seeds);
    grid = override_grid(std::move(grid), args);

    const fs::path out = resolve_out(args, json::object());
    fs::create_directories(out);
    const auto result = groupfair::run_sweep(grid, args.jobs);
    write_tables(out, result);
    write_json(out / "effective_config.json",
               {{"command", "replicate"}, {"preset", preset}, {"grid", grid_to_json(grid)}});
    std::cout << "wrote " << (out / "summary.csv").string() << " (" << grid.size()
              << " configs, " << result.trajectories.size() << " trials)\n";
    return 0;
}

int cmd_dataset(const CommonArgs& args) {
    if (args.config_path.empty()) throw groupfair::ConfigError("dataset: --config is required");
    json cfg = load_json_file(args.config_path);
    apply_overrides(cfg, args.overrides);
    if (!cfg.contains("csv")) throw groupfair::ConfigError("dataset: config needs a 'csv' path");
    const std::string csv_path = cfg.at("csv").get<std::string>();
    json schema_json;
    if (!cfg.contains("schema")) throw groupfair::ConfigError("dataset: config needs a 'schema'");
    if (cfg.at("schema").is_string())
        schema_json = load_json_file(cfg.at("schema").get<std::string>());
    else
        schema_json = cfg.at("schema");
    const auto schema = groupfair::DatasetSchema::from_json(schema_json);
    const auto env = groupfair::load_dataset(csv_path, schema);

    const long T = cfg.value("T", 500L);
    std::vector<std::string> policies{"top_interval", "interval_chaining", "naive_group_fair",
                                      "group_fair"};
    if (cfg.contains("policies")) policies = cfg.at("policies").get<std::vector<std::string>>();
    std::vector<std::uint64_t> seeds = groupfair::default_seeds(5);
    if (cfg.contains("seeds")) {
        if (cfg.at("seeds").is_number_integer())
            seeds = groupfair::default_seeds(cfg.at("seeds").get<int>());
        else
            seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
    }
    if (args.seeds > 0) seeds = groupfair::default_seeds(args.seeds);
    groupfair::PolicyConfig pc;
    pc.delta = cfg.value("delta", pc.delta);
    pc.exploration_exponent = cfg.value("exploration_exponent", pc.exploration_exponent);
    pc.ridge = cfg.value("ridge", pc.ridge);
    pc.sigma2 = cfg.value("sigma2", pc.sigma2);
    pc.literal_upper_bounds = cfg.value("literal_upper_bounds", pc.literal_upper_bounds);
    pc.chain_direct_overlap = cfg.value("chain_direct_overlap", pc.chain_direct_overlap);
    pc.horizon = std::max<long>(1, T);

    groupfair::SweepResult result;
    result.trajectories.resize(policies.size() * seeds.size());
    result.run_ids.resize(result.trajectories.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(result.trajectories.size());
    auto run_one = [&](std::size_t i) {
        const auto& policy_name = policies[i / seeds.size()];
        const auto seed = seeds[i % seeds.size()];
        result.run_ids[i] = "dataset/" + policy_name + "/s" + std::to_string(seed);
        try {
            auto policy = groupfair::make_policy(policy_name, pc, env.partition, env.n, env.d);
            result.trajectories[i] = groupfair::run_dataset_trial(env, *policy, T, seed);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    };
    const int workers = std::max(1, args.jobs);
    if (workers == 1) {
        for (std::size_t i = 0; i < result.trajectories.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < result.trajectories.size();
                     i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw groupfair::ConfigError("cell " + result.run_ids[i] + ": " + failures[i]);

    for (std::size_t p = 0; p < policies.size(); ++p) {
        std::vector<const groupfair::Trajectory*> trajs;
        for (std::size_t s = 0; s < seeds.size(); ++s)
            trajs.push_back(&result.trajectories[p * seeds.size() + s]);
        auto rows = groupfair::summarize_trajectories("dataset", "none", 0.0, policies[p], trajs,
                                                      env.partition);
        result.summary.insert(result.summary.end(), rows.begin(), rows.end());
    }

    const fs::path out = resolve_out(args, cfg);
    fs::create_directories(out);
    write_tables(out, result);
    write_json(out / "load_report.json", env.report.to_json());
    json effective = {{"command", "dataset"}, {"csv", csv_path},
                      {"schema", schema.to_json()}, {"T", T},
                      {"policies", policies},       {"seeds", seeds},
                      {"delta", pc.delta},          {"ridge", pc.ridge},
                      {"exploration_exponent", pc.exploration_exponent},
                      {"sigma2", pc.sigma2}};
    write_json(out / "effective_config.json", effective);
    std::cout << "wrote " << (out / "summary.csv").string() << " (" << env.n << " arms, "
              << result.trajectories.size() << " trials)\n";
    return 0;
}

/// Quick self-checks of the shared numeric kernels.
void numerics_self_test() {
    using namespace groupfair;
    for (int k = 0; k <= 48; ++k) {
        const double lp = -6.0 + 12.0 * k / 48.0; // p from 1e-6 to 1-1e-6, log-spaced halves
        const double p = lp <= 0.0 ? std::pow(10.0, lp - 0.0) : 1.0 - std::pow(10.0, -lp);
        if (p <= 0.0 || p >= 1.0) continue;
        const double err = std::fabs(normal_cdf(normal_quantile(p)) - p);
        if (err > 1e-8)
            throw SingularSystemError("quantile self-test failed at p=" + std::to_string(p));
    }
    Matrix X(3, 1);
    X << 1, 2, 3;
    Vector y(3);
    y << 2, 4, 6;
    if (std::fabs(ols_fit(X, y, 0.0)[0] - 2.0) > 1e-9)
        throw SingularSystemError("least-squares self-test failed");
    Matrix X2(4, 2);
    X2 << 1, 0, 0, 1, 1, 0, 0, 1;
    if (std::fabs(predictive_variance(X2, Vector::Unit(2, 0), 1.0, 0.0) - 0.5) > 1e-9)
        throw SingularSystemError("variance self-test failed");
}

int cmd_validate(const CommonArgs& args) {
    numerics_self_test();
    std::cout << "numeric kernels: ok\n";
    if (!args.preset.empty()) {
        const auto grid = groupfair::figure_preset(args.preset, args.seeds > 0 ? args.seeds : 20);
        std::cout << "preset " << args.preset << ": ok (" << grid.size() << " configs)\n";
    }
    if (!args.config_path.empty()) {
        json cfg = load_json_file(args.config_path);
        apply_overrides(cfg, args.overrides);
        if (cfg.contains("csv")) {
            if (!cfg.contains("schema"))
                throw groupfair::ConfigError("dataset config needs a 'schema'");
            json schema_json = cfg.at("schema").is_string()
                                   ? load_json_file(cfg.at("schema").get<std::string>())
                                   : cfg.at("schema");
            const auto schema = groupfair::DatasetSchema::from_json(schema_json);
            const auto env = groupfair::load_dataset(cfg.at("csv").get<std::string>(), schema);
            std::cout << "dataset config: ok (" << env.n << " arms, d=" << env.d << ")\n";
        } else {
            const auto grid = groupfair::sweep_from_json(cfg);
            for (const auto& g : grid) {
                groupfair::RngStream rng(g.seeds.front(), 0, groupfair::streams::kInstance);
                groupfair::generate_instance(g.synthetic, rng);
            }
            std::cout << "config: ok (" << grid.size() << " configs)\n";
        }
    }
    std::cout << "ok\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contextual bandit simulation benchmark with group-corrected policies"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, rep_args, data_args, val_args;
    std::string rep_preset;

    auto* run_cmd = app.add_subcommand("run", "run a single experiment configuration");
    add_common(run_cmd, run_args, false);
    auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep grid from a config file");
    add_common(sweep_cmd, sweep_args, false);
    auto* rep_cmd = app.add_subcommand("replicate", "run a named figure preset");
    rep_cmd->add_option("name", rep_preset, "preset name");
    add_common(rep_cmd, rep_args, true);
    auto* data_cmd = app.add_subcommand("dataset", "run policies against CSV-derived arms");
    add_common(data_cmd, data_args, false);
    auto* val_cmd = app.add_subcommand("validate", "check configs and numeric kernels");
    add_common(val_cmd, val_args, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
        if (rep_cmd->parsed()) return cmd_replicate(rep_args, rep_preset);
        if (data_cmd->parsed()) return cmd_dataset(data_args);
        if (val_cmd->parsed()) return cmd_validate(val_args);
    } catch (const groupfair::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const groupfair::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
