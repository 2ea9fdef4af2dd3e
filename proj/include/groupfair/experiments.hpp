#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "groupfair/instance.hpp"
#include "groupfair/policies.hpp"
#include "groupfair/rng.hpp"

namespace groupfair {

/// One complete experiment cell description: instance sampler, horizon,
/// policy parameters, the policies to run, and the seed list.
struct ExperimentConfig {
    std::string name = "custom";
    std::string swept_param = "none";
    double swept_value = 0.0;
    SyntheticConfig synthetic;
    long horizon = 1000;
    PolicyConfig policy;
    std::vector<std::string> policies{"top_interval", "interval_chaining", "naive_group_fair",
                                      "group_fair"};
    std::vector<std::uint64_t> seeds;

    void validate() const {
        synthetic.validate();
        if (horizon < 0) throw ConfigError("ExperimentConfig: horizon must be nonnegative");
        PolicyConfig pc = policy;
        pc.horizon = std::max<long>(1, horizon);
        pc.validate();
        if (policies.empty()) throw ConfigError("ExperimentConfig: no policies listed");
        if (seeds.empty()) throw ConfigError("ExperimentConfig: no seeds listed");
    }
};

struct Trajectory {
    std::string policy;
    std::uint64_t seed = 0;
    bool dataset_mode = false;
    std::vector<RoundOutcome> rounds;
};

inline std::vector<std::uint64_t> default_seeds(int count) {
    if (count < 1) throw ConfigError("seed count must be positive");
    std::vector<std::uint64_t> s(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) s[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i + 1);
    return s;
}

/// Instance used by every policy at a given seed (stream purpose kInstance,
/// trial 0), so policies are always compared on identical problems.
inline BanditInstance instance_for_seed(const SyntheticConfig& cfg, std::uint64_t seed) {
    RngStream rng(seed, 0, streams::kInstance);
    return generate_instance(cfg, rng);
}

/// Simulate T rounds. Slate draws, reward noise, and policy randomness come
/// from three separate streams keyed by (seed, round), so two policies at the
/// same seed face identical contexts and the simulation is reproducible no
/// matter how cells are scheduled.
inline Trajectory run_trial(const BanditInstance& inst, Policy& policy, long T,
                            std::uint64_t seed) {
    if (T < 0) throw std::invalid_argument("run_trial: T must be nonnegative");
    Trajectory traj;
    traj.policy = std::string(policy.name());
    traj.seed = seed;
    traj.rounds.reserve(static_cast<std::size_t>(T));
    for (long t = 1; t <= T; ++t) {
        RngStream slate_rng(seed, static_cast<std::uint64_t>(t), streams::kSlate);
        const Slate slate = sample_slate(inst, t, slate_rng);
        RngStream policy_rng(seed, static_cast<std::uint64_t>(t), streams::kPolicy);
        const Decision dec = policy.select(slate, t, policy_rng);
        RngStream noise_rng(seed, static_cast<std::uint64_t>(t), streams::kNoise);
        const auto& x = slate.contexts[static_cast<std::size_t>(dec.arm)];
        const double r = observed_reward(inst, dec.arm, x, noise_rng);
        const auto [tr, br] = round_regrets(inst, slate, dec.arm);
        policy.update(dec.arm, x, r);
        traj.rounds.push_back(
            {dec.arm, inst.partition.group_of(dec.arm), dec.explored, r, tr, br});
    }
    return traj;
}

inline Trajectory run_cell(const ExperimentConfig& cfg, const std::string& policy_name,
                           std::uint64_t seed) {
    const BanditInstance inst = instance_for_seed(cfg.synthetic, seed);
    PolicyConfig pc = cfg.policy;
    pc.horizon = std::max<long>(1, cfg.horizon);
    auto policy = make_policy(policy_name, pc, inst.partition, inst.n, inst.d);
    return run_trial(inst, *policy, cfg.horizon, seed);
}

// --- metrics ----------------------------------------------------------------

/// 1-based inclusive round window [first, last].
using RoundWindow = std::pair<long, long>;

inline RoundWindow trailing_window(long T) { return {(T + 1) / 2, T}; }

/// Fraction of pulls landing in the sensitive group, optionally restricted to
/// a window of rounds.
inline double sensitive_pull_fraction(const Trajectory& traj, const GroupPartition& partition,
                                      std::optional<RoundWindow> window = std::nullopt) {
    const long T = static_cast<long>(traj.rounds.size());
    long lo = 1, hi = T;
    if (window) {
        lo = window->first;
        hi = window->second;
    }
    if (lo < 1 || hi > T || lo > hi)
        throw std::invalid_argument("sensitive_pull_fraction: empty or out-of-range window");
    long hits = 0;
    for (long t = lo; t <= hi; ++t)
        if (traj.rounds[static_cast<std::size_t>(t - 1)].group == partition.sensitive_group)
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(hi - lo + 1);
}

enum class RegretKind { True, Biased };

/// Cumulative regret curve, one entry per round.
inline std::vector<double> cumulative_regret(const Trajectory& traj, RegretKind kind) {
    std::vector<double> out;
    out.reserve(traj.rounds.size());
    double acc = 0.0;
    for (const auto& r : traj.rounds) {
        acc += (kind == RegretKind::True) ? r.true_regret : r.biased_regret;
        out.push_back(acc);
    }
    return out;
}

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

struct SummaryRow {
    std::string preset;
    std::string swept_param;
    double swept_value = 0.0;
    std::string policy;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    int n_seeds = 0;
};

/// Across-seed summary for one (label, policy) cell: sensitive-pull fractions
/// (overall and trailing window), final cumulative regrets, and cumulative
/// regret samples at ten evenly spaced checkpoints.
inline std::vector<SummaryRow> summarize_trajectories(const std::string& preset,
                                                      const std::string& swept_param,
                                                      double swept_value,
                                                      const std::string& policy,
                                                      const std::vector<const Trajectory*>& trajs,
                                                      const GroupPartition& part) {
    std::vector<SummaryRow> rows;
    const int n_seeds = static_cast<int>(trajs.size());
    const long T = trajs.empty() ? 0 : static_cast<long>(trajs.front()->rounds.size());
    const bool dataset_mode = !trajs.empty() && trajs.front()->dataset_mode;
    auto emit = [&](const std::string& metric, const std::vector<double>& values) {
        const auto [m, s] = mean_std(values);
        rows.push_back({preset, swept_param, swept_value, policy, metric, m, s, n_seeds});
    };
    if (T == 0) return rows;

    std::vector<double> frac_all, frac_tail;
    for (const auto* tr : trajs) {
        frac_all.push_back(sensitive_pull_fraction(*tr, part));
        frac_tail.push_back(sensitive_pull_fraction(*tr, part, trailing_window(T)));
    }
    emit("sensitive_fraction_overall", frac_all);
    emit("sensitive_fraction_trailing", frac_tail);

    std::vector<std::vector<double>> true_curves, biased_curves;
    for (const auto* tr : trajs) {
        if (!dataset_mode) true_curves.push_back(cumulative_regret(*tr, RegretKind::True));
        biased_curves.push_back(cumulative_regret(*tr, RegretKind::Biased));
    }
    auto at = [&](const std::vector<std::vector<double>>& curves, long t) {
        std::vector<double> v;
        for (const auto& c : curves) v.push_back(c[static_cast<std::size_t>(t - 1)]);
        return v;
    };
    if (!dataset_mode) emit("cum_true_regret", at(true_curves, T));
    emit("cum_biased_regret", at(biased_curves, T));
    for (int k = 1; k <= 10; ++k) {
        const long t = std::max<long>(1, (k * T + 9) / 10);
        if (!dataset_mode)
            emit("cum_true_regret@" + std::to_string(t), at(true_curves, t));
        emit("cum_biased_regret@" + std::to_string(t), at(biased_curves, t));
    }
    return rows;
}

inline std::vector<SummaryRow> summarize_cell(const ExperimentConfig& cfg,
                                              const std::string& policy,
                                              const std::vector<const Trajectory*>& trajs) {
    const GroupPartition part = GroupPartition::from_sizes(cfg.synthetic.group_sizes, 0);
    return summarize_trajectories(cfg.name, cfg.swept_param, cfg.swept_value, policy, trajs,
                                  part);
}

// --- sweep ------------------------------------------------------------------

struct SweepResult {
    // trajectories[cell] in (config, policy, seed) iteration order
    std::vector<Trajectory> trajectories;
    std::vector<std::string> run_ids;
    std::vector<SummaryRow> summary;
};

namespace detail {

struct CellRef {
    std::size_t config = 0;
    std::size_t policy = 0;
    std::size_t seed = 0;
};

inline std::string cell_run_id(const ExperimentConfig& cfg, const std::string& policy,
                               std::uint64_t seed) {
    std::string id = cfg.name;
    if (cfg.swept_param != "none") {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g", cfg.swept_value);
        id += "[" + cfg.swept_param + "=" + buf + "]";
    }
    return id + "/" + policy + "/s" + std::to_string(seed);
}

} // namespace detail

/// Run every (config, policy, seed) cell of the grid. Cells are independent
/// (each keys its own random streams), so the thread count never changes any
/// result; outputs are assembled in deterministic cell order afterwards.
inline SweepResult run_sweep(const std::vector<ExperimentConfig>& grid, int jobs = 1) {
    for (const auto& cfg : grid) cfg.validate();
    std::vector<detail::CellRef> cells;
    for (std::size_t c = 0; c < grid.size(); ++c)
        for (std::size_t p = 0; p < grid[c].policies.size(); ++p)
            for (std::size_t s = 0; s < grid[c].seeds.size(); ++s) cells.push_back({c, p, s});

    SweepResult result;
    result.trajectories.resize(cells.size());
    result.run_ids.resize(cells.size());
    std::vector<std::exception_ptr> failures(cells.size());

    auto run_one = [&](std::size_t i) {
        const auto& cell = cells[i];
        const auto& cfg = grid[cell.config];
        const std::string& policy = cfg.policies[cell.policy];
        const std::uint64_t seed = cfg.seeds[cell.seed];
        result.run_ids[i] = detail::cell_run_id(cfg, policy, seed);
        try {
            result.trajectories[i] = run_cell(cfg, policy, seed);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    };

    const int workers = std::max(1, jobs);
    if (workers == 1 || cells.size() <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int count = std::min<int>(workers, static_cast<int>(cells.size()));
        pool.reserve(static_cast<std::size_t>(count));
        for (int w = 0; w < count; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!failures[i]) continue;
        const std::string where = "cell " + result.run_ids[i] + ": ";
        try {
            std::rethrow_exception(failures[i]);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        } catch (const DataError& e) {
            throw DataError(where + e.what());
        } catch (const SingularSystemError& e) {
            throw SingularSystemError(where + e.what());
        } catch (const std::exception& e) {
            throw std::runtime_error(where + e.what());
        }
    }

    // Deterministic aggregation order: grid order, then policy order.
    std::size_t base = 0;
    for (const auto& cfg : grid) {
        for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
            std::vector<const Trajectory*> trajs;
            for (std::size_t s = 0; s < cfg.seeds.size(); ++s)
                trajs.push_back(&result.trajectories[base + p * cfg.seeds.size() + s]);
            auto rows = summarize_cell(cfg, cfg.policies[p], trajs);
            result.summary.insert(result.summary.end(), rows.begin(), rows.end());
        }
        base += cfg.policies.size() * cfg.seeds.size();
    }
    return result;
}

// --- presets ----------------------------------------------------------------

/// Named experiment grids used by the replication figures. Each returns a
/// list of configs sweeping one parameter, everything else at defaults.
inline std::vector<ExperimentConfig> figure_preset(const std::string& name, int n_seeds = 20) {
    ExperimentConfig base;
    base.name = name;
    base.seeds = default_seeds(n_seeds);

    auto sweep = [&](const std::string& param, const std::vector<double>& values,
                     auto&& apply) {
        std::vector<ExperimentConfig> grid;
        for (double v : values) {
            ExperimentConfig cfg = base;
            cfg.swept_param = param;
            cfg.swept_value = v;
            apply(cfg, v);
            cfg.validate();
            grid.push_back(std::move(cfg));
        }
        return grid;
    };

    const bool pulls = name.rfind("pulls_", 0) == 0;
    const bool regret = name.rfind("regret_", 0) == 0;
    if (pulls || regret) {
        const std::string what = name.substr(name.find('_') + 1);
        if (what == "T")
            return sweep("T", {250, 500, 1000, 2000, 4000},
                         [](ExperimentConfig& c, double v) { c.horizon = static_cast<long>(v); });
        if (what == "arms")
            return sweep("n", {6, 8, 10, 14, 20}, [](ExperimentConfig& c, double v) {
                c.synthetic.n = static_cast<int>(v);
                c.synthetic.group_sizes = {5, static_cast<int>(v) - 5};
            });
        if (what == "error")
            return sweep("mu", {0, 5, 10, 20, 40}, [](ExperimentConfig& c, double v) {
                c.synthetic.bias_mean = v;
                c.synthetic.d = 5;
            });
        if (what == "ratio")
            return sweep("sensitive", {1, 2, 3, 4, 5, 6, 7, 8, 9},
                         [](ExperimentConfig& c, double v) {
                             const int k = static_cast<int>(v);
                             c.synthetic.group_sizes = {k, c.synthetic.n - k};
                         });
    }
    if (name == "appx_c")
        return sweep("c", {1, 5, 10, 20, 50},
                     [](ExperimentConfig& c, double v) { c.synthetic.coef_upper = v; });
    if (name == "appx_dim")
        return sweep("d", {1, 2, 5, 10, 20},
                     [](ExperimentConfig& c, double v) { c.synthetic.d = static_cast<int>(v); });
    if (name == "appx_delta")
        return sweep("delta", {0.01, 0.05, 0.1, 0.25, 0.45},
                     [](ExperimentConfig& c, double v) { c.policy.delta = v; });
    throw ConfigError("unknown preset: " + name);
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{
        "pulls_T",  "pulls_arms",  "pulls_error",  "pulls_ratio",
        "regret_T", "regret_arms", "regret_error", "regret_ratio",
        "appx_c",   "appx_dim",    "appx_delta"};
    return names;
}

// --- CSV emission -----------------------------------------------------------

/// Format with nine significant digits, the precision used in all tables.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// Long-format per-round table. In dataset mode there is no distortion-free
/// baseline, so the true-regret column is omitted entirely.
inline void write_rounds_csv(std::ostream& os, const std::vector<Trajectory>& trajs,
                             const std::vector<std::string>& run_ids) {
    const bool dataset_mode = !trajs.empty() && trajs.front().dataset_mode;
    os << "run_id,policy,seed,t,arm,group,explored,reward";
    if (!dataset_mode) os << ",true_regret_cum";
    os << ",biased_regret_cum\n";
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const auto& tr = trajs[i];
        double cum_true = 0.0, cum_biased = 0.0;
        long t = 0;
        for (const auto& r : tr.rounds) {
            ++t;
            cum_true += r.true_regret;
            cum_biased += r.biased_regret;
            os << run_ids[i] << ',' << tr.policy << ',' << tr.seed << ',' << t << ',' << r.arm
               << ',' << r.group << ',' << (r.explored ? 1 : 0) << ',' << format_real(r.reward);
            if (!dataset_mode) os << ',' << format_real(cum_true);
            os << ',' << format_real(cum_biased) << '\n';
        }
    }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "preset,swept_param,swept_value,policy,metric,mean,std,n_seeds\n";
    for (const auto& r : rows)
        os << r.preset << ',' << r.swept_param << ',' << format_real(r.swept_value) << ','
           << r.policy << ',' << r.metric << ',' << format_real(r.mean) << ','
           << format_real(r.stddev) << ',' << r.n_seeds << '\n';
}

// --- JSON configuration -----------------------------------------------------

inline nlohmann::json synthetic_to_json(const SyntheticConfig& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["d"] = s.d;
    j["group_sizes"] = s.group_sizes;
    j["c"] = s.coef_upper;
    j["c_lower"] = s.coef_lower;
    j["mu"] = s.bias_mean;
    j["bias_sign"] = s.bias_sign;
    j["noise"] = s.noise;
    j["recenter_groups"] = s.recenter_groups;
    if (s.psi_fixed >= 0.0) j["psi_fixed"] = s.psi_fixed;
    if (!s.group_coef_ranges.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [lo, hi] : s.group_coef_ranges) arr.push_back({lo, hi});
        j["group_coef_ranges"] = arr;
    }
    return j;
}

inline SyntheticConfig synthetic_from_json(const nlohmann::json& j) {
    SyntheticConfig s;
    try {
        s.n = j.value("n", s.n);
        s.d = j.value("d", s.d);
        if (j.contains("group_sizes")) s.group_sizes = j.at("group_sizes").get<std::vector<int>>();
        else if (j.contains("sensitive")) {
            const int k = j.at("sensitive").get<int>();
            s.group_sizes = {k, s.n - k};
        }
        s.coef_upper = j.value("c", s.coef_upper);
        s.coef_lower = j.value("c_lower", s.coef_lower);
        s.bias_mean = j.value("mu", s.bias_mean);
        s.bias_sign = j.value("bias_sign", s.bias_sign);
        s.noise = j.value("noise", s.noise);
        s.recenter_groups = j.value("recenter_groups", s.recenter_groups);
        if (j.contains("psi_fixed") && !j.at("psi_fixed").is_null())
            s.psi_fixed = j.at("psi_fixed").get<double>();
        if (j.contains("group_coef_ranges"))
            for (const auto& r : j.at("group_coef_ranges"))
                s.group_coef_ranges.emplace_back(r.at(0).get<double>(), r.at(1).get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("synthetic config: ") + e.what());
    }
    s.validate();
    return s;
}

inline nlohmann::json experiment_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["name"] = cfg.name;
    if (cfg.swept_param != "none") {
        j["swept_param"] = cfg.swept_param;
        j["swept_value"] = cfg.swept_value;
    }
    j["synthetic"] = synthetic_to_json(cfg.synthetic);
    j["T"] = cfg.horizon;
    j["delta"] = cfg.policy.delta;
    j["exploration_exponent"] = cfg.policy.exploration_exponent;
    j["ridge"] = cfg.policy.ridge;
    j["sigma2"] = cfg.policy.sigma2;
    j["literal_upper_bounds"] = cfg.policy.literal_upper_bounds;
    j["chain_direct_overlap"] = cfg.policy.chain_direct_overlap;
    if (cfg.policy.rho) j["rho"] = *cfg.policy.rho;
    j["policies"] = cfg.policies;
    j["seeds"] = cfg.seeds;
    return j;
}

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        cfg.name = j.value("name", cfg.name);
        cfg.swept_param = j.value("swept_param", cfg.swept_param);
        cfg.swept_value = j.value("swept_value", cfg.swept_value);
        if (j.contains("synthetic")) cfg.synthetic = synthetic_from_json(j.at("synthetic"));
        cfg.horizon = j.value("T", cfg.horizon);
        cfg.policy.delta = j.value("delta", cfg.policy.delta);
        cfg.policy.exploration_exponent =
            j.value("exploration_exponent", cfg.policy.exploration_exponent);
        cfg.policy.ridge = j.value("ridge", cfg.policy.ridge);
        cfg.policy.sigma2 = j.value("sigma2", cfg.policy.sigma2);
        cfg.policy.literal_upper_bounds =
            j.value("literal_upper_bounds", cfg.policy.literal_upper_bounds);
        cfg.policy.chain_direct_overlap =
            j.value("chain_direct_overlap", cfg.policy.chain_direct_overlap);
        if (j.contains("rho") && !j.at("rho").is_null())
            cfg.policy.rho = j.at("rho").get<double>();
        if (j.contains("policies")) cfg.policies = j.at("policies").get<std::vector<std::string>>();
        if (j.contains("seeds")) {
            const auto& s = j.at("seeds");
            if (s.is_number_integer()) cfg.seeds = default_seeds(s.get<int>());
            else cfg.seeds = s.get<std::vector<std::uint64_t>>();
        } else {
            cfg.seeds = default_seeds(20);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

/// Apply one swept-parameter assignment to a config (used by sweep files).
inline void apply_swept_param(ExperimentConfig& cfg, const std::string& param, double value) {
    cfg.swept_param = param;
    cfg.swept_value = value;
    if (param == "T") cfg.horizon = static_cast<long>(value);
    else if (param == "n") {
        if (cfg.synthetic.group_sizes.size() != 2)
            throw ConfigError("sweep over n requires a two-group instance");
        cfg.synthetic.n = static_cast<int>(value);
        cfg.synthetic.group_sizes[1] = cfg.synthetic.n - cfg.synthetic.group_sizes[0];
    } else if (param == "mu") cfg.synthetic.bias_mean = value;
    else if (param == "sensitive") {
        if (cfg.synthetic.group_sizes.size() != 2)
            throw ConfigError("sweep over sensitive count requires a two-group instance");
        cfg.synthetic.group_sizes = {static_cast<int>(value),
                                     cfg.synthetic.n - static_cast<int>(value)};
    } else if (param == "c") cfg.synthetic.coef_upper = value;
    else if (param == "d") cfg.synthetic.d = static_cast<int>(value);
    else if (param == "delta") cfg.policy.delta = value;
    else if (param == "exploration_exponent") cfg.policy.exploration_exponent = value;
    else throw ConfigError("unknown sweep parameter: " + param);
}

/// Parse a sweep description: either {"grid": [config, ...]} or
/// {"base": config, "sweep": {"param": name, "values": [...]}}.
inline std::vector<ExperimentConfig> sweep_from_json(const nlohmann::json& j) {
    std::vector<ExperimentConfig> grid;
    try {
        if (j.contains("grid")) {
            for (const auto& item : j.at("grid")) grid.push_back(experiment_from_json(item));
        } else if (j.contains("base") && j.contains("sweep")) {
            const ExperimentConfig base = experiment_from_json(j.at("base"));
            const std::string param = j.at("sweep").at("param").get<std::string>();
            for (const auto& v : j.at("sweep").at("values")) {
                ExperimentConfig cfg = base;
                apply_swept_param(cfg, param, v.get<double>());
                cfg.validate();
                grid.push_back(std::move(cfg));
            }
        } else {
            grid.push_back(experiment_from_json(j));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sweep config: ") + e.what());
    }
    if (grid.empty()) throw ConfigError("sweep config: empty grid");
    return grid;
}

} // namespace groupfair
