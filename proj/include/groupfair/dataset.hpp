#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "groupfair/errors.hpp"
#include "groupfair/experiments.hpp"
#include "groupfair/instance.hpp"
#include "groupfair/policies.hpp"

namespace groupfair {

/// How a CSV dataset maps onto arms, groups, contexts, and rewards.
///
/// Arms are the cross product of sensitive attribute values and value buckets
/// of the bucket column; the first sensitive value names the sensitive group.
/// Buckets are half-open intervals (edges[k], edges[k+1]].
struct DatasetSchema {
    std::string sensitive_column;
    std::vector<std::string> sensitive_values;
    std::string bucket_column;
    std::vector<double> bucket_edges;
    std::string reward_column;
    std::vector<std::string> nominal_columns;
    std::vector<std::string> exclude;
    bool normalize_reward = true;
    std::string reward_orientation = "higher"; // "higher" or "lower" is better

    void validate() const {
        if (sensitive_column.empty() || bucket_column.empty() || reward_column.empty())
            throw ConfigError("DatasetSchema: column names must be nonempty");
        if (sensitive_values.empty())
            throw ConfigError("DatasetSchema: need at least one sensitive value");
        if (bucket_edges.size() < 2)
            throw ConfigError("DatasetSchema: need at least two bucket edges");
        for (std::size_t k = 1; k < bucket_edges.size(); ++k)
            if (!(bucket_edges[k] > bucket_edges[k - 1]))
                throw ConfigError("DatasetSchema: bucket edges must be strictly increasing");
        if (reward_orientation != "higher" && reward_orientation != "lower")
            throw ConfigError("DatasetSchema: reward_orientation must be 'higher' or 'lower'");
    }

    int n_buckets() const { return static_cast<int>(bucket_edges.size()) - 1; }
    int n_arms() const { return static_cast<int>(sensitive_values.size()) * n_buckets(); }

    static DatasetSchema from_json(const nlohmann::json& j) {
        DatasetSchema s;
        try {
            s.sensitive_column = j.at("sensitive_column").get<std::string>();
            s.sensitive_values = j.at("sensitive_values").get<std::vector<std::string>>();
            s.bucket_column = j.at("bucket_column").get<std::string>();
            s.bucket_edges = j.at("buckets").get<std::vector<double>>();
            s.reward_column = j.at("reward_column").get<std::string>();
            if (j.contains("nominal_columns"))
                s.nominal_columns = j.at("nominal_columns").get<std::vector<std::string>>();
            if (j.contains("exclude")) s.exclude = j.at("exclude").get<std::vector<std::string>>();
            s.normalize_reward = j.value("normalize_reward", true);
            s.reward_orientation = j.value("reward_orientation", std::string("higher"));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("dataset schema: ") + e.what());
        }
        s.validate();
        return s;
    }

    nlohmann::json to_json() const {
        return {{"sensitive_column", sensitive_column},
                {"sensitive_values", sensitive_values},
                {"bucket_column", bucket_column},
                {"buckets", bucket_edges},
                {"reward_column", reward_column},
                {"nominal_columns", nominal_columns},
                {"exclude", exclude},
                {"normalize_reward", normalize_reward},
                {"reward_orientation", reward_orientation}};
    }
};

struct LoadReport {
    long rows_total = 0;
    long dropped_missing = 0;
    long dropped_sensitive = 0; // sensitive value outside the configured set
    long dropped_bucket = 0;    // bucket value outside every interval
    std::vector<long> pool_sizes;

    nlohmann::json to_json() const {
        return {{"rows_total", rows_total},
                {"dropped_missing", dropped_missing},
                {"dropped_sensitive", dropped_sensitive},
                {"dropped_bucket", dropped_bucket},
                {"pool_sizes", pool_sizes}};
    }
};

/// Row pools per arm, already encoded and scaled so every context lies in the
/// unit ball ([0, 1/sqrt(d)] per component).
struct DatasetEnvironment {
    int n = 0;
    int d = 0;
    GroupPartition partition;
    std::vector<std::string> arm_labels;
    std::vector<std::string> context_columns;
    std::vector<std::vector<Vector>> contexts; // [arm][row]
    std::vector<std::vector<double>> rewards;  // [arm][row], aligned with contexts
    LoadReport report;
};

namespace detail {

/// Minimal CSV reader: comma separation, double-quote quoting with "" escapes,
/// LF or CRLF records.
inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        records.push_back(row);
        row.clear();
        any = false;
    };
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            any = true;
            continue;
        }
        switch (c) {
        case '"': quoted = true; any = true; break;
        case ',': end_field(); any = true; break;
        case '\r': break;
        case '\n':
            if (any || !field.empty() || !row.empty()) end_row();
            break;
        default: field += c; any = true; break;
        }
    }
    if (any || !field.empty() || !row.empty()) end_row();
    return records;
}

inline std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (...) {
        return std::nullopt;
    }
}

} // namespace detail

/// Read a CSV file and build the per-arm row pools described by the schema.
///
/// Rows with a missing value in any used column are dropped, as are rows whose
/// sensitive value is not in the configured set or whose bucket value falls
/// outside every interval; all drops are counted in the report. Nominal
/// columns become integer codes in first-appearance order; every context
/// column is then min-max scaled to [0, 1] and the whole vector divided by
/// sqrt(d).
inline DatasetEnvironment load_dataset(const std::string& csv_path, const DatasetSchema& schema) {
    schema.validate();
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw DataError("load_dataset: cannot open " + csv_path);
    const auto records = detail::parse_csv(in);
    if (records.size() < 2) throw DataError("load_dataset: no data rows in " + csv_path);

    const auto& header = records.front();
    std::map<std::string, int> col_index;
    for (std::size_t i = 0; i < header.size(); ++i)
        col_index[header[i]] = static_cast<int>(i);
    auto require = [&](const std::string& name) {
        const auto it = col_index.find(name);
        if (it == col_index.end())
            throw DataError("load_dataset: column '" + name + "' missing from " + csv_path);
        return it->second;
    };
    const int sens_col = require(schema.sensitive_column);
    const int bucket_col = require(schema.bucket_column);
    const int reward_col = require(schema.reward_column);
    for (const auto& c : schema.nominal_columns) require(c);
    for (const auto& c : schema.exclude) require(c);

    auto is_excluded = [&](const std::string& name) {
        if (name == schema.sensitive_column || name == schema.bucket_column ||
            name == schema.reward_column)
            return true;
        for (const auto& e : schema.exclude)
            if (e == name) return true;
        return false;
    };
    std::vector<int> ctx_cols;
    std::vector<std::string> ctx_names;
    std::vector<bool> ctx_nominal;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (is_excluded(header[i])) continue;
        ctx_cols.push_back(static_cast<int>(i));
        ctx_names.push_back(header[i]);
        bool nominal = false;
        for (const auto& c : schema.nominal_columns) nominal = nominal || (c == header[i]);
        ctx_nominal.push_back(nominal);
    }
    const int d = static_cast<int>(ctx_cols.size());
    if (d == 0) throw DataError("load_dataset: no context columns remain");

    std::map<std::string, int> sens_index;
    for (std::size_t i = 0; i < schema.sensitive_values.size(); ++i)
        sens_index[schema.sensitive_values[i]] = static_cast<int>(i);
    const int n_buckets = schema.n_buckets();
    const int n_arms = schema.n_arms();

    DatasetEnvironment env;
    env.n = n_arms;
    env.d = d;
    env.context_columns = ctx_names;
    env.contexts.resize(static_cast<std::size_t>(n_arms));
    env.rewards.resize(static_cast<std::size_t>(n_arms));
    std::vector<int> assignment(static_cast<std::size_t>(n_arms));
    for (int s = 0; s < static_cast<int>(schema.sensitive_values.size()); ++s)
        for (int b = 0; b < n_buckets; ++b) {
            const int arm = s * n_buckets + b;
            assignment[static_cast<std::size_t>(arm)] = s;
            std::ostringstream label;
            label << schema.sensitive_values[static_cast<std::size_t>(s)] << "|("
                  << schema.bucket_edges[static_cast<std::size_t>(b)] << ","
                  << schema.bucket_edges[static_cast<std::size_t>(b) + 1] << "]";
            env.arm_labels.push_back(label.str());
        }
    env.partition = GroupPartition(static_cast<int>(schema.sensitive_values.size()),
                                   std::move(assignment), 0);

    std::vector<std::map<std::string, int>> nominal_codes(static_cast<std::size_t>(d));
    std::vector<double> raw_ctx(static_cast<std::size_t>(d));
    std::vector<std::vector<double>> kept_ctx; // row-major retained contexts
    std::vector<double> kept_reward;
    std::vector<int> kept_arm;

    auto& rep = env.report;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& row = records[r];
        ++rep.rows_total;
        if (row.size() != header.size())
            throw DataError("load_dataset: row " + std::to_string(r + 1) +
                            " has wrong field count");
        bool missing = row[static_cast<std::size_t>(sens_col)].empty() ||
                       row[static_cast<std::size_t>(bucket_col)].empty() ||
                       row[static_cast<std::size_t>(reward_col)].empty();
        for (int k = 0; k < d && !missing; ++k)
            missing = row[static_cast<std::size_t>(ctx_cols[static_cast<std::size_t>(k)])].empty();
        if (missing) {
            ++rep.dropped_missing;
            continue;
        }
        const auto sit = sens_index.find(row[static_cast<std::size_t>(sens_col)]);
        if (sit == sens_index.end()) {
            ++rep.dropped_sensitive;
            continue;
        }
        const auto bval = detail::parse_number(row[static_cast<std::size_t>(bucket_col)]);
        if (!bval)
            throw DataError("load_dataset: non-numeric bucket value in row " +
                            std::to_string(r + 1));
        int bucket = -1;
        for (int b = 0; b < n_buckets; ++b)
            if (*bval > schema.bucket_edges[static_cast<std::size_t>(b)] &&
                *bval <= schema.bucket_edges[static_cast<std::size_t>(b) + 1]) {
                bucket = b;
                break;
            }
        if (bucket < 0) {
            ++rep.dropped_bucket;
            continue;
        }
        const auto rval = detail::parse_number(row[static_cast<std::size_t>(reward_col)]);
        if (!rval)
            throw DataError("load_dataset: non-numeric reward in row " + std::to_string(r + 1));
        for (int k = 0; k < d; ++k) {
            const auto& cell = row[static_cast<std::size_t>(ctx_cols[static_cast<std::size_t>(k)])];
            if (ctx_nominal[static_cast<std::size_t>(k)]) {
                auto& codes = nominal_codes[static_cast<std::size_t>(k)];
                const auto [it, inserted] = codes.try_emplace(cell, static_cast<int>(codes.size()));
                raw_ctx[static_cast<std::size_t>(k)] = static_cast<double>(it->second);
            } else {
                const auto v = detail::parse_number(cell);
                if (!v)
                    throw DataError("load_dataset: non-numeric value in column '" +
                                    ctx_names[static_cast<std::size_t>(k)] + "', row " +
                                    std::to_string(r + 1));
                raw_ctx[static_cast<std::size_t>(k)] = *v;
            }
        }
        kept_ctx.push_back(raw_ctx);
        kept_reward.push_back(*rval);
        kept_arm.push_back(sit->second * n_buckets + bucket);
    }

    if (kept_ctx.empty()) throw DataError("load_dataset: all rows were dropped");

    std::vector<double> lo(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
    for (const auto& row : kept_ctx)
        for (int k = 0; k < d; ++k) {
            lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)],
                                                       row[static_cast<std::size_t>(k)]);
            hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)],
                                                       row[static_cast<std::size_t>(k)]);
        }
    double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo;
    for (double v : kept_reward) {
        rlo = std::min(rlo, v);
        rhi = std::max(rhi, v);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < kept_ctx.size(); ++i) {
        Vector x(d);
        for (int k = 0; k < d; ++k) {
            const double span = hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)];
            const double unit = span > 0.0
                                    ? (kept_ctx[i][static_cast<std::size_t>(k)] -
                                       lo[static_cast<std::size_t>(k)]) / span
                                    : 0.0;
            x[k] = unit * scale;
        }
        double rwd = kept_reward[i];
        if (schema.normalize_reward) {
            rwd = rhi > rlo ? (rwd - rlo) / (rhi - rlo) : 0.0;
            if (schema.reward_orientation == "lower") rwd = 1.0 - rwd;
        } else if (schema.reward_orientation == "lower") {
            rwd = -rwd;
        }
        const auto arm = static_cast<std::size_t>(kept_arm[i]);
        env.contexts[arm].push_back(std::move(x));
        env.rewards[arm].push_back(rwd);
    }

    for (int a = 0; a < n_arms; ++a) {
        rep.pool_sizes.push_back(static_cast<long>(env.contexts[static_cast<std::size_t>(a)].size()));
        if (env.contexts[static_cast<std::size_t>(a)].empty())
            throw DataError("load_dataset: arm '" + env.arm_labels[static_cast<std::size_t>(a)] +
                            "' has no rows");
    }
    return env;
}

/// One dataset-mode round: draw one row uniformly (with replacement) from each
/// arm's pool; returns the slate plus the drawn rows' rewards.
inline std::pair<Slate, std::vector<double>> dataset_round(const DatasetEnvironment& env,
                                                           long round, RngStream& rng) {
    Slate slate;
    slate.round = round;
    std::vector<double> rewards;
    slate.contexts.reserve(static_cast<std::size_t>(env.n));
    rewards.reserve(static_cast<std::size_t>(env.n));
    for (int a = 0; a < env.n; ++a) {
        const auto& pool = env.contexts[static_cast<std::size_t>(a)];
        const auto k = rng.uniform_index(static_cast<std::uint64_t>(pool.size()));
        slate.contexts.push_back(pool[static_cast<std::size_t>(k)]);
        rewards.push_back(env.rewards[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)]);
    }
    return {std::move(slate), std::move(rewards)};
}

/// Simulate T rounds against resampled dataset rows. There is no
/// distortion-free ground truth here, so trajectories carry biased regret only
/// (relative to the best drawn row of the round) and are flagged dataset-mode.
inline Trajectory run_dataset_trial(const DatasetEnvironment& env, Policy& policy, long T,
                                    std::uint64_t seed) {
    if (T < 0) throw std::invalid_argument("run_dataset_trial: T must be nonnegative");
    Trajectory traj;
    traj.policy = std::string(policy.name());
    traj.seed = seed;
    traj.dataset_mode = true;
    traj.rounds.reserve(static_cast<std::size_t>(T));
    for (long t = 1; t <= T; ++t) {
        RngStream slate_rng(seed, static_cast<std::uint64_t>(t), streams::kSlate);
        auto [slate, rewards] = dataset_round(env, t, slate_rng);
        RngStream policy_rng(seed, static_cast<std::uint64_t>(t), streams::kPolicy);
        const Decision dec = policy.select(slate, t, policy_rng);
        double best = -std::numeric_limits<double>::infinity();
        for (double r : rewards) best = std::max(best, r);
        const double r = rewards[static_cast<std::size_t>(dec.arm)];
        policy.update(dec.arm, slate.contexts[static_cast<std::size_t>(dec.arm)], r);
        traj.rounds.push_back({dec.arm, env.partition.group_of(dec.arm), dec.explored, r, 0.0,
                               best - r});
    }
    return traj;
}

} // namespace groupfair
