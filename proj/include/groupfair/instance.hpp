#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "groupfair/errors.hpp"
#include "groupfair/numerics.hpp"
#include "groupfair/rng.hpp"

namespace groupfair {

/// Partition of arms into disjoint demographic groups. Group indices run
/// 0..m-1; `sensitive_group` names the group whose rewards are distorted.
struct GroupPartition {
    int m = 0;
    std::vector<int> assignment; // arm index -> group index
    int sensitive_group = 0;

    GroupPartition() = default;
    GroupPartition(int groups, std::vector<int> arm_to_group, int sensitive = 0)
        : m(groups), assignment(std::move(arm_to_group)), sensitive_group(sensitive) {
        validate();
    }

    /// Build a partition from contiguous group sizes: the first sizes[0] arms
    /// form group 0, the next sizes[1] arms group 1, and so on.
    static GroupPartition from_sizes(const std::vector<int>& sizes, int sensitive = 0) {
        GroupPartition p;
        p.m = static_cast<int>(sizes.size());
        p.sensitive_group = sensitive;
        for (int g = 0; g < p.m; ++g) {
            if (sizes[g] <= 0) throw ConfigError("GroupPartition: group sizes must be positive");
            p.assignment.insert(p.assignment.end(), sizes[g], g);
        }
        p.validate();
        return p;
    }

    void validate() const {
        if (m < 1) throw ConfigError("GroupPartition: need at least one group");
        if (assignment.empty()) throw ConfigError("GroupPartition: no arms assigned");
        if (sensitive_group < 0 || sensitive_group >= m)
            throw ConfigError("GroupPartition: sensitive group out of range");
        std::vector<int> counts(m, 0);
        for (int g : assignment) {
            if (g < 0 || g >= m) throw ConfigError("GroupPartition: assignment out of range");
            ++counts[g];
        }
        for (int c : counts)
            if (c == 0) throw ConfigError("GroupPartition: every group must be nonempty");
    }

    int n_arms() const { return static_cast<int>(assignment.size()); }
    int group_of(int arm) const { return assignment.at(static_cast<std::size_t>(arm)); }

    std::vector<int> members(int group) const {
        std::vector<int> out;
        for (int i = 0; i < n_arms(); ++i)
            if (assignment[static_cast<std::size_t>(i)] == group) out.push_back(i);
        return out;
    }

    int group_size(int group) const {
        return static_cast<int>(std::count(assignment.begin(), assignment.end(), group));
    }

    bool operator==(const GroupPartition&) const = default;
};

/// A fixed problem instance: per-arm true coefficients, per-group distortion
/// coefficients, group structure, and the sign/noise switches of the
/// observation model.
struct BanditInstance {
    int n = 0; // arms
    int d = 0; // context dimension
    std::vector<Vector> betas; // n vectors of length d (true reward coefficients)
    std::vector<Vector> psis;  // m vectors of length d (per-group reward distortion)
    GroupPartition partition;
    int bias_sign = -1;        // -1: distortion depresses observed rewards; +1: inflates
    bool noise_enabled = true;

    void validate() const {
        partition.validate();
        if (n != partition.n_arms()) throw ConfigError("BanditInstance: n mismatch");
        if (static_cast<int>(betas.size()) != n) throw ConfigError("BanditInstance: betas size");
        if (static_cast<int>(psis.size()) != partition.m)
            throw ConfigError("BanditInstance: psis size");
        for (const auto& b : betas)
            if (b.size() != d) throw ConfigError("BanditInstance: beta dimension");
        for (const auto& p : psis)
            if (p.size() != d) throw ConfigError("BanditInstance: psi dimension");
        if (bias_sign != 1 && bias_sign != -1)
            throw ConfigError("BanditInstance: bias_sign must be +1 or -1");
    }
};

/// Parameters of the synthetic instance sampler.
struct SyntheticConfig {
    int n = 10;
    int d = 2;
    std::vector<int> group_sizes{5, 5}; // group 0 is the sensitive group
    double coef_upper = 10.0;           // beta components ~ U(coef_lower, coef_upper)
    double coef_lower = 0.0;
    double bias_mean = 10.0;            // psi components ~ U(0, 2 * bias_mean)
    int bias_sign = -1;
    bool noise = true;
    bool recenter_groups = false;       // equalize group-mean coefficients after sampling
    // Optional overrides for special constructions.
    std::vector<std::pair<double, double>> group_coef_ranges; // per-group (lo, hi)
    double psi_fixed = -1.0;            // >= 0: all sensitive psi components set to this value

    void validate() const {
        if (n < 1) throw ConfigError("SyntheticConfig: n must be positive");
        if (d < 1) throw ConfigError("SyntheticConfig: d must be positive");
        if (group_sizes.empty()) throw ConfigError("SyntheticConfig: no groups");
        int total = 0;
        for (int s : group_sizes) {
            if (s <= 0) throw ConfigError("SyntheticConfig: group sizes must be positive");
            total += s;
        }
        if (total != n) throw ConfigError("SyntheticConfig: group sizes must sum to n");
        if (coef_upper <= coef_lower)
            throw ConfigError("SyntheticConfig: coefficient range must be nonempty");
        if (bias_mean < 0.0) throw ConfigError("SyntheticConfig: bias_mean must be nonnegative");
        if (bias_sign != 1 && bias_sign != -1)
            throw ConfigError("SyntheticConfig: bias_sign must be +1 or -1");
        if (!group_coef_ranges.empty() &&
            group_coef_ranges.size() != group_sizes.size())
            throw ConfigError("SyntheticConfig: group_coef_ranges size must match group count");
    }
};

/// One round's contexts, one vector per arm.
struct Slate {
    long round = 0;
    std::vector<Vector> contexts;

    int n_arms() const { return static_cast<int>(contexts.size()); }
};

/// What happened in one simulated round.
struct RoundOutcome {
    int arm = -1;
    int group = -1;
    bool explored = false;
    double reward = 0.0;        // observed (possibly distorted, noisy) reward
    double true_regret = 0.0;   // against the distortion-free optimum
    double biased_regret = 0.0; // against the noise-free distorted optimum
};

/// Sample a fresh instance. Draw order is fixed (arms in index order, then
/// group distortion vectors), so a given stream always yields the same
/// instance.
inline BanditInstance generate_instance(const SyntheticConfig& cfg, RngStream& rng) {
    cfg.validate();
    BanditInstance inst;
    inst.n = cfg.n;
    inst.d = cfg.d;
    inst.partition = GroupPartition::from_sizes(cfg.group_sizes, 0);
    inst.bias_sign = cfg.bias_sign;
    inst.noise_enabled = cfg.noise;
    inst.betas.reserve(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) {
        double lo = cfg.coef_lower, hi = cfg.coef_upper;
        if (!cfg.group_coef_ranges.empty()) {
            const auto& r = cfg.group_coef_ranges[static_cast<std::size_t>(
                inst.partition.group_of(i))];
            lo = r.first;
            hi = r.second;
        }
        Vector b(cfg.d);
        for (int k = 0; k < cfg.d; ++k) b[k] = rng.uniform(lo, hi);
        inst.betas.push_back(std::move(b));
    }
    inst.psis.assign(static_cast<std::size_t>(inst.partition.m), Vector::Zero(cfg.d));
    Vector psi(cfg.d);
    for (int k = 0; k < cfg.d; ++k)
        psi[k] = cfg.psi_fixed >= 0.0 ? cfg.psi_fixed : rng.uniform(0.0, 2.0 * cfg.bias_mean);
    inst.psis[static_cast<std::size_t>(inst.partition.sensitive_group)] = psi;

    if (cfg.recenter_groups) {
        Vector overall = Vector::Zero(cfg.d);
        for (const auto& b : inst.betas) overall += b;
        overall /= static_cast<double>(cfg.n);
        for (int g = 0; g < inst.partition.m; ++g) {
            const auto idx = inst.partition.members(g);
            Vector mean = Vector::Zero(cfg.d);
            for (int i : idx) mean += inst.betas[static_cast<std::size_t>(i)];
            mean /= static_cast<double>(idx.size());
            for (int i : idx) inst.betas[static_cast<std::size_t>(i)] += overall - mean;
        }
    }
    inst.validate();
    return inst;
}

/// Draw one context per arm: components uniform on [0, 1] scaled by 1/sqrt(d),
/// which keeps every context inside the unit ball.
inline Slate sample_slate(const BanditInstance& inst, long round, RngStream& rng) {
    Slate s;
    s.round = round;
    s.contexts.reserve(static_cast<std::size_t>(inst.n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(inst.d));
    for (int i = 0; i < inst.n; ++i) {
        Vector x(inst.d);
        for (int k = 0; k < inst.d; ++k) x[k] = rng.uniform01() * scale;
        s.contexts.push_back(std::move(x));
    }
    return s;
}

/// Distortion-free expected reward of an arm at context x.
inline double true_reward(const BanditInstance& inst, int arm, const Vector& x) {
    return inst.betas[static_cast<std::size_t>(arm)].dot(x);
}

/// Noise-free observed (possibly distorted) expected reward.
inline double distorted_reward(const BanditInstance& inst, int arm, const Vector& x) {
    const int g = inst.partition.group_of(arm);
    return true_reward(inst, arm, x) +
           static_cast<double>(inst.bias_sign) * inst.psis[static_cast<std::size_t>(g)].dot(x);
}

/// Observed reward: distorted expected reward plus unit normal noise when the
/// instance has noise enabled.
inline double observed_reward(const BanditInstance& inst, int arm, const Vector& x,
                              RngStream& rng) {
    double r = distorted_reward(inst, arm, x);
    if (inst.noise_enabled) r += rng.normal01();
    return r;
}

/// Per-round regret pair for the chosen arm: (true_regret, biased_regret).
/// True regret compares distortion-free rewards; biased regret compares
/// noise-free distorted rewards. Both are nonnegative by construction.
inline std::pair<double, double> round_regrets(const BanditInstance& inst, const Slate& slate,
                                               int chosen) {
    double best_true = -std::numeric_limits<double>::infinity();
    double best_distorted = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.n; ++i) {
        const auto& x = slate.contexts[static_cast<std::size_t>(i)];
        best_true = std::max(best_true, true_reward(inst, i, x));
        best_distorted = std::max(best_distorted, distorted_reward(inst, i, x));
    }
    const auto& xc = slate.contexts[static_cast<std::size_t>(chosen)];
    return {best_true - true_reward(inst, chosen, xc),
            best_distorted - distorted_reward(inst, chosen, xc)};
}

// --- serialization ---------------------------------------------------------

inline nlohmann::json to_json(const BanditInstance& inst) {
    nlohmann::json j;
    j["n"] = inst.n;
    j["d"] = inst.d;
    auto vecs = [](const std::vector<Vector>& vs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : vs) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < v.size(); ++k) row.push_back(v[k]);
            arr.push_back(std::move(row));
        }
        return arr;
    };
    j["betas"] = vecs(inst.betas);
    j["psis"] = vecs(inst.psis);
    j["partition"] = {{"m", inst.partition.m},
                      {"assignment", inst.partition.assignment},
                      {"sensitive_group", inst.partition.sensitive_group}};
    j["bias_sign"] = inst.bias_sign;
    j["noise_enabled"] = inst.noise_enabled;
    return j;
}

inline BanditInstance instance_from_json(const nlohmann::json& j) {
    BanditInstance inst;
    try {
        inst.n = j.at("n").get<int>();
        inst.d = j.at("d").get<int>();
        auto vecs = [&](const nlohmann::json& arr) {
            std::vector<Vector> out;
            for (const auto& row : arr) {
                Vector v(static_cast<Eigen::Index>(row.size()));
                Eigen::Index k = 0;
                for (const auto& x : row) v[k++] = x.get<double>();
                out.push_back(std::move(v));
            }
            return out;
        };
        inst.betas = vecs(j.at("betas"));
        inst.psis = vecs(j.at("psis"));
        const auto& p = j.at("partition");
        inst.partition.m = p.at("m").get<int>();
        inst.partition.assignment = p.at("assignment").get<std::vector<int>>();
        inst.partition.sensitive_group = p.at("sensitive_group").get<int>();
        inst.bias_sign = j.at("bias_sign").get<int>();
        inst.noise_enabled = j.value("noise_enabled", true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("instance_from_json: ") + e.what());
    }
    inst.validate();
    return inst;
}

} // namespace groupfair
