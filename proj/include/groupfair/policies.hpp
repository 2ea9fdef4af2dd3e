#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "groupfair/history.hpp"
#include "groupfair/instance.hpp"
#include "groupfair/numerics.hpp"
#include "groupfair/rng.hpp"

namespace groupfair {

/// Probability of playing a uniformly random arm at round t: t^(-exponent).
inline double exploration_probability(long t, double exponent) {
    if (t < 1) throw std::invalid_argument("exploration_probability: t must be >= 1");
    if (!(exponent > 0.0))
        throw std::invalid_argument("exploration_probability: exponent must be positive");
    return std::pow(static_cast<double>(t), -exponent);
}

struct PolicyConfig {
    double delta = 0.05;              // confidence parameter
    long horizon = 1000;              // T, used by the group-level interval widths
    double exploration_exponent = 1.0 / 3.0;
    double ridge = 1e-6;              // regularization for all least-squares fits
    double sigma2 = 1.0;              // noise variance assumed by the intervals
    bool literal_upper_bounds = false; // group-corrected policy: drop +w on unaffected arms
    bool chain_direct_overlap = false; // chaining: only arms overlapping the leader directly
    std::optional<double> rho;         // m-group offset; unset -> running mean reward

    void validate() const {
        if (!(delta > 0.0 && delta < 1.0))
            throw ConfigError("PolicyConfig: delta must lie in (0, 1)");
        if (horizon < 1) throw ConfigError("PolicyConfig: horizon must be >= 1");
        if (!(exploration_exponent > 0.0))
            throw ConfigError("PolicyConfig: exploration_exponent must be positive");
        if (ridge < 0.0) throw ConfigError("PolicyConfig: ridge must be nonnegative");
        if (!(sigma2 > 0.0)) throw ConfigError("PolicyConfig: sigma2 must be positive");
    }
};

/// Outcome of one select() call. On exploit rounds upper_bounds/widths hold one
/// entry per arm (infinite for never-pulled arms, -inf for arms outside the
/// candidate set); on explore rounds both are empty.
struct Decision {
    int arm = -1;
    bool explored = false;
    std::vector<double> upper_bounds;
    std::vector<double> widths;
};

/// Estimator state shared by every policy: one regression log per arm and one
/// pooled log per group.
struct PolicyState {
    std::vector<RegressionLog> arm_history;
    std::vector<RegressionLog> group_history;
    GroupPartition partition;
    long updates = 0;
    double reward_sum = 0.0;

    PolicyState(int n, int d, GroupPartition part) : partition(std::move(part)) {
        partition.validate();
        if (partition.n_arms() != n) throw ConfigError("PolicyState: partition size mismatch");
        arm_history.assign(static_cast<std::size_t>(n), RegressionLog(d));
        group_history.assign(static_cast<std::size_t>(partition.m), RegressionLog(d));
    }

    void record(int arm, const Vector& x, double reward) {
        arm_history.at(static_cast<std::size_t>(arm)).append(x, reward);
        group_history.at(static_cast<std::size_t>(partition.group_of(arm))).append(x, reward);
        ++updates;
        reward_sum += reward;
    }

    double mean_reward() const {
        return updates > 0 ? reward_sum / static_cast<double>(updates) : 0.0;
    }
};

/// Group-corrected optimistic estimate for an arm in the affected group:
/// own estimate plus own width, minus the affected group's pooled projection,
/// plus the unaffected group's pooled projection, plus both group widths.
inline double bias_corrected_bound(double est, double width, double affected_proj,
                                   double affected_width, double other_proj,
                                   double other_width) {
    return est + width - affected_proj + affected_width + other_proj + other_width;
}

/// m-group corrected optimistic estimate: own estimate plus own width plus a
/// common offset, minus the arm's group projection, plus that group's width.
inline double offset_corrected_bound(double est, double width, double offset, double group_proj,
                                     double group_width) {
    return est + width + offset - group_proj + group_width;
}

class Policy {
public:
    Policy(PolicyConfig cfg, GroupPartition partition, int n, int d)
        : cfg_(cfg), state_(n, d, std::move(partition)), n_(n), d_(d) {
        cfg_.validate();
    }
    virtual ~Policy() = default;

    virtual std::string_view name() const = 0;
    virtual Decision select(const Slate& slate, long t, RngStream& rng) = 0;

    virtual void update(int arm, const Vector& x, double reward) {
        if (arm < 0 || arm >= n_) throw std::invalid_argument("Policy::update: arm out of range");
        if (x.size() != d_) throw std::invalid_argument("Policy::update: context dimension");
        state_.record(arm, x, reward);
    }

    const PolicyState& state() const { return state_; }
    PolicyState& mutable_state() { return state_; }
    const PolicyConfig& config() const { return cfg_; }

protected:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    struct ArmEval {
        bool cold = true;   // never pulled
        double est = 0.0;   // fitted expected reward at the context
        double width = 0.0; // confidence half-width
    };

    void check_slate(const Slate& slate) const {
        if (slate.n_arms() != n_)
            throw std::invalid_argument("Policy::select: slate size does not match arm count");
    }

    bool explore_coin(long t, RngStream& rng) const {
        return rng.uniform01() < exploration_probability(t, cfg_.exploration_exponent);
    }

    /// Per-arm estimate and half-width at tail probability delta / (2 n t).
    ArmEval eval_arm(int arm, const Vector& x, long t) const {
        const auto& log = state_.arm_history[static_cast<std::size_t>(arm)];
        if (log.count() == 0) return {};
        ArmEval e;
        e.cold = false;
        e.est = log.fit(cfg_.ridge).dot(x);
        const double tail = cfg_.delta / (2.0 * static_cast<double>(n_) * static_cast<double>(t));
        e.width = interval_halfwidth(log.variance_at(x, cfg_.sigma2, cfg_.ridge), tail);
        return e;
    }

    /// Group-level half-width at tail probability delta |P_j| / (2 n T).
    double group_width(int group, const Vector& x) const {
        const auto& log = state_.group_history[static_cast<std::size_t>(group)];
        const double tail = cfg_.delta * static_cast<double>(state_.partition.group_size(group)) /
                            (2.0 * static_cast<double>(n_) *
                             static_cast<double>(cfg_.horizon));
        return interval_halfwidth(log.variance_at(x, cfg_.sigma2, cfg_.ridge), tail);
    }

    /// Highest-value index, ties broken toward the lowest index.
    static int argmax(const std::vector<double>& v) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(v.size()); ++i)
            if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
        return best;
    }

    PolicyConfig cfg_;
    PolicyState state_;
    int n_ = 0;
    int d_ = 0;
};

/// Optimistic interval policy: play the arm with the highest upper confidence
/// bound on its fitted reward; explore uniformly with probability t^(-1/3).
class TopIntervalPolicy : public Policy {
public:
    using Policy::Policy;
    std::string_view name() const override { return "top_interval"; }

    Decision select(const Slate& slate, long t, RngStream& rng) override {
        check_slate(slate);
        if (explore_coin(t, rng))
            return {static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n_))), true,
                    {}, {}};
        Decision d;
        d.explored = false;
        d.upper_bounds.resize(static_cast<std::size_t>(n_));
        d.widths.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            const ArmEval e = eval_arm(i, slate.contexts[static_cast<std::size_t>(i)], t);
            d.upper_bounds[static_cast<std::size_t>(i)] = e.cold ? kInf : e.est + e.width;
            d.widths[static_cast<std::size_t>(i)] = e.cold ? kInf : e.width;
        }
        d.arm = argmax(d.upper_bounds);
        return d;
    }
};

/// Group-blind fairness by fiat: draw a group uniformly at random each round,
/// then run the optimistic interval rule restricted to that group's arms.
/// Estimator state is shared across rounds. With a single group this reduces
/// exactly to TopIntervalPolicy (no group draw is consumed).
class NaiveGroupFairPolicy : public Policy {
public:
    NaiveGroupFairPolicy(PolicyConfig cfg, GroupPartition partition, int n, int d)
        : Policy(cfg, std::move(partition), n, d) {
        for (int g = 0; g < state_.partition.m; ++g) members_.push_back(state_.partition.members(g));
    }
    std::string_view name() const override { return "naive_group_fair"; }

    Decision select(const Slate& slate, long t, RngStream& rng) override {
        check_slate(slate);
        const int m = state_.partition.m;
        const int g = m == 1 ? 0
                             : static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(m)));
        const auto& cands = members_[static_cast<std::size_t>(g)];
        if (explore_coin(t, rng)) {
            const auto k = rng.uniform_index(static_cast<std::uint64_t>(cands.size()));
            return {cands[static_cast<std::size_t>(k)], true, {}, {}};
        }
        Decision d;
        d.explored = false;
        d.upper_bounds.assign(static_cast<std::size_t>(n_), -kInf);
        d.widths.assign(static_cast<std::size_t>(n_), 0.0);
        for (int i : cands) {
            const ArmEval e = eval_arm(i, slate.contexts[static_cast<std::size_t>(i)], t);
            d.upper_bounds[static_cast<std::size_t>(i)] = e.cold ? kInf : e.est + e.width;
            d.widths[static_cast<std::size_t>(i)] = e.cold ? kInf : e.width;
        }
        d.arm = argmax(d.upper_bounds);
        return d;
    }

private:
    std::vector<std::vector<int>> members_;
};

/// Randomize over the whole chain of arms whose confidence intervals connect
/// to the leader's interval, rather than trusting the single highest bound.
class IntervalChainingPolicy : public Policy {
public:
    using Policy::Policy;
    std::string_view name() const override { return "interval_chaining"; }

    Decision select(const Slate& slate, long t, RngStream& rng) override {
        check_slate(slate);
        if (explore_coin(t, rng))
            return {static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n_))), true,
                    {}, {}};
        Decision d;
        d.explored = false;
        d.upper_bounds.resize(static_cast<std::size_t>(n_));
        d.widths.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            const ArmEval e = eval_arm(i, slate.contexts[static_cast<std::size_t>(i)], t);
            d.upper_bounds[static_cast<std::size_t>(i)] = e.cold ? kInf : e.est + e.width;
            d.widths[static_cast<std::size_t>(i)] = e.cold ? kInf : e.width;
        }
        const int top = argmax(d.upper_bounds);
        if (!std::isfinite(d.upper_bounds[static_cast<std::size_t>(top)])) {
            d.arm = top; // still warming up: force the never-pulled arm
            return d;
        }
        const auto chain = chain_members(d.upper_bounds, d.widths, top,
                                         cfg_.chain_direct_overlap);
        d.arm = chain[static_cast<std::size_t>(
            rng.uniform_index(static_cast<std::uint64_t>(chain.size())))];
        return d;
    }

    /// Arms connected to `top` through overlapping intervals [u - 2w, u],
    /// either transitively (default) or by direct overlap only. Sorted.
    static std::vector<int> chain_members(const std::vector<double>& upper,
                                          const std::vector<double>& width, int top,
                                          bool direct_only) {
        const int n = static_cast<int>(upper.size());
        auto lo = [&](int i) { return upper[static_cast<std::size_t>(i)] -
                                      2.0 * width[static_cast<std::size_t>(i)]; };
        auto hi = [&](int i) { return upper[static_cast<std::size_t>(i)]; };
        auto overlaps = [&](int a, int b) { return lo(a) <= hi(b) && lo(b) <= hi(a); };
        std::vector<int> out;
        if (direct_only) {
            for (int i = 0; i < n; ++i)
                if (i == top || overlaps(i, top)) out.push_back(i);
            return out;
        }
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::queue<int> frontier;
        seen[static_cast<std::size_t>(top)] = true;
        frontier.push(top);
        while (!frontier.empty()) {
            const int a = frontier.front();
            frontier.pop();
            out.push_back(a);
            for (int b = 0; b < n; ++b)
                if (!seen[static_cast<std::size_t>(b)] && overlaps(a, b)) {
                    seen[static_cast<std::size_t>(b)] = true;
                    frontier.push(b);
                }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// Two-group corrected optimistic policy: the affected group's arms compete on
/// estimates with the pooled group-level distortion subtracted out (plus the
/// corresponding group-level confidence widths), so a systematic per-group
/// shift in observed rewards cannot suppress them.
class GroupFairPolicy : public Policy {
public:
    GroupFairPolicy(PolicyConfig cfg, GroupPartition partition, int n, int d)
        : Policy(cfg, std::move(partition), n, d) {
        if (state_.partition.m != 2)
            throw ConfigError("GroupFairPolicy: exactly two groups required");
    }
    std::string_view name() const override { return "group_fair"; }

    Decision select(const Slate& slate, long t, RngStream& rng) override {
        check_slate(slate);
        if (explore_coin(t, rng))
            return {static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n_))), true,
                    {}, {}};
        const int sens = state_.partition.sensitive_group;
        const int other = 1 - sens;
        bool have[2];
        Vector psi_hat[2];
        for (int j = 0; j < 2; ++j) {
            have[j] = state_.group_history[static_cast<std::size_t>(j)].count() > 0;
            if (have[j]) psi_hat[j] = state_.group_history[static_cast<std::size_t>(j)].fit(cfg_.ridge);
        }
        Decision d;
        d.explored = false;
        d.upper_bounds.resize(static_cast<std::size_t>(n_));
        d.widths.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            const auto& x = slate.contexts[static_cast<std::size_t>(i)];
            const ArmEval e = eval_arm(i, x, t);
            if (e.cold) {
                d.upper_bounds[static_cast<std::size_t>(i)] = kInf;
                d.widths[static_cast<std::size_t>(i)] = kInf;
                continue;
            }
            d.widths[static_cast<std::size_t>(i)] = e.width;
            if (state_.partition.group_of(i) == sens) {
                // Empty group logs contribute neither projection nor width.
                const double sens_proj = have[sens] ? psi_hat[sens].dot(x) : 0.0;
                const double sens_b = have[sens] ? group_width(sens, x) : 0.0;
                const double other_proj = have[other] ? psi_hat[other].dot(x) : 0.0;
                const double other_b = have[other] ? group_width(other, x) : 0.0;
                d.upper_bounds[static_cast<std::size_t>(i)] =
                    bias_corrected_bound(e.est, e.width, sens_proj, sens_b, other_proj, other_b);
            } else {
                d.upper_bounds[static_cast<std::size_t>(i)] =
                    e.est + (cfg_.literal_upper_bounds ? 0.0 : e.width);
            }
        }
        d.arm = argmax(d.upper_bounds);
        return d;
    }
};

/// m-group generalization: every arm's estimate is corrected by its own
/// group's pooled projection and width, plus a common offset rho restoring a
/// shared reward scale. With rho unset, the running mean observed reward is
/// used.
class GroupFairMultiPolicy : public Policy {
public:
    GroupFairMultiPolicy(PolicyConfig cfg, GroupPartition partition, int n, int d)
        : Policy(cfg, std::move(partition), n, d) {
        if (state_.partition.m < 2)
            throw ConfigError("GroupFairMultiPolicy: at least two groups required");
    }
    std::string_view name() const override { return "group_fair_multi"; }

    Decision select(const Slate& slate, long t, RngStream& rng) override {
        check_slate(slate);
        if (explore_coin(t, rng))
            return {static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n_))), true,
                    {}, {}};
        const double rho = cfg_.rho ? *cfg_.rho : state_.mean_reward();
        const int m = state_.partition.m;
        std::vector<bool> have(static_cast<std::size_t>(m));
        std::vector<Vector> psi_hat(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            have[static_cast<std::size_t>(j)] =
                state_.group_history[static_cast<std::size_t>(j)].count() > 0;
            if (have[static_cast<std::size_t>(j)])
                psi_hat[static_cast<std::size_t>(j)] =
                    state_.group_history[static_cast<std::size_t>(j)].fit(cfg_.ridge);
        }
        Decision d;
        d.explored = false;
        d.upper_bounds.resize(static_cast<std::size_t>(n_));
        d.widths.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            const auto& x = slate.contexts[static_cast<std::size_t>(i)];
            const ArmEval e = eval_arm(i, x, t);
            if (e.cold) {
                d.upper_bounds[static_cast<std::size_t>(i)] = kInf;
                d.widths[static_cast<std::size_t>(i)] = kInf;
                continue;
            }
            const int j = state_.partition.group_of(i);
            const double proj = have[static_cast<std::size_t>(j)] ? psi_hat[static_cast<std::size_t>(j)].dot(x) : 0.0;
            const double b = have[static_cast<std::size_t>(j)] ? group_width(j, x) : 0.0;
            d.widths[static_cast<std::size_t>(i)] = e.width;
            d.upper_bounds[static_cast<std::size_t>(i)] =
                offset_corrected_bound(e.est, e.width, rho, proj, b);
        }
        d.arm = argmax(d.upper_bounds);
        return d;
    }
};

inline const std::vector<std::string>& policy_names() {
    static const std::vector<std::string> names{"top_interval", "interval_chaining",
                                                "naive_group_fair", "group_fair",
                                                "group_fair_multi"};
    return names;
}

inline std::unique_ptr<Policy> make_policy(const std::string& name, const PolicyConfig& cfg,
                                           const GroupPartition& partition, int n, int d) {
    if (name == "top_interval") return std::make_unique<TopIntervalPolicy>(cfg, partition, n, d);
    if (name == "interval_chaining")
        return std::make_unique<IntervalChainingPolicy>(cfg, partition, n, d);
    if (name == "naive_group_fair")
        return std::make_unique<NaiveGroupFairPolicy>(cfg, partition, n, d);
    if (name == "group_fair") return std::make_unique<GroupFairPolicy>(cfg, partition, n, d);
    if (name == "group_fair_multi")
        return std::make_unique<GroupFairMultiPolicy>(cfg, partition, n, d);
    throw ConfigError("unknown policy: " + name);
}

} // namespace groupfair
