#pragma once

// Shared test helpers: independent reference implementations (used to check
// the library's numeric kernels against a second route) and small instance
// builders. The reference solvers here deliberately avoid the library's own
// linear-algebra path.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "groupfair/groupfair.hpp"

namespace testsupport {

/// Reference least-squares solve: assemble the normal equations with plain
/// loops and solve by Gauss-Jordan elimination with partial pivoting.
inline std::vector<double> reference_ols(const std::vector<std::vector<double>>& X,
                                         const std::vector<double>& y, double ridge) {
    const std::size_t rows = X.size();
    const std::size_t d = rows ? X[0].size() : 0;
    if (y.size() != rows) throw std::invalid_argument("reference_ols: size mismatch");
    std::vector<std::vector<double>> a(d, std::vector<double>(d + 1, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < rows; ++r) s += X[r][i] * X[r][j];
            a[i][j] = s + (i == j ? ridge : 0.0);
        }
        double s = 0.0;
        for (std::size_t r = 0; r < rows; ++r) s += X[r][i] * y[r];
        a[i][d] = s;
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-13)
            throw std::runtime_error("reference_ols: singular system");
        std::swap(a[col], a[pivot]);
        const double diag = a[col][col];
        for (std::size_t j = col; j <= d; ++j) a[col][j] /= diag;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            for (std::size_t j = col; j <= d; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<double> beta(d);
    for (std::size_t i = 0; i < d; ++i) beta[i] = a[i][d];
    return beta;
}

inline std::vector<std::vector<double>> to_rows(const groupfair::Matrix& X) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(X.rows()),
                                          std::vector<double>(static_cast<std::size_t>(X.cols())));
    for (Eigen::Index r = 0; r < X.rows(); ++r)
        for (Eigen::Index c = 0; c < X.cols(); ++c)
            rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = X(r, c);
    return rows;
}

inline std::vector<double> to_vec(const groupfair::Vector& v) {
    return {v.data(), v.data() + v.size()};
}

/// erf-based standard normal CDF used as the ground truth for quantiles.
inline double reference_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Reference quantile by bisection on reference_cdf.
inline double reference_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("reference_quantile: bad p");
    double lo = -40.0, hi = 40.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (reference_cdf(mid) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Hand-assembled two-group instance with explicit coefficients.
inline groupfair::BanditInstance make_instance(const std::vector<std::vector<double>>& betas,
                                               const std::vector<int>& group_sizes,
                                               const std::vector<double>& psi_sensitive,
                                               int bias_sign = -1, bool noise = false) {
    groupfair::BanditInstance inst;
    inst.n = static_cast<int>(betas.size());
    inst.d = static_cast<int>(betas[0].size());
    inst.partition = groupfair::GroupPartition::from_sizes(group_sizes, 0);
    inst.bias_sign = bias_sign;
    inst.noise_enabled = noise;
    for (const auto& b : betas) {
        groupfair::Vector v(inst.d);
        for (int k = 0; k < inst.d; ++k) v[k] = b[static_cast<std::size_t>(k)];
        inst.betas.push_back(std::move(v));
    }
    inst.psis.assign(static_cast<std::size_t>(inst.partition.m),
                     groupfair::Vector::Zero(inst.d));
    groupfair::Vector psi(inst.d);
    for (int k = 0; k < inst.d; ++k) psi[k] = psi_sensitive[static_cast<std::size_t>(k)];
    inst.psis[0] = psi;
    inst.validate();
    return inst;
}

/// Feed `pulls` observations of every arm into the policy, contexts drawn from
/// the given stream, rewards from the noise-free observation model.
inline void force_pulls(groupfair::Policy& policy, const groupfair::BanditInstance& inst,
                        int pulls, groupfair::RngStream& rng) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(inst.d));
    for (int p = 0; p < pulls; ++p)
        for (int arm = 0; arm < inst.n; ++arm) {
            groupfair::Vector x(inst.d);
            for (int k = 0; k < inst.d; ++k) x[k] = rng.uniform01() * scale;
            policy.update(arm, x, groupfair::distorted_reward(inst, arm, x));
        }
}

} // namespace testsupport
