#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "groupfair/errors.hpp"

namespace groupfair {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Standard normal CDF, evaluated through erfc for accuracy in both tails.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

/// Standard normal density.
inline double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) * 0.39894228040143267794;
}

namespace detail {

// Rational approximation of the standard normal quantile (Wichura-style,
// three branches), accurate to well below 1e-12 over (0, 1).
inline double normal_quantile_approx(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        z = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-6) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        z = num / den;
    }
    return (q < 0.0) ? -z : z;
}

} // namespace detail

/// Inverse standard normal CDF. Rational approximation plus one Newton
/// refinement against the erfc-based CDF; absolute error below 1e-9.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must lie strictly in (0, 1)");
    double z = detail::normal_quantile_approx(p);
    const double dens = normal_pdf(z);
    if (dens > 1e-300) z -= (normal_cdf(z) - p) / dens;
    return z;
}

/// Solve (gram + ridge*I) beta = xty. `gram` must be the d x d moment matrix
/// X'X; `xty` the d-vector X'Y. With ridge = 0 a rank-deficient system throws.
inline Vector ols_solve_gram(const Matrix& gram, const Vector& xty, double ridge) {
    if (gram.rows() != gram.cols())
        throw std::invalid_argument("ols_solve_gram: gram matrix must be square");
    if (xty.size() != gram.rows())
        throw std::invalid_argument("ols_solve_gram: xty size does not match gram");
    if (ridge < 0.0)
        throw std::invalid_argument("ols_solve_gram: ridge must be nonnegative");
    const Eigen::Index d = gram.rows();
    Matrix g = gram;
    if (ridge > 0.0) g.diagonal().array() += ridge;
    else {
        Eigen::FullPivLU<Matrix> lu(g);
        if (lu.rank() < d)
            throw SingularSystemError("ols_solve_gram: singular system and ridge is zero");
    }
    const Eigen::LDLT<Matrix> ldlt(g);
    if (ldlt.info() != Eigen::Success)
        throw SingularSystemError("ols_solve_gram: factorization failed");
    return ldlt.solve(xty);
}

/// Least-squares coefficients for Y ~ X beta with optional ridge term.
inline Vector ols_fit(const Matrix& X, const Vector& y, double ridge = 0.0) {
    if (X.rows() != y.size())
        throw std::invalid_argument("ols_fit: row count of X must match length of y");
    return ols_solve_gram(X.transpose() * X, X.transpose() * y, ridge);
}

/// sigma^2 * x' (gram + ridge*I)^{-1} x, the predictive variance of the least
/// squares estimate at context x. Returns 0 for the zero context.
inline double predictive_variance_gram(const Matrix& gram, const Vector& x, double sigma2,
                                       double ridge) {
    if (gram.rows() != gram.cols())
        throw std::invalid_argument("predictive_variance: gram matrix must be square");
    if (x.size() != gram.rows())
        throw std::invalid_argument("predictive_variance: context size does not match gram");
    if (sigma2 < 0.0)
        throw std::invalid_argument("predictive_variance: sigma2 must be nonnegative");
    if (ridge < 0.0)
        throw std::invalid_argument("predictive_variance: ridge must be nonnegative");
    if (x.isZero(0.0)) return 0.0;
    Matrix g = gram;
    if (ridge > 0.0) g.diagonal().array() += ridge;
    else {
        Eigen::FullPivLU<Matrix> lu(g);
        if (lu.rank() < gram.rows())
            throw SingularSystemError("predictive_variance: singular system and ridge is zero");
    }
    const Eigen::LDLT<Matrix> ldlt(g);
    if (ldlt.info() != Eigen::Success)
        throw SingularSystemError("predictive_variance: factorization failed");
    const double v = sigma2 * x.dot(ldlt.solve(x));
    return v > 0.0 ? v : 0.0;
}

/// Predictive variance from the raw design matrix.
inline double predictive_variance(const Matrix& X, const Vector& x, double sigma2,
                                  double ridge = 0.0) {
    if (X.cols() != x.size())
        throw std::invalid_argument("predictive_variance: column count of X must match x");
    return predictive_variance_gram(X.transpose() * X, x, sigma2, ridge);
}

/// Half-width of a two-sided confidence interval: sqrt(variance) times the
/// (1 - tail_prob) normal quantile. tail_prob must lie in (0, 0.5).
inline double interval_halfwidth(double variance, double tail_prob) {
    if (variance < 0.0)
        throw std::invalid_argument("interval_halfwidth: variance must be nonnegative");
    if (!(tail_prob > 0.0 && tail_prob < 0.5))
        throw std::invalid_argument("interval_halfwidth: tail_prob must lie in (0, 0.5)");
    if (variance == 0.0) return 0.0;
    return std::sqrt(variance) * normal_quantile(1.0 - tail_prob);
}

} // namespace groupfair
