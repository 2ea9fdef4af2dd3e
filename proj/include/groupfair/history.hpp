#pragma once

#include <Eigen/Dense>
#include <vector>

#include "groupfair/numerics.hpp"

namespace groupfair {

/// Append-only regression log: keeps the raw (context, reward) pairs plus the
/// running moment matrices, so fits cost O(d^3) per round instead of growing
/// with the history length.
class RegressionLog {
public:
    RegressionLog() = default;
    explicit RegressionLog(int dim)
        : dim_(dim), gram_(Matrix::Zero(dim, dim)), xty_(Vector::Zero(dim)) {}

    void append(const Vector& x, double y) {
        gram_.noalias() += x * x.transpose();
        xty_.noalias() += x * y;
        xs_.push_back(x);
        ys_.push_back(y);
    }

    long count() const { return static_cast<long>(ys_.size()); }
    int dim() const { return dim_; }
    const Matrix& gram() const { return gram_; }
    const Vector& xty() const { return xty_; }

    /// Raw design matrix (one row per observation), mainly for audits.
    Matrix design() const {
        Matrix X(static_cast<Eigen::Index>(xs_.size()), dim_);
        for (std::size_t r = 0; r < xs_.size(); ++r) X.row(static_cast<Eigen::Index>(r)) = xs_[r];
        return X;
    }

    Vector rewards() const {
        Vector y(static_cast<Eigen::Index>(ys_.size()));
        for (std::size_t r = 0; r < ys_.size(); ++r) y[static_cast<Eigen::Index>(r)] = ys_[r];
        return y;
    }

    Vector fit(double ridge) const { return ols_solve_gram(gram_, xty_, ridge); }

    double variance_at(const Vector& x, double sigma2, double ridge) const {
        return predictive_variance_gram(gram_, x, sigma2, ridge);
    }

private:
    int dim_ = 0;
    Matrix gram_;
    Vector xty_;
    std::vector<Vector> xs_;
    std::vector<double> ys_;
};

} // namespace groupfair
