#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "support.hpp"

using namespace groupfair;
using Catch::Approx;

TEST_CASE("least squares matches hand-worked examples") {
    SECTION("single regressor") {
        Matrix X(3, 1);
        X << 1, 2, 3;
        Vector y(3);
        y << 2, 4, 6;
        REQUIRE(ols_fit(X, y, 0.0)[0] == Approx(2.0).margin(1e-12));
    }
    SECTION("identity design returns the targets") {
        Matrix X = Matrix::Identity(4, 4);
        Vector y(4);
        y << 3, -1, 0.5, 7;
        const Vector beta = ols_fit(X, y, 0.0);
        for (int k = 0; k < 4; ++k) REQUIRE(beta[k] == Approx(y[k]).margin(1e-12));
    }
    SECTION("ridge resolves an underdetermined row") {
        Matrix X(1, 2);
        X << 1, 1;
        Vector y(1);
        y << 2;
        const Vector beta = ols_fit(X, y, 1e-6);
        REQUIRE(beta[0] == Approx(1.0).margin(1e-5));
        REQUIRE(beta[1] == Approx(1.0).margin(1e-5));
    }
}

TEST_CASE("least squares rejects invalid input") {
    Matrix X(2, 2);
    X << 1, 0, 0, 1;
    Vector y(3);
    y << 1, 2, 3;
    REQUIRE_THROWS_AS(ols_fit(X, y, 0.0), std::invalid_argument);
    Vector y2(2);
    y2 << 1, 2;
    REQUIRE_THROWS_AS(ols_fit(X, y2, -1e-9), std::invalid_argument);
    Matrix Xs(1, 2);
    Xs << 1, 1;
    Vector ys(1);
    ys << 2;
    REQUIRE_THROWS_AS(ols_fit(Xs, ys, 0.0), SingularSystemError);
}

TEST_CASE("square full-rank solve recovers the generating coefficients") {
    RngStream rng(20250818, 0, 77);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 2 + static_cast<int>(rng.uniform_index(5));
        Matrix X(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                X(r, c) = rng.uniform(-1.0, 1.0) + (r == c ? 2.0 * d : 0.0);
        Vector beta_star(d);
        for (int k = 0; k < d; ++k) beta_star[k] = rng.uniform(-3.0, 3.0);
        const Vector y = X * beta_star;
        const Vector beta = ols_fit(X, y, 0.0);
        for (int k = 0; k < d; ++k) REQUIRE(beta[k] == Approx(beta_star[k]).margin(1e-8));
    }
}

TEST_CASE("fuzzed least squares agrees with the reference normal-equation solve") {
    RngStream rng(31337, 0, 78);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 1 + static_cast<int>(rng.uniform_index(6));
        const int rows = d + 5 + static_cast<int>(rng.uniform_index(20));
        const double ridge = (rep % 3 == 0) ? 0.0 : (rep % 3 == 1 ? 1e-6 : 1e-3);
        Matrix X(rows, d);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < d; ++c) X(r, c) = rng.uniform(-2.0, 2.0);
        Vector y(rows);
        for (int r = 0; r < rows; ++r) y[r] = rng.uniform(-5.0, 5.0);
        const Vector beta = ols_fit(X, y, ridge);
        const auto ref = testsupport::reference_ols(testsupport::to_rows(X),
                                                    testsupport::to_vec(y), ridge);
        for (int k = 0; k < d; ++k) REQUIRE(beta[k] == Approx(ref[static_cast<std::size_t>(k)]).margin(1e-8));
    }
}

TEST_CASE("least squares is invariant to observation order") {
    RngStream rng(99, 0, 79);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + static_cast<int>(rng.uniform_index(3));
        const int rows = d + 4 + static_cast<int>(rng.uniform_index(10));
        Matrix X(rows, d);
        Vector y(rows);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < d; ++c) X(r, c) = rng.uniform(-1.0, 1.0);
            y[r] = rng.uniform(-2.0, 2.0);
        }
        std::vector<int> perm(static_cast<std::size_t>(rows));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), std::mt19937_64(rep));
        Matrix Xp(rows, d);
        Vector yp(rows);
        for (int r = 0; r < rows; ++r) {
            Xp.row(r) = X.row(perm[static_cast<std::size_t>(r)]);
            yp[r] = y[perm[static_cast<std::size_t>(r)]];
        }
        const Vector a = ols_fit(X, y, 1e-6);
        const Vector b = ols_fit(Xp, yp, 1e-6);
        for (int k = 0; k < d; ++k) REQUIRE(a[k] == Approx(b[k]).margin(1e-9));
    }
}

TEST_CASE("predictive variance matches the closed-form example") {
    Matrix X(4, 2);
    X << 1, 0, 0, 1, 1, 0, 0, 1;
    Vector x(2);
    x << 1, 0;
    REQUIRE(predictive_variance(X, x, 1.0, 0.0) == Approx(0.5).margin(1e-12));
    REQUIRE(predictive_variance(X, x, 2.0, 0.0) == Approx(1.0).margin(1e-12));
    REQUIRE(predictive_variance(X, Vector::Zero(2), 1.0, 0.0) == 0.0);
}

TEST_CASE("predictive variance shrinks as observations accumulate") {
    RngStream rng(555, 0, 80);
    for (int rep = 0; rep < 25; ++rep) {
        const int d = 2 + static_cast<int>(rng.uniform_index(3));
        Matrix G = Matrix::Zero(d, d);
        Vector x(d);
        for (int k = 0; k < d; ++k) x[k] = rng.uniform(0.0, 1.0);
        double prev = std::numeric_limits<double>::infinity();
        for (int obs = 0; obs < 12; ++obs) {
            Vector row(d);
            for (int k = 0; k < d; ++k) row[k] = rng.uniform(-1.0, 1.0);
            G += row * row.transpose();
            const double v = predictive_variance_gram(G, x, 1.0, 1e-6);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("predictive variance rejects invalid input") {
    Matrix X(2, 2);
    X << 1, 0, 0, 1;
    Vector x(3);
    x << 1, 0, 0;
    REQUIRE_THROWS_AS(predictive_variance(X, x, 1.0, 0.0), std::invalid_argument);
    Vector x2(2);
    x2 << 1, 0;
    REQUIRE_THROWS_AS(predictive_variance(X, x2, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("normal quantile reproduces frozen reference points") {
    REQUIRE(normal_quantile(0.5) == Approx(0.0).margin(1e-12));
    REQUIRE(normal_quantile(0.975) == Approx(1.95996398).margin(1e-8));
    REQUIRE(normal_quantile(0.0025) == Approx(-2.80703377).margin(1e-8));
    REQUIRE_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(normal_quantile(-0.25), std::invalid_argument);
}

TEST_CASE("normal quantile round-trips through the erf CDF across both tails") {
    // log-spaced grid over [1e-6, 1 - 1e-6]
    const double lo = -6.0, hi = std::log10(0.5);
    for (int k = 0; k <= 60; ++k) {
        const double p = std::pow(10.0, lo + (hi - lo) * k / 60.0);
        for (const double q : {p, 1.0 - p}) {
            const double err = std::fabs(testsupport::reference_cdf(normal_quantile(q)) - q);
            INFO("p = " << q);
            REQUIRE(err <= 1e-8);
        }
    }
}

TEST_CASE("normal quantile agrees with bisection on the erf CDF") {
    for (const double p : {1e-6, 1e-4, 0.01, 0.0025, 0.3, 0.5, 0.7, 0.975, 0.9999, 1.0 - 1e-6}) {
        REQUIRE(normal_quantile(p) == Approx(testsupport::reference_quantile(p)).margin(1e-9));
    }
}

TEST_CASE("normal quantile is antisymmetric and increasing") {
    double prev = -std::numeric_limits<double>::infinity();
    for (int k = 1; k < 40; ++k) {
        const double p = k / 40.0;
        const double z = normal_quantile(p);
        REQUIRE(z > prev);
        prev = z;
        REQUIRE(z == Approx(-normal_quantile(1.0 - p)).margin(1e-10));
    }
}

TEST_CASE("interval halfwidth matches frozen examples and scales with sigma") {
    REQUIRE(interval_halfwidth(1.0, 0.0025) == Approx(2.80703377).margin(1e-8));
    REQUIRE(interval_halfwidth(4.0, 0.0025) == Approx(5.61406754).margin(1e-8));
    REQUIRE(interval_halfwidth(0.0, 0.01) == 0.0);
    REQUIRE_THROWS_AS(interval_halfwidth(-1.0, 0.01), std::invalid_argument);
    REQUIRE_THROWS_AS(interval_halfwidth(1.0, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(interval_halfwidth(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("interval halfwidth is monotone in variance and tail probability") {
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double w = interval_halfwidth(0.1 * k, 0.01);
        REQUIRE(w > prev);
        prev = w;
    }
    prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 20; ++k) {
        const double w = interval_halfwidth(1.0, 0.49 * k / 20.0);
        REQUIRE(w < prev);
        prev = w;
    }
}

TEST_CASE("rng streams are reproducible and purpose-separated") {
    SECTION("equal keys give identical long sequences") {
        RngStream a(42, 7, 3), b(42, 7, 3);
        for (int i = 0; i < 1000000; ++i) REQUIRE(a.raw() == b.raw());
    }
    SECTION("distinct purposes differ") {
        RngStream a(42, 7, 3), b(42, 7, 4), c(42, 8, 3), d(43, 7, 3);
        bool differs_b = false, differs_c = false, differs_d = false;
        for (int i = 0; i < 16; ++i) {
            const auto x = a.raw();
            differs_b = differs_b || (x != b.raw());
            differs_c = differs_c || (x != c.raw());
            differs_d = differs_d || (x != d.raw());
        }
        REQUIRE(differs_b);
        REQUIRE(differs_c);
        REQUIRE(differs_d);
    }
    SECTION("uniform01 stays in [0, 1)") {
        RngStream r(1, 2, 3);
        for (int i = 0; i < 10000; ++i) {
            const double u = r.uniform01();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
        }
    }
    SECTION("uniform_index covers the range without bias") {
        RngStream r(9, 0, 1);
        std::vector<int> counts(7, 0);
        const int draws = 70000;
        for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(r.uniform_index(7))];
        for (int c : counts) REQUIRE(std::fabs(c - draws / 7.0) < 5.0 * std::sqrt(draws / 7.0));
        REQUIRE_THROWS_AS(r.uniform_index(0), std::invalid_argument);
    }
    SECTION("normal draws have unit moments") {
        RngStream r(77, 0, 2);
        const int draws = 200000;
        double sum = 0.0, ss = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double z = r.normal01();
            sum += z;
            ss += z * z;
        }
        const double mean = sum / draws;
        const double var = ss / draws - mean * mean;
        REQUIRE(std::fabs(mean) < 0.02);
        REQUIRE(std::fabs(var - 1.0) < 0.05);
    }
}
