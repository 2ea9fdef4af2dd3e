#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support.hpp"

using namespace groupfair;
using Catch::Approx;

TEST_CASE("group partition validates its shape") {
    REQUIRE_THROWS_AS(GroupPartition(2, {0, 0, 0}), ConfigError); // group 1 empty
    REQUIRE_THROWS_AS(GroupPartition(2, {0, 1, 2}), ConfigError); // out of range
    REQUIRE_THROWS_AS(GroupPartition::from_sizes({3, 0}), ConfigError);
    REQUIRE_THROWS_AS(GroupPartition(2, {0, 1}, 5), ConfigError);

    const auto p = GroupPartition::from_sizes({2, 3});
    REQUIRE(p.n_arms() == 5);
    REQUIRE(p.group_of(1) == 0);
    REQUIRE(p.group_of(2) == 1);
    REQUIRE(p.group_size(1) == 3);
    REQUIRE(p.members(0) == std::vector<int>{0, 1});

    // single-group partitions are legal (used by degenerate policies)
    REQUIRE_NOTHROW(GroupPartition::from_sizes({4}));
}

TEST_CASE("instance sampler honours the configured ranges") {
    SyntheticConfig cfg;
    cfg.n = 10;
    cfg.d = 3;
    cfg.group_sizes = {5, 5};
    cfg.coef_upper = 7.0;
    cfg.bias_mean = 4.0;
    RngStream rng(11, 0, streams::kInstance);
    const auto inst = generate_instance(cfg, rng);
    REQUIRE(inst.n == 10);
    REQUIRE(inst.d == 3);
    for (const auto& b : inst.betas)
        for (int k = 0; k < 3; ++k) {
            REQUIRE(b[k] >= 0.0);
            REQUIRE(b[k] <= 7.0);
        }
    for (int k = 0; k < 3; ++k) {
        REQUIRE(inst.psis[0][k] >= 0.0);
        REQUIRE(inst.psis[0][k] <= 8.0);
        REQUIRE(inst.psis[1][k] == 0.0);
    }
}

TEST_CASE("zero distortion mean gives an unbiased instance") {
    SyntheticConfig cfg;
    cfg.bias_mean = 0.0;
    RngStream rng(3, 0, streams::kInstance);
    const auto inst = generate_instance(cfg, rng);
    REQUIRE(inst.psis[0].isZero(0.0));
}

TEST_CASE("distortion components average to the configured mean") {
    SyntheticConfig cfg; // mu = 10, d = 2
    double sum = 0.0;
    long count = 0;
    for (int i = 0; i < 100000; ++i) {
        RngStream rng(static_cast<std::uint64_t>(i), 0, streams::kInstance);
        const auto inst = generate_instance(cfg, rng);
        for (int k = 0; k < cfg.d; ++k) {
            sum += inst.psis[0][k];
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    REQUIRE(mean > 9.9);
    REQUIRE(mean < 10.1);
}

TEST_CASE("instance sampler rejects inconsistent configuration") {
    SyntheticConfig cfg;
    cfg.group_sizes = {5, 4}; // sums to 9, n = 10
    RngStream rng(1, 0, streams::kInstance);
    REQUIRE_THROWS_AS(generate_instance(cfg, rng), ConfigError);
    cfg.group_sizes = {5, 5};
    cfg.coef_upper = 0.0;
    RngStream rng2(1, 0, streams::kInstance);
    REQUIRE_THROWS_AS(generate_instance(cfg, rng2), ConfigError);
}

TEST_CASE("instance sampling is reproducible per stream key") {
    SyntheticConfig cfg;
    RngStream a(42, 0, streams::kInstance), b(42, 0, streams::kInstance);
    const auto ia = generate_instance(cfg, a);
    const auto ib = generate_instance(cfg, b);
    for (int i = 0; i < cfg.n; ++i)
        REQUIRE(ia.betas[static_cast<std::size_t>(i)] == ib.betas[static_cast<std::size_t>(i)]);
    REQUIRE(ia.psis[0] == ib.psis[0]);
}

TEST_CASE("group recentering equalizes group-mean coefficients") {
    SyntheticConfig cfg;
    cfg.recenter_groups = true;
    RngStream rng(5, 0, streams::kInstance);
    const auto inst = generate_instance(cfg, rng);
    Vector mean0 = Vector::Zero(cfg.d), mean1 = Vector::Zero(cfg.d);
    for (int i : inst.partition.members(0)) mean0 += inst.betas[static_cast<std::size_t>(i)];
    for (int i : inst.partition.members(1)) mean1 += inst.betas[static_cast<std::size_t>(i)];
    mean0 /= 5.0;
    mean1 /= 5.0;
    for (int k = 0; k < cfg.d; ++k) REQUIRE(mean0[k] == Approx(mean1[k]).margin(1e-12));
}

TEST_CASE("per-group coefficient ranges and fixed distortion are honoured") {
    SyntheticConfig cfg;
    cfg.group_coef_ranges = {{0.0, 4.0}, {6.0, 10.0}};
    cfg.psi_fixed = 12.0;
    RngStream rng(8, 0, streams::kInstance);
    const auto inst = generate_instance(cfg, rng);
    for (int i : inst.partition.members(0))
        for (int k = 0; k < cfg.d; ++k) {
            REQUIRE(inst.betas[static_cast<std::size_t>(i)][k] >= 0.0);
            REQUIRE(inst.betas[static_cast<std::size_t>(i)][k] <= 4.0);
        }
    for (int i : inst.partition.members(1))
        for (int k = 0; k < cfg.d; ++k) {
            REQUIRE(inst.betas[static_cast<std::size_t>(i)][k] >= 6.0);
            REQUIRE(inst.betas[static_cast<std::size_t>(i)][k] <= 10.0);
        }
    for (int k = 0; k < cfg.d; ++k) REQUIRE(inst.psis[0][k] == 12.0);
}

TEST_CASE("slates stay inside the unit ball") {
    SyntheticConfig cfg;
    cfg.d = 1;
    RngStream rng(7, 0, streams::kInstance);
    auto inst = generate_instance(cfg, rng);
    RngStream srng(7, 1, streams::kSlate);
    auto slate = sample_slate(inst, 1, srng);
    for (const auto& x : slate.contexts) {
        REQUIRE(x[0] >= 0.0);
        REQUIRE(x[0] <= 1.0);
    }

    cfg.d = 4;
    RngStream rng2(7, 0, streams::kInstance);
    inst = generate_instance(cfg, rng2);
    for (long t = 1; t <= 50; ++t) {
        RngStream sr(7, static_cast<std::uint64_t>(t), streams::kSlate);
        slate = sample_slate(inst, t, sr);
        for (const auto& x : slate.contexts) {
            for (int k = 0; k < 4; ++k) {
                REQUIRE(x[k] >= 0.0);
                REQUIRE(x[k] <= 0.5);
            }
            REQUIRE(x.norm() <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("slate draws are identical for equal stream keys") {
    SyntheticConfig cfg;
    RngStream rng(21, 0, streams::kInstance);
    const auto inst = generate_instance(cfg, rng);
    RngStream a(21, 9, streams::kSlate), b(21, 9, streams::kSlate);
    const auto sa = sample_slate(inst, 9, a);
    const auto sb = sample_slate(inst, 9, b);
    for (int i = 0; i < inst.n; ++i)
        REQUIRE(sa.contexts[static_cast<std::size_t>(i)] ==
                sb.contexts[static_cast<std::size_t>(i)]);
}

TEST_CASE("reward model matches hand-worked values") {
    const auto inst = testsupport::make_instance({{1.0, 2.0}, {1.0, 2.0}}, {1, 1}, {4.0, 0.0});
    Vector x(2);
    x << 0.5, 0.25;
    REQUIRE(true_reward(inst, 0, x) == Approx(1.0).margin(1e-12));
    REQUIRE(true_reward(inst, 1, x) == Approx(1.0).margin(1e-12));
    // arm 0 is in the distorted group, sign -1
    REQUIRE(distorted_reward(inst, 0, x) == Approx(-1.0).margin(1e-12));
    REQUIRE(distorted_reward(inst, 1, x) == Approx(1.0).margin(1e-12));

    auto flipped = inst;
    flipped.bias_sign = 1;
    REQUIRE(distorted_reward(flipped, 0, x) == Approx(3.0).margin(1e-12));

    RngStream rng(1, 1, streams::kNoise);
    REQUIRE(observed_reward(inst, 0, x, rng) == Approx(-1.0).margin(1e-12)); // noise disabled
}

TEST_CASE("observation noise is centred on the distorted reward") {
    auto inst = testsupport::make_instance({{1.0, 2.0}, {1.0, 2.0}}, {1, 1}, {4.0, 0.0});
    inst.noise_enabled = true;
    Vector x(2);
    x << 0.5, 0.25;
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        RngStream rng(static_cast<std::uint64_t>(i), 1, streams::kNoise);
        sum += observed_reward(inst, 0, x, rng);
    }
    REQUIRE(sum / draws == Approx(-1.0).margin(0.02));
}

TEST_CASE("round regrets compare against the round optimum") {
    const auto inst = testsupport::make_instance({{1.0}, {2.0}}, {1, 1}, {0.5});
    Slate slate;
    slate.round = 1;
    Vector x0(1), x1(1);
    x0 << 1.0;
    x1 << 0.5;
    slate.contexts = {x0, x1};
    // true rewards: 1.0 and 1.0; distorted: 0.5 and 1.0
    auto [t0, b0] = round_regrets(inst, slate, 0);
    REQUIRE(t0 == Approx(0.0).margin(1e-12));
    REQUIRE(b0 == Approx(0.5).margin(1e-12));
    auto [t1, b1] = round_regrets(inst, slate, 1);
    REQUIRE(t1 == Approx(0.0).margin(1e-12));
    REQUIRE(b1 == Approx(0.0).margin(1e-12));
}

TEST_CASE("regrets are nonnegative and vanish without distortion") {
    SyntheticConfig cfg;
    cfg.bias_mean = 0.0;
    RngStream rng(17, 0, streams::kInstance);
    const auto inst = generate_instance(cfg, rng);
    for (long t = 1; t <= 200; ++t) {
        RngStream sr(17, static_cast<std::uint64_t>(t), streams::kSlate);
        const auto slate = sample_slate(inst, t, sr);
        for (int arm = 0; arm < inst.n; ++arm) {
            const auto [tr, br] = round_regrets(inst, slate, arm);
            REQUIRE(tr >= 0.0);
            REQUIRE(br >= 0.0);
            REQUIRE(tr == Approx(br).margin(1e-12)); // psi = 0: both notions coincide
        }
    }
}

TEST_CASE("instances serialize losslessly") {
    SyntheticConfig cfg;
    cfg.d = 3;
    RngStream rng(23, 0, streams::kInstance);
    const auto inst = generate_instance(cfg, rng);
    const auto j = to_json(inst);
    const auto back = instance_from_json(j);
    REQUIRE(back.n == inst.n);
    REQUIRE(back.d == inst.d);
    REQUIRE(back.bias_sign == inst.bias_sign);
    REQUIRE(back.noise_enabled == inst.noise_enabled);
    REQUIRE(back.partition == inst.partition);
    for (int i = 0; i < inst.n; ++i)
        REQUIRE(back.betas[static_cast<std::size_t>(i)] ==
                inst.betas[static_cast<std::size_t>(i)]);
    for (int g = 0; g < inst.partition.m; ++g)
        REQUIRE(back.psis[static_cast<std::size_t>(g)] == inst.psis[static_cast<std::size_t>(g)]);

    auto bad = j;
    bad["partition"]["m"] = 3;
    REQUIRE_THROWS_AS(instance_from_json(bad), ConfigError);
}
