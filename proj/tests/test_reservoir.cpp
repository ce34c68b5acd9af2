#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dlr/error.hpp"
#include "dlr/reservoir.hpp"
#include "dlr/rng.hpp"
#include "helpers/oracles.hpp"

using dlr::Datapoint;
using dlr::LoopConfig;
using dlr::SplitConfig;
using dlr::StateVector;

namespace {

Datapoint dp_of(std::vector<double> values) {
    Datapoint dp;
    dp.values = std::move(values);
    return dp;
}

LoopConfig cfg_of(int n, double eta, double nu, double h0, double h1,
                  std::uint64_t seed = 0) {
    LoopConfig cfg;
    cfg.node_count = n;
    cfg.eta = eta;
    cfg.nu = nu;
    cfg.h = {h0, h1};
    cfg.mask_seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("mask generation") {
    const auto a = dlr::make_mask(4, 9);
    const auto b = dlr::make_mask(4, 9);
    CHECK(a == b);
    for (double v : a) CHECK((v == 1.0 || v == -1.0));

    const auto single = dlr::make_mask(1, 123);
    CHECK((single[0] == 1.0 || single[0] == -1.0));

    const auto big = dlr::make_mask(100000, 5);
    double mean = 0.0;
    for (double v : big) mean += v;
    mean /= double(big.size());
    CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("zero input gives a zero state") {
    const auto state = dlr::run_loop(dp_of(std::vector<double>(16, 0.0)),
                                     cfg_of(8, 0.5, 0.3, 1.0, 0.25, 3));
    for (double v : state) CHECK(v == 0.0);
}

TEST_CASE("feedback-free loop reduces to a memoryless sin") {
    const double s = 0.8;
    const std::vector<double> mask = {1.0, -1.0, 1.0};
    const auto state = dlr::run_loop(dp_of({s}), cfg_of(3, 0.0, 1.0, 1.0, 0.0), mask);
    REQUIRE(state.size() == 3);
    CHECK(state[0] == doctest::Approx(std::sin(s)).epsilon(1e-15));
    CHECK(state[1] == doctest::Approx(std::sin(-s)).epsilon(1e-15));
    CHECK(state[2] == doctest::Approx(std::sin(s)).epsilon(1e-15));
}

TEST_CASE("loop matches the chip-by-chip reference interpreter") {
    {
        const std::vector<double> mask = dlr::make_mask(4, 77);
        const Datapoint dp = dp_of({0.9, -0.4});
        const auto got = dlr::run_loop(dp, cfg_of(4, 0.5, 1.0, 1.0, 0.3, 77));
        const auto ref = oracles::naive_loop(dp.values, 4, 0.5, 1.0, 1.0, 0.3, mask);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(got[i] - ref[i]) < 1e-12);
    }

    // randomized equivalence, N <= 16, datapoint length <= 8
    dlr::Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + int(rng.uniform_int(0, 15));
        const int len = 1 + int(rng.uniform_int(0, 7));
        const double eta = rng.uniform(-1.4, 1.4);
        const double nu = rng.uniform(-2.0, 2.0);
        const double h0 = rng.uniform(-1.0, 1.0);
        const double h1 = rng.uniform(-1.0, 1.0);
        std::vector<double> values(static_cast<std::size_t>(len));
        for (auto& v : values) v = rng.uniform(-3.0, 3.0);
        const std::uint64_t seed = rng.next();

        const auto cfg = cfg_of(n, eta, nu, h0, h1, seed);
        const auto got = dlr::run_loop(dp_of(values), cfg);
        const auto ref = oracles::naive_loop(values, n, eta, nu, h0, h1,
                                             dlr::make_mask(n, seed));
        REQUIRE(got.size() == std::size_t(n));
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(std::abs(got[i] - ref[i]) < 1e-12);

        // boundedness: |x| <= |h0| + |h1| for the sin nonlinearity
        for (double v : got) CHECK(std::abs(v) <= std::abs(h0) + std::abs(h1) + 1e-12);
    }
}

TEST_CASE("causality: the state after n samples ignores later samples") {
    dlr::Rng rng(55);
    std::vector<double> a(8), b(8);
    for (std::size_t i = 0; i < 8; ++i) a[i] = rng.uniform(-1.0, 1.0);
    b = a;
    for (std::size_t i = 5; i < 8; ++i) b[i] = rng.uniform(-1.0, 1.0);

    const auto cfg = cfg_of(6, 0.5, 0.7, 1.0, 0.25, 11);
    const auto sa = dlr::run_loop(dp_of({a.begin(), a.begin() + 5}), cfg);
    const auto sb = dlr::run_loop(dp_of({b.begin(), b.begin() + 5}), cfg);
    CHECK(sa == sb);
}

TEST_CASE("invalid loop inputs") {
    CHECK_THROWS_AS(dlr::run_loop(dp_of({std::nan("")}), cfg_of(4, 0.5, 1.0, 1.0, 0.0, 1)),
                    dlr::Error);
    CHECK_THROWS_AS(dlr::run_loop(dp_of({1.0}), cfg_of(4, 1.6, 1.0, 1.0, 0.0, 1)),
                    dlr::Error);
    LoopConfig noisy = cfg_of(4, 0.5, 1.0, 1.0, 0.0, 1);
    noisy.sigma = 0.1;
    CHECK_THROWS_AS(dlr::run_loop(dp_of({1.0}), noisy), dlr::Error);
    dlr::Rng rng(1), rng2(1);
    const auto s1 = dlr::run_loop(dp_of({1.0, 2.0}), noisy, &rng);
    const auto s2 = dlr::run_loop(dp_of({1.0, 2.0}), noisy, &rng2);
    CHECK(s1 == s2);
}

TEST_CASE("split loops compose and commute") {
    dlr::Rng rng(77);
    std::vector<double> values(12);
    for (auto& v : values) v = rng.uniform(-2.0, 2.0);
    const Datapoint dp = dp_of(values);

    // k = 1 is exactly run_loop
    const auto base = cfg_of(5, 0.4, 0.8, 1.0, 0.2, 9);
    const auto split1 = dlr::run_split(dp, SplitConfig{1, 5, dlr::CombineMode::sum}, {base});
    const auto direct = dlr::run_loop(dp, base);
    CHECK(split1 == direct);

    // k = 2, sum combine: matches hand-composed run_loop outputs
    const auto cfgs = dlr::make_loop_configs(base, 2);
    const SplitConfig sc{2, 5, dlr::CombineMode::sum};
    const auto combined = dlr::run_split(dp, sc, cfgs);
    const auto halves = dlr::pad_and_split(dp, 2);
    const auto s0 = dlr::run_loop(halves[0], cfgs[0]);
    const auto s1 = dlr::run_loop(halves[1], cfgs[1]);
    for (std::size_t i = 0; i < combined.size(); ++i)
        CHECK(std::abs(combined[i] - (s0[i] + s1[i])) < 1e-12);

    // swapping slices together with their configs commutes under sum
    Datapoint swapped;
    swapped.values.assign(halves[1].values.begin(), halves[1].values.end());
    swapped.values.insert(swapped.values.end(), halves[0].values.begin(),
                          halves[0].values.end());
    const auto combined_swapped =
        dlr::run_split(swapped, sc, {cfgs[1], cfgs[0]});
    for (std::size_t i = 0; i < combined.size(); ++i)
        CHECK(std::abs(combined[i] - combined_swapped[i]) < 1e-12);

    // normalized product has unit norm; zero states raise the degenerate error
    const auto prod = dlr::run_split(dp, SplitConfig{2, 5, dlr::CombineMode::normalized_product}, cfgs);
    double norm = 0.0;
    for (double v : prod) norm += v * v;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    const Datapoint zeros = dp_of(std::vector<double>(12, 0.0));
    CHECK_THROWS_AS(
        dlr::run_split(zeros, SplitConfig{2, 5, dlr::CombineMode::normalized_product}, cfgs),
        dlr::Error);

    // config count and node-count consistency are enforced
    CHECK_THROWS_AS(dlr::run_split(dp, sc, {base}), dlr::Error);
    auto wrong = cfgs;
    wrong[1].node_count = 4;
    CHECK_THROWS_AS(dlr::run_split(dp, sc, wrong), dlr::Error);
}

TEST_CASE("grid calibration prefers memory when the data demand it") {
    // class A flips the sign of the first sample, followed by two
    // class-independent samples. The 2-tap filter only leaks one chip across
    // a sample boundary, so without feedback (eta = 0) the class is invisible.
    dlr::Rng rng(31);
    std::vector<Datapoint> train, validation;
    for (int i = 0; i < 40; ++i) {
        const int label = i % 2;
        Datapoint dp;
        dp.values = {label == 0 ? 1.0 : -1.0, 0.5 + 0.01 * rng.uniform(),
                     -0.3 + 0.01 * rng.uniform()};
        dp.label = label;
        (i < 24 ? train : validation).push_back(dp);
    }

    const auto base = cfg_of(6, 0.5, 0.8, 1.0, 0.25, 13);
    const SplitConfig sc{1, 6, dlr::CombineMode::sum};
    dlr::CalibrationGrid grid;
    grid.etas = {0.0, 0.5};
    grid.nus = {0.8};
    grid.h1s = {0.25};
    const auto result = dlr::calibrate(train, validation, sc, base, grid, 1e-6, {0, 1});
    CHECK(result.config.eta == 0.5);
    REQUIRE(result.table.size() == 2);
    CHECK(result.table[0].accuracy < result.table[1].accuracy);

    // one-point grid returns that point
    dlr::CalibrationGrid one;
    one.etas = {0.3};
    one.nus = {0.9};
    one.h1s = {0.1};
    const auto single = dlr::calibrate(train, validation, sc, base, one, 1e-6, {0, 1});
    CHECK(single.config.eta == 0.3);
    CHECK(single.config.nu == 0.9);
    CHECK(single.config.h[1] == 0.1);

    // ties break toward smaller |eta|: make both grid points perfect
    std::vector<Datapoint> easy_train, easy_val;
    for (int i = 0; i < 20; ++i) {
        Datapoint dp;
        dp.values = {i % 2 == 0 ? 2.0 : -2.0, i % 2 == 0 ? 2.0 : -2.0};
        dp.label = i % 2;
        (i < 12 ? easy_train : easy_val).push_back(dp);
    }
    dlr::CalibrationGrid tie;
    tie.etas = {0.5, 0.0};
    tie.nus = {0.8};
    tie.h1s = {0.25};
    const auto tied = dlr::calibrate(easy_train, easy_val, sc, base, tie, 1e-6, {0, 1});
    CHECK(tied.table[0].accuracy == tied.table[1].accuracy);
    CHECK(tied.config.eta == 0.0);

    // determinism and the empty-grid error
    const auto again = dlr::calibrate(train, validation, sc, base, grid, 1e-6, {0, 1});
    CHECK(again.config.eta == result.config.eta);
    dlr::CalibrationGrid empty;
    CHECK_THROWS_AS(dlr::calibrate(train, validation, sc, base, empty, 1e-6, {0, 1}),
                    dlr::Error);
}
