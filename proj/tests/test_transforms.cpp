#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dlr/error.hpp"
#include "dlr/impairments.hpp"
#include "dlr/rng.hpp"
#include "dlr/transforms.hpp"
#include "helpers/oracles.hpp"

using dlr::Burst;
using dlr::cplx;

namespace {

Burst random_burst(std::size_t n, std::uint64_t seed) {
    dlr::Rng rng(seed);
    Burst b;
    b.label = 3;
    b.samples.resize(n);
    for (auto& v : b.samples) v = rng.complex_normal();
    return b;
}

Burst tone(std::size_t n, double cycles_per_sample, double amp = 1.0) {
    Burst b;
    b.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        b.samples[i] = std::polar(amp, dlr::kTwoPi * cycles_per_sample * double(i));
    return b;
}

} // namespace

TEST_CASE("amplitude is the elementwise modulus") {
    Burst b;
    b.samples = {cplx{1.0, 0.0}, cplx{1.0, 0.0}};
    auto dp = dlr::amplitude(b);
    CHECK(dp.values == std::vector<double>{1.0, 1.0});

    b.samples = {cplx{3.0, 4.0}, cplx{0.0, 0.0}};
    dp = dlr::amplitude(b);
    CHECK(dp.values[0] == doctest::Approx(5.0));
    CHECK(dp.values[1] == 0.0);

    const Burst r = random_burst(64, 1);
    dp = dlr::amplitude(r);
    for (std::size_t i = 0; i < r.samples.size(); ++i)
        CHECK(dp.values[i] == std::abs(r.samples[i]));
    CHECK(dp.label == 3);
}

TEST_CASE("fft_amplitude: DC, pure tone, oracle, Parseval") {
    const std::size_t n = 64;
    Burst b;
    b.samples.assign(n, cplx{0.5, -0.25});
    auto dp = dlr::fft_amplitude(b);
    CHECK(dp.values[0] == doctest::Approx(double(n) * std::abs(cplx{0.5, -0.25})).epsilon(1e-12));
    for (std::size_t i = 1; i < n; ++i) CHECK(dp.values[i] <= 1e-9);

    const Burst t3 = tone(n, 3.0 / double(n));
    dp = dlr::fft_amplitude(t3);
    CHECK(dp.values[3] == doctest::Approx(double(n)).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i)
        if (i != 3) CHECK(dp.values[i] <= 1e-9);

    const Burst r = random_burst(n, 2);
    dp = dlr::fft_amplitude(r);
    const auto ref = oracles::dft_direct(r.samples);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(dp.values[i] == doctest::Approx(std::abs(ref[i])).epsilon(1e-9));

    // Parseval: sum |X_k|^2 = n * sum |x_i|^2
    double lhs = 0.0, rhs = 0.0;
    for (double v : dp.values) lhs += v * v;
    for (const auto& v : r.samples) rhs += std::norm(v);
    CHECK(lhs == doctest::Approx(double(n) * rhs).epsilon(1e-6));

    Burst bad;
    bad.samples.resize(48);
    CHECK_THROWS_AS(dlr::fft_amplitude(bad), dlr::Error);
}

TEST_CASE("differential_fft: constant kills DC, tone scaling, compose oracle") {
    const std::size_t n = 64;
    Burst b;
    b.samples.assign(n, cplx{0.7, 0.2});
    auto dp = dlr::differential_fft(b);
    for (double v : dp.values) CHECK(v <= 1e-9);

    const std::size_t k = 5;
    const Burst t = tone(n, double(k) / double(n));
    dp = dlr::differential_fft(t);
    const double expected = std::abs(std::polar(1.0, dlr::kTwoPi * double(k) / double(n)) - 1.0) * double(n);
    CHECK(dp.values[k] == doctest::Approx(expected).epsilon(1e-9));
    for (std::size_t i = 0; i < n; ++i)
        if (i != k) CHECK(dp.values[i] <= 1e-6 * expected);

    const Burst r = random_burst(n, 7);
    dp = dlr::differential_fft(r);
    Burst diff;
    diff.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        diff.samples[i] = r.samples[(i + 1) % n] - r.samples[i];
    const auto ref = oracles::dft_direct(diff.samples);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(dp.values[i] == doctest::Approx(std::abs(ref[i])).epsilon(1e-9));
}

TEST_CASE("decimated_dft: degenerate factors and polyphase oracle") {
    const std::size_t n = 64;
    const Burst r = random_burst(n, 3);

    const auto d1 = dlr::decimated_dft(r, 1);
    const auto full = dlr::fft_amplitude(r);
    for (std::size_t i = 0; i < n; ++i) CHECK(d1.values[i] == full.values[i]);

    const auto dn = dlr::decimated_dft(r, static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i)
        CHECK(dn.values[i] == doctest::Approx(std::abs(r.samples[i])).epsilon(1e-12));

    const int d = 4;
    const auto dp = dlr::decimated_dft(r, d);
    REQUIRE(dp.values.size() == n);
    const std::size_t m = n / d;
    for (int p = 0; p < d; ++p) {
        std::vector<cplx> sub(m);
        for (std::size_t i = 0; i < m; ++i) sub[i] = r.samples[std::size_t(p) + i * d];
        const auto ref = oracles::dft_direct(sub);
        for (std::size_t i = 0; i < m; ++i)
            CHECK(dp.values[std::size_t(p) * m + i] ==
                  doctest::Approx(std::abs(ref[i])).epsilon(1e-9));
    }

    CHECK_THROWS_AS(dlr::decimated_dft(r, 5), dlr::Error); // 5 does not divide 64
}

TEST_CASE("kay_frequency: exact on clean tones, symmetric, unbiased in noise") {
    const std::size_t n = 256;
    const int w = 64;
    const double f0 = 0.12;
    const Burst t = tone(n, f0, 2.0);
    auto dp = dlr::kay_frequency(t, w);
    REQUIRE(dp.values.size() == n);
    for (std::size_t i = 0; i + w <= n; ++i)
        CHECK(dp.values[i] == doctest::Approx(f0).epsilon(1e-9));
    for (std::size_t i = n - w + 1; i < n; ++i) CHECK(dp.values[i] == 0.0);

    Burst conj_t = t;
    for (auto& v : conj_t.samples) v = std::conj(v);
    const auto dpc = dlr::kay_frequency(conj_t, w);
    for (std::size_t i = 0; i + w <= n; ++i)
        CHECK(dpc.values[i] == doctest::Approx(-dp.values[i]).epsilon(1e-9));

    // 100 seeded bursts at 30 dB SNR: mean estimate within +-0.003 of 0.1.
    double acc = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        dlr::Rng rng(seed + 1000);
        Burst noisy = tone(n, 0.1);
        noisy = dlr::add_awgn(noisy, 30.0, rng);
        const auto est = dlr::kay_frequency(noisy, w);
        for (std::size_t i = 0; i + w <= n; ++i) {
            acc += est.values[i];
            ++count;
        }
    }
    CHECK(acc / double(count) == doctest::Approx(0.1).epsilon(0.03));

    CHECK_THROWS_AS(dlr::kay_frequency(t, 1), dlr::Error);
}

TEST_CASE("split and the zero-pad policy") {
    dlr::Datapoint dp;
    dp.label = 7;
    dp.values.resize(1024);
    for (std::size_t i = 0; i < dp.values.size(); ++i) dp.values[i] = double(i);

    const auto single = dlr::split(dp, 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].values == dp.values);
    CHECK(single[0].label == 7);

    CHECK_THROWS_AS(dlr::split(dp, 10), dlr::Error); // 10 does not divide 1024

    const auto padded = dlr::pad_and_split(dp, 10);
    REQUIRE(padded.size() == 10);
    for (const auto& s : padded) CHECK(s.values.size() == 103);

    // concatenating the slices (minus padding) reproduces the datapoint
    std::vector<double> cat;
    for (const auto& s : padded) cat.insert(cat.end(), s.values.begin(), s.values.end());
    REQUIRE(cat.size() == 1030);
    for (std::size_t i = 0; i < 1024; ++i) CHECK(cat[i] == dp.values[i]);
    for (std::size_t i = 1024; i < 1030; ++i) CHECK(cat[i] == 0.0);

    const auto quarters = dlr::split(dp, 4);
    REQUIRE(quarters.size() == 4);
    std::vector<double> cat2;
    for (const auto& s : quarters) cat2.insert(cat2.end(), s.values.begin(), s.values.end());
    CHECK(cat2 == dp.values);
}

TEST_CASE("transforms are deterministic and label preserving") {
    const Burst r = random_burst(128, 11);
    const auto a1 = dlr::fft_amplitude(r);
    const auto a2 = dlr::fft_amplitude(r);
    CHECK(a1.values == a2.values);
    CHECK(a1.label == r.label);
    CHECK(dlr::differential_fft(r).label == r.label);
    CHECK(dlr::decimated_dft(r, 8).label == r.label);
    CHECK(dlr::kay_frequency(r, 16).label == r.label);
}
