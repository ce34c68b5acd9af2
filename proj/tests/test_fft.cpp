#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlr/error.hpp"
#include "dlr/fft.hpp"
#include "dlr/rng.hpp"
#include "helpers/oracles.hpp"

using dlr::cplx;

namespace {
std::vector<cplx> random_burst(std::size_t n, std::uint64_t seed) {
    dlr::Rng rng(seed);
    std::vector<cplx> x(n);
    for (auto& v : x) v = rng.complex_normal();
    return x;
}
} // namespace

TEST_CASE("fft matches the direct DFT oracle") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto x = random_burst(64, seed);
        const auto ref = oracles::dft_direct(x);
        auto got = x;
        dlr::fft_inplace(got);
        double max_rel = 0.0;
        double scale = 0.0;
        for (const auto& v : ref) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < got.size(); ++i)
            max_rel = std::max(max_rel, std::abs(got[i] - ref[i]) / scale);
        CHECK(max_rel < 1e-9);
    }
}

TEST_CASE("ifft inverts fft") {
    auto x = random_burst(256, 9);
    auto y = x;
    dlr::fft_inplace(y);
    dlr::ifft_inplace(y);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y[i] - x[i]) < 1e-12);
}

TEST_CASE("non power-of-two length is rejected by fft and handled by dft") {
    std::vector<cplx> x(48, cplx{1.0, 0.0});
    CHECK_THROWS_AS(dlr::fft_inplace(x), dlr::Error);

    // general-length dft agrees with the oracle
    auto y = random_burst(12, 4);
    const auto ref = oracles::dft_direct(y);
    const auto got = dlr::dft(y);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(std::abs(got[i] - ref[i]) < 1e-9);
    const auto back = dlr::dft(got, true);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(std::abs(back[i] - y[i]) < 1e-9);
}

TEST_CASE("rng streams are deterministic and well distributed") {
    dlr::Rng a(77), b(77);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());

    dlr::Rng r(5);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) acc += r.uniform();
    CHECK(acc / n == doctest::Approx(0.5).epsilon(0.01));

    double nacc = 0.0, n2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = r.normal();
        nacc += v;
        n2 += v * v;
    }
    CHECK(nacc / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(n2 / n == doctest::Approx(1.0).epsilon(0.02));

    double cacc = 0.0;
    for (int i = 0; i < n; ++i) cacc += std::norm(r.complex_normal());
    CHECK(cacc / n == doctest::Approx(1.0).epsilon(0.02));

    // derived seeds differ across streams and indices
    CHECK(dlr::derive_seed(1, 2, 3) != dlr::derive_seed(1, 2, 4));
    CHECK(dlr::derive_seed(1, 2, 3) != dlr::derive_seed(1, 3, 3));
    CHECK(dlr::derive_seed(1, 2, 3) == dlr::derive_seed(1, 2, 3));
}

TEST_CASE("uniform_int covers its range without bias") {
    dlr::Rng r(11);
    int counts[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 50000; ++i) {
        const auto v = r.uniform_int(-2, 2);
        REQUIRE(v >= -2);
        REQUIRE(v <= 2);
        ++counts[v + 2];
    }
    for (int c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.05));
}
