#include "dlr/fft.hpp"

#include <memory>
#include <mutex>
#include <unordered_map>

#include "dlr/error.hpp"

namespace dlr {
namespace {

// Twiddle tables cached per size; bursts are almost always the same length.
std::shared_ptr<const std::vector<cplx>> twiddles(std::size_t n) {
    static std::mutex mu;
    static std::unordered_map<std::size_t, std::shared_ptr<const std::vector<cplx>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<std::vector<cplx>>(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        (*table)[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    cache.emplace(n, table);
    return cache[n];
}

} // namespace

void fft_inplace(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    if (n == 1) return;
    require(is_power_of_two(n), "size-error", "fft length must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * (*w)[k * stride];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

void ifft_inplace(std::vector<cplx>& a) {
    for (auto& v : a) v = std::conj(v);
    fft_inplace(a);
    const double scale = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v = std::conj(v) * scale;
}

std::vector<cplx> dft(std::span<const cplx> x, bool inverse) {
    const std::size_t n = x.size();
    require(n > 0, "size-error", "dft of empty sequence");
    if (is_power_of_two(n)) {
        std::vector<cplx> out(x.begin(), x.end());
        if (inverse) ifft_inplace(out); else fft_inplace(out);
        return out;
    }
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            acc += x[m] * std::polar(1.0, sign * kTwoPi * static_cast<double>(k * m) / static_cast<double>(n));
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

} // namespace dlr
