#pragma once

#include <span>
#include <vector>

#include "dlr/types.hpp"

namespace dlr {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place radix-2 forward DFT, unnormalized, natural bin order.
// Length must be a power of two.
void fft_inplace(std::vector<cplx>& x);

// Inverse DFT with 1/n normalization so ifft(fft(x)) == x.
void ifft_inplace(std::vector<cplx>& x);

// Forward/inverse DFT for arbitrary lengths: radix-2 when possible, direct
// O(n^2) evaluation otherwise. Used by the decimated transform whose
// sub-lengths need not be powers of two.
std::vector<cplx> dft(std::span<const cplx> x, bool inverse = false);

} // namespace dlr
