#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wm::fft {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

// In-place unnormalized multidimensional DFT over a row-major array.
// forward uses e^{-i...}, backward e^{+i...}. Plans are cached per
// (shape, direction) and the cache is safe for concurrent use.
void transform(std::span<cplx> data, const std::vector<int>& shape,
               Direction dir);

}  // namespace wm::fft
