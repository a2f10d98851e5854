#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace grushin::detail {

// In-place length-`length` DFTs over `count` interleaved sequences:
// element k of sequence s sits at data[s + count * k].
//   out_j = sum_k in_k exp(sign * 2 pi i j k / length), no normalization.
void strided_dft(std::span<std::complex<double>> data, std::size_t count, int length, int sign);

}  // namespace grushin::detail
