#pragma once

#include <complex>

namespace toroidal {

/// Exact repeated-squaring power; negative exponents invert.
template <typename Scalar>
Scalar ipow(Scalar base, int exponent) {
  if (exponent < 0) return Scalar(1) / ipow(base, -exponent);
  Scalar result(1);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

using cplx = std::complex<double>;

}  // namespace toroidal
