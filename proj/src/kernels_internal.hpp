#pragma once

#include <algorithm>
#include <cmath>

#include "tomo/kernels.hpp"

namespace tomo::kernels::detail {

extern const KernelTable scalar_table;

#if defined(__x86_64__) || defined(__i386__)
#define TOMO_HAVE_AVX2_BUILD 1
extern const KernelTable avx2_table;
#endif

/// Bilinear read at pixel coordinates (x = column, y = row). The floor is
/// clamped min-then-max to [0, size-2] and the evaluation is factored as
/// two x-lerps followed by a y-lerp; the AVX2 path mirrors this sequence
/// exactly so the two backends agree bitwise.
inline double bilinear_sample(const double* img, int size, double x,
                              double y) {
  double fx = std::floor(x);
  fx = std::min(fx, static_cast<double>(size - 2));
  fx = std::max(fx, 0.0);
  double fy = std::floor(y);
  fy = std::min(fy, static_cast<double>(size - 2));
  fy = std::max(fy, 0.0);
  const double u = x - fx;
  const double v = y - fy;
  const double* p =
      img + static_cast<int>(fy) * size + static_cast<int>(fx);
  const double a = (1.0 - u) * p[0] + u * p[1];
  const double b = (1.0 - u) * p[size] + u * p[size + 1];
  return (1.0 - v) * a + v * b;
}

}  // namespace tomo::kernels::detail
