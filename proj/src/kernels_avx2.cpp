// AVX2 variants of the kernel table. Arithmetic mirrors the scalar
// reference operation for operation (multiply then add, never fused), so
// elementwise results and forward-projection rows are bit-identical to the
// scalar backend; only reductions differ, by accumulator-splitting rounding.
#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "kernels_internal.hpp"
#include "tomo/kernels.hpp"

namespace tomo::kernels {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    const __m256d bv = _mm256_loadu_pd(b + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(av, bv));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum(acc) + tail;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void clamp_min_avx2(double* x, std::size_t n, double lo) {
  const __m256d lov = _mm256_set1_pd(lo);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_max_pd(_mm256_loadu_pd(x + i), lov));
  }
  for (; i < n; ++i) {
    if (x[i] < lo) x[i] = lo;
  }
}

void lerp_avx2(const double* a, const double* b, double t, double* out,
               std::size_t n) {
  const double s = 1.0 - t;
  const __m256d sv = _mm256_set1_pd(s);
  const __m256d tv = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    const __m256d bv = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(
        out + i, _mm256_add_pd(_mm256_mul_pd(sv, av), _mm256_mul_pd(tv, bv)));
  }
  for (; i < n; ++i) out[i] = s * a[i] + t * b[i];
}

double mae_grad_avx2(const double* pred, const double* ref, double* grad,
                     double grad_scale, std::size_t n) {
  const __m256d gsv = _mm256_set1_pd(grad_scale);
  const __m256d ngsv = _mm256_set1_pd(-grad_scale);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(
      0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(pred + i), _mm256_loadu_pd(ref + i));
    const __m256d pos = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
    const __m256d neg = _mm256_cmp_pd(d, zero, _CMP_LT_OQ);
    const __m256d g =
        _mm256_or_pd(_mm256_and_pd(pos, gsv), _mm256_and_pd(neg, ngsv));
    _mm256_storeu_pd(grad + i, g);
    acc = _mm256_add_pd(acc, _mm256_and_pd(d, abs_mask));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double d = pred[i] - ref[i];
    grad[i] = d > 0.0 ? grad_scale : (d < 0.0 ? -grad_scale : 0.0);
    tail += std::fabs(d);
  }
  return hsum(acc) + tail;
}

double mse_grad_avx2(const double* pred, const double* ref, double* grad,
                     double grad_scale, std::size_t n) {
  const __m256d gsv = _mm256_set1_pd(grad_scale);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(pred + i), _mm256_loadu_pd(ref + i));
    _mm256_storeu_pd(grad + i,
                     _mm256_mul_pd(_mm256_mul_pd(two, d), gsv));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double d = pred[i] - ref[i];
    grad[i] = (2.0 * d) * grad_scale;
    tail += d * d;
  }
  return hsum(acc) + tail;
}

void forward_angle_avx2(const double* img, int size, const AngleRays& rays,
                        double* row_out) {
  const int num_bins = static_cast<int>(rays.count.size());
  const __m256d dxv = _mm256_set1_pd(rays.dx);
  const __m256d dyv = _mm256_set1_pd(rays.dy);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lim = _mm256_set1_pd(static_cast<double>(size - 2));
  const __m256d slv = _mm256_set1_pd(rays.step_len);
  const __m128i sizei = _mm_set1_epi32(size);
  int b = 0;
  for (; b + 4 <= num_bins; b += 4) {
    const __m256d x0v = _mm256_loadu_pd(rays.x0.data() + b);
    const __m256d y0v = _mm256_loadu_pd(rays.y0.data() + b);
    const int c0 = rays.count[b];
    const int c1 = rays.count[b + 1];
    const int c2 = rays.count[b + 2];
    const int c3 = rays.count[b + 3];
    const int maxc = std::max(std::max(c0, c1), std::max(c2, c3));
    const __m256d cntv =
        _mm256_set_pd(static_cast<double>(c3), static_cast<double>(c2),
                      static_cast<double>(c1), static_cast<double>(c0));
    const __m256d lastv = _mm256_sub_pd(cntv, one);
    const __m256d single = _mm256_cmp_pd(cntv, one, _CMP_EQ_OQ);
    __m256d acc = _mm256_setzero_pd();
    for (int i = 0; i < maxc; ++i) {
      const __m256d iv = _mm256_set1_pd(static_cast<double>(i));
      const __m256d x = _mm256_add_pd(x0v, _mm256_mul_pd(iv, dxv));
      const __m256d y = _mm256_add_pd(y0v, _mm256_mul_pd(iv, dyv));
      __m256d fx = _mm256_floor_pd(x);
      fx = _mm256_max_pd(_mm256_min_pd(fx, lim), zero);
      __m256d fy = _mm256_floor_pd(y);
      fy = _mm256_max_pd(_mm256_min_pd(fy, lim), zero);
      const __m256d u = _mm256_sub_pd(x, fx);
      const __m256d v = _mm256_sub_pd(y, fy);
      const __m128i ix = _mm256_cvtpd_epi32(fx);
      const __m128i iy = _mm256_cvtpd_epi32(fy);
      const __m128i idx = _mm_add_epi32(_mm_mullo_epi32(iy, sizei), ix);
      const __m256d g00 = _mm256_i32gather_pd(img, idx, 8);
      const __m256d g01 = _mm256_i32gather_pd(img + 1, idx, 8);
      const __m256d g10 = _mm256_i32gather_pd(img + size, idx, 8);
      const __m256d g11 = _mm256_i32gather_pd(img + size + 1, idx, 8);
      const __m256d uu = _mm256_sub_pd(one, u);
      const __m256d ax =
          _mm256_add_pd(_mm256_mul_pd(uu, g00), _mm256_mul_pd(u, g01));
      const __m256d bx =
          _mm256_add_pd(_mm256_mul_pd(uu, g10), _mm256_mul_pd(u, g11));
      const __m256d val = _mm256_add_pd(
          _mm256_mul_pd(_mm256_sub_pd(one, v), ax), _mm256_mul_pd(v, bx));
      const __m256d at_end =
          _mm256_or_pd(_mm256_cmp_pd(iv, zero, _CMP_EQ_OQ),
                       _mm256_cmp_pd(iv, lastv, _CMP_EQ_OQ));
      __m256d w = _mm256_blendv_pd(one, half, at_end);
      w = _mm256_blendv_pd(w, one, single);
      // Lanes past their own count contribute weight zero; their clamped
      // gathers stay in bounds.
      w = _mm256_and_pd(w, _mm256_cmp_pd(iv, cntv, _CMP_LT_OQ));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w, val));
    }
    _mm256_storeu_pd(row_out + b, _mm256_mul_pd(slv, acc));
  }
  for (; b < num_bins; ++b) {
    const int n = rays.count[b];
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rays.x0[b] + static_cast<double>(i) * rays.dx;
      const double y = rays.y0[b] + static_cast<double>(i) * rays.dy;
      acc += sample_weight(i, n) * detail::bilinear_sample(img, size, x, y);
    }
    row_out[b] = rays.step_len * acc;
  }
}

}  // namespace

namespace detail {

const KernelTable avx2_table = {
    "avx2",        dot_avx2,      axpy_avx2,     clamp_min_avx2,
    lerp_avx2,     mae_grad_avx2, mse_grad_avx2, forward_angle_avx2,
};

}  // namespace detail
}  // namespace tomo::kernels

#endif
