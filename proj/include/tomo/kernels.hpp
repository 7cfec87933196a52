#pragma once

#include <cstddef>
#include <vector>

namespace tomo::kernels {

/// Precomputed sampling pattern for every ray of one projection angle, in
/// pixel coordinates (column = x, row = y). Ray b visits
///   (x0[b] + i*dx, y0[b] + i*dy)   for i = 0..count[b]-1,
/// all samples inside the bilinear domain [0, size-1]^2. step_len is the
/// world-space distance between consecutive samples; trapezoid end samples
/// carry half weight. The forward gather and the adjoint scatter both walk
/// exactly this pattern, which is what makes the adjoint the true transpose
/// of the forward.
struct AngleRays {
  double dx = 0.0;
  double dy = 0.0;
  double step_len = 0.0;
  std::vector<double> x0;
  std::vector<double> y0;
  std::vector<int> count;
};

/// Trapezoid weight of sample i on a ray of n samples, in units of step_len.
inline double sample_weight(int i, int n) {
  if (n == 1) return 1.0;
  return (i == 0 || i == n - 1) ? 0.5 : 1.0;
}

/// One set of inner-loop implementations. `scalar` is the reference; other
/// backends must match it (exactly for elementwise ops, to reduction
/// rounding for dot-like ops) and are equivalence-tested against it.
struct KernelTable {
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*clamp_min)(double* x, std::size_t n, double lo);
  /// out = (1-t)*a + t*b
  void (*lerp)(const double* a, const double* b, double t, double* out,
               std::size_t n);
  /// grad[i] = sign(pred[i]-ref[i]) * grad_scale; returns sum |pred-ref|.
  /// sign(0) is 0.
  double (*mae_grad)(const double* pred, const double* ref, double* grad,
                     double grad_scale, std::size_t n);
  /// grad[i] = 2*(pred[i]-ref[i]) * grad_scale; returns sum (pred-ref)^2.
  double (*mse_grad)(const double* pred, const double* ref, double* grad,
                     double grad_scale, std::size_t n);
  /// Joseph line integrals for every ray of one angle: row_out[b] =
  /// step_len * sum_i w_i * bilinear(img, x0+i*dx, y0+i*dy).
  void (*forward_angle)(const double* img, int size, const AngleRays& rays,
                        double* row_out);
};

enum class Backend { scalar, avx2 };

/// Active table. Picked once per process: AVX2 when the CPU supports it,
/// overridable with TOMO_KERNELS=scalar|avx2 or set_backend().
const KernelTable& active();
Backend active_backend();

/// nullptr when the backend is not available on this CPU/build.
const KernelTable* table(Backend backend);

/// Force a backend (tests). Throws ValidationError if unavailable.
void set_backend(Backend backend);

/// Transpose of forward_angle: scatters row_in back along the identical
/// sample pattern with the identical weights. Scalar only: lanes of a SIMD
/// scatter would collide on shared bilinear footprints.
void adjoint_scatter_angle(double* img, int size, const AngleRays& rays,
                           const double* row_in);

}  // namespace tomo::kernels
