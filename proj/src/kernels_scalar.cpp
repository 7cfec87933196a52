#include <cmath>
#include <cstddef>

#include "kernels_internal.hpp"
#include "tomo/kernels.hpp"

namespace tomo::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void clamp_min_scalar(double* x, std::size_t n, double lo) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < lo) x[i] = lo;
  }
}

void lerp_scalar(const double* a, const double* b, double t, double* out,
                 std::size_t n) {
  const double s = 1.0 - t;
  for (std::size_t i = 0; i < n; ++i) out[i] = s * a[i] + t * b[i];
}

double mae_grad_scalar(const double* pred, const double* ref, double* grad,
                       double grad_scale, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred[i] - ref[i];
    grad[i] = d > 0.0 ? grad_scale : (d < 0.0 ? -grad_scale : 0.0);
    acc += std::fabs(d);
  }
  return acc;
}

double mse_grad_scalar(const double* pred, const double* ref, double* grad,
                       double grad_scale, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred[i] - ref[i];
    grad[i] = (2.0 * d) * grad_scale;
    acc += d * d;
  }
  return acc;
}

void forward_angle_scalar(const double* img, int size, const AngleRays& rays,
                          double* row_out) {
  const int num_bins = static_cast<int>(rays.count.size());
  for (int b = 0; b < num_bins; ++b) {
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

const KernelTable scalar_table = {
    "scalar",        dot_scalar,      axpy_scalar,        clamp_min_scalar,
    lerp_scalar,     mae_grad_scalar, mse_grad_scalar,    forward_angle_scalar,
};

}  // namespace detail

void adjoint_scatter_angle(double* img, int size, const AngleRays& rays,
                           const double* row_in) {
  const int num_bins = static_cast<int>(rays.count.size());
  for (int b = 0; b < num_bins; ++b) {
    const int n = rays.count[b];
    const double r = rays.step_len * row_in[b];
    for (int i = 0; i < n; ++i) {
      const double x = rays.x0[b] + static_cast<double>(i) * rays.dx;
      const double y = rays.y0[b] + static_cast<double>(i) * rays.dy;
      double fx = std::floor(x);
      fx = std::min(fx, static_cast<double>(size - 2));
      fx = std::max(fx, 0.0);
      double fy = std::floor(y);
      fy = std::min(fy, static_cast<double>(size - 2));
      fy = std::max(fy, 0.0);
      const double u = x - fx;
      const double v = y - fy;
      double* p = img + static_cast<int>(fy) * size + static_cast<int>(fx);
      const double c = sample_weight(i, n) * r;
      p[0] += c * ((1.0 - v) * (1.0 - u));
      p[1] += c * ((1.0 - v) * u);
      p[size] += c * (v * (1.0 - u));
      p[size + 1] += c * (v * u);
    }
  }
}

}  // namespace tomo::kernels
