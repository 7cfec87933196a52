#include "tomo/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tomo/errors.hpp"
#include "tomo/parallel.hpp"

namespace tomo {
namespace {

// Angles per adjoint partial buffer. Fixed so results do not depend on the
// worker count.
constexpr int kAnglesPerChunk = 16;

void check_step_fraction(double step_fraction) {
  if (!(step_fraction > 0.0 && step_fraction <= 1.0))
    throw ValidationError(
        "step_fraction must be in (0, 1], got " +
        std::to_string(step_fraction));
}

void check_image_matches(const Image& img, const ScanGeometry& g,
                         const char* op) {
  if (img.size != g.image_size() || img.pixel_spacing != g.pixel_spacing())
    throw ValidationError(std::string(op) +
                          ": image does not match the scan geometry");
}

void check_sinogram_matches(const Sinogram& s, const ScanGeometry& g,
                            const char* op) {
  if (s.geometry_tag != g.tag())
    throw ValidationError(std::string(op) +
                          ": sinogram geometry tag does not match the scan "
                          "geometry");
  if (s.num_angles != g.num_angles() || s.num_bins != g.num_bins())
    throw ValidationError(std::string(op) +
                          ": sinogram shape does not match the scan geometry");
}

/// Intersects t-intervals where x0 - t*k stays within [0, limit]. Returns
/// false when the intersection is empty.
bool clip_axis(double x0, double k, double limit, double& tmin,
               double& tmax) {
  if (k == 0.0) return x0 >= 0.0 && x0 <= limit;
  const double ta = x0 / k;
  const double tb = (x0 - limit) / k;
  tmin = std::max(tmin, std::min(ta, tb));
  tmax = std::min(tmax, std::max(ta, tb));
  return true;
}

}  // namespace

kernels::AngleRays make_angle_rays(const ScanGeometry& g, double theta_rad,
                                   double step_fraction) {
  check_step_fraction(step_fraction);
  const int size = g.image_size();
  const double px = g.pixel_spacing();
  const double c0 = 0.5 * (size - 1);
  const double cos_t = std::cos(theta_rad);
  const double sin_t = std::sin(theta_rad);
  // Ray for detector offset s runs along direction (-sin, cos) in world
  // coordinates; in pixel coordinates (x right, y down) that becomes
  //   xp(t) = X0 - t*kx,  yp(t) = Y0 - t*ky
  // with t the world-space arc length.
  const double kx = sin_t / px;
  const double ky = cos_t / px;
  const double h = step_fraction * px;

  const int num_bins = g.num_bins();
  kernels::AngleRays rays;
  rays.dx = -h * kx;
  rays.dy = -h * ky;
  rays.step_len = h;
  rays.x0.assign(num_bins, 0.0);
  rays.y0.assign(num_bins, 0.0);
  rays.count.assign(num_bins, 0);

  const double limit = static_cast<double>(size - 1);
  for (int b = 0; b < num_bins; ++b) {
    const double s = g.detector().coord(b);
    const double X0 = s * cos_t / px + c0;
    const double Y0 = c0 - s * sin_t / px;
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    if (!clip_axis(X0, kx, limit, tmin, tmax)) continue;
    if (!clip_axis(Y0, ky, limit, tmin, tmax)) continue;
    if (!(tmax > tmin)) continue;
    const double span = tmax - tmin;
    const int n = 1 + static_cast<int>(std::floor(span / h));
    // Center the sample train inside the clipped span.
    const double ta = tmin + 0.5 * (span - (n - 1) * h);
    rays.x0[b] = X0 - ta * kx;
    rays.y0[b] = Y0 - ta * ky;
    rays.count[b] = n;
  }
  return rays;
}

Sinogram forward(const Image& img, const ScanGeometry& g,
                 double step_fraction) {
  check_step_fraction(step_fraction);
  check_image_matches(img, g, "forward");
  if (!img.all_finite())
    throw NumericalError("forward: image contains non-finite values");

  Sinogram out(g.num_angles(), g.num_bins(), g.tag());
  const kernels::KernelTable& K = kernels::active();
  const std::vector<double>& angles = g.angles().angles();
  parallel_chunks(0, g.num_angles(), 1,
                  [&](int /*chunk*/, int begin, int end) {
                    for (int a = begin; a < end; ++a) {
                      const kernels::AngleRays rays =
                          make_angle_rays(g, angles[a], step_fraction);
                      K.forward_angle(img.data.data(), img.size, rays,
                                      out.row(a));
                    }
                  });
  return out;
}

Image adjoint(const Sinogram& s, const ScanGeometry& g,
              double step_fraction) {
  check_step_fraction(step_fraction);
  check_sinogram_matches(s, g, "adjoint");
  if (!s.all_finite())
    throw NumericalError("adjoint: sinogram contains non-finite values");

  const int num_angles = g.num_angles();
  const int num_chunks = (num_angles + kAnglesPerChunk - 1) / kAnglesPerChunk;
  const std::vector<double>& angles = g.angles().angles();
  std::vector<std::vector<double>> partial(
      num_chunks, std::vector<double>(
                      static_cast<std::size_t>(g.image_size()) * g.image_size(),
                      0.0));
  parallel_chunks(0, num_angles, kAnglesPerChunk,
                  [&](int chunk, int begin, int end) {
                    std::vector<double>& acc = partial[chunk];
                    for (int a = begin; a < end; ++a) {
                      const kernels::AngleRays rays =
                          make_angle_rays(g, angles[a], step_fraction);
                      kernels::adjoint_scatter_angle(acc.data(), g.image_size(),
                                                     rays, s.row(a));
                    }
                  });

  Image out(g.image_size(), g.pixel_spacing());
  const kernels::KernelTable& K = kernels::active();
  for (int c = 0; c < num_chunks; ++c)
    K.axpy(1.0, partial[c].data(), out.data.data(), out.pixel_count());
  return out;
}

Image fbp(const Sinogram& s, const ScanGeometry& g, const FilterSpec& filter,
          double step_fraction) {
  const Sinogram filtered = ramp_filter(s, g, filter);
  Image out = adjoint(filtered, g, step_fraction);
  const double scale = kPi / g.num_angles();
  for (double& v : out.data) v *= scale;
  return out;
}

Sinogram grad_wrt_sinogram(const Image& grad_image, const ScanGeometry& g,
                           const FilterSpec& filter, double step_fraction) {
  const Sinogram projected = forward(grad_image, g, step_fraction);
  Sinogram out = ramp_filter(projected, g, filter);
  const double scale = kPi / g.num_angles();
  for (double& v : out.data) v *= scale;
  return out;
}

}  // namespace tomo
