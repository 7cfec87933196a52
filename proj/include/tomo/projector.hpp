#pragma once

#include "tomo/filter.hpp"
#include "tomo/geometry.hpp"
#include "tomo/image.hpp"
#include "tomo/kernels.hpp"

namespace tomo {

/// Spacing between consecutive ray samples, as a fraction of pixel_spacing.
inline constexpr double kDefaultStepFraction = 0.5;

/// Sampling pattern for all detector bins at one angle: rays are clipped to
/// the image square, then sampled at step_fraction*pixel_spacing intervals
/// centered inside the clipped span. Bins whose ray misses the image get
/// count 0.
kernels::AngleRays make_angle_rays(const ScanGeometry& g, double theta_rad,
                                   double step_fraction = kDefaultStepFraction);

/// Ray-driven line integrals: row (a, b) approximates the integral of the
/// image along ray b of angle a by a trapezoid rule over bilinear samples.
Sinogram forward(const Image& img, const ScanGeometry& g,
                 double step_fraction = kDefaultStepFraction);

/// Exact transpose of `forward` as a linear map: scatters each detector
/// value back along the identical sample pattern with identical weights.
/// Deterministic for any worker count: angles are accumulated into fixed
/// per-chunk partial images which are merged in chunk order.
Image adjoint(const Sinogram& s, const ScanGeometry& g,
              double step_fraction = kDefaultStepFraction);

/// Filtered backprojection: (pi / num_angles) * adjoint(ramp_filter(s)).
Image fbp(const Sinogram& s, const ScanGeometry& g,
          const FilterSpec& filter = {},
          double step_fraction = kDefaultStepFraction);

/// Pullback of an image-space gradient through fbp. For y = fbp(s) and a
/// scalar loss with dL/dy = grad_image, returns dL/ds. The row filter is
/// symmetric, so this is (pi / num_angles) * ramp_filter(forward(grad_image)).
Sinogram grad_wrt_sinogram(const Image& grad_image, const ScanGeometry& g,
                           const FilterSpec& filter = {},
                           double step_fraction = kDefaultStepFraction);

}  // namespace tomo
