#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomo/geometry.hpp"
#include "tomo/image.hpp"

namespace tomo {

/// Ellipse in normalized image coordinates: centers in [-1, 1]^2, semi-axes
/// in the same units, rotation counterclockwise in radians. Densities add
/// where ellipses overlap.
struct Ellipse {
  double center_x = 0.0;
  double center_y = 0.0;
  double semi_axis_a = 0.0;
  double semi_axis_b = 0.0;
  double rotation = 0.0;
  double density = 0.0;
};

struct Phantom {
  std::vector<Ellipse> ellipses;
};

enum class NoiseKind { none, gaussian };

/// Additive i.i.d. detector noise. gaussian with sigma 0 behaves exactly
/// like none.
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Point-samples the phantom at pixel centers; centers span [-1, 1]^2.
/// A center exactly on an ellipse boundary counts as inside.
Image rasterize(const Phantom& p, int image_size);

/// Closed-form line integrals of the continuous phantom, the oracle the
/// discrete projector is tested against. Chord lengths are computed in
/// normalized units and scaled to world units by the grid half-width
/// image_size * pixel_spacing / 2.
Sinogram analytic_sinogram(const Phantom& p, const ScanGeometry& g);

/// analytic_sinogram plus seeded i.i.d. noise; deterministic given the
/// noise seed on every platform (explicit Box-Muller, no library
/// distributions).
Sinogram simulate_measurement(const Phantom& p, const ScanGeometry& g,
                              const NoiseModel& noise);

/// The 10-ellipse Shepp-Logan head phantom (Shepp & Logan 1974), with the
/// skull density normalized to 1 as in the widespread tabulation of that
/// parameter set.
Phantom shepp_logan();

/// Text format: one "ellipse cx cy a b rotation density" line per ellipse
/// (rotation in radians); blank lines and #-comments ignored.
Phantom load_phantom(const std::string& path);
void save_phantom(const Phantom& p, const std::string& path);

}  // namespace tomo
