#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomo/geometry.hpp"
#include "tomo/image.hpp"

namespace tomo {

/// Sinogram container: text header (format version, geometry fields, angle
/// list at full precision, noise seed) terminated by "end_header\n",
/// followed by a raw little-endian float32 payload, angle-major. Angles are
/// printed with enough digits to round-trip exactly, so the reconstructed
/// geometry tag matches the writer's.
struct SinogramFile {
  ScanGeometry geometry;
  Sinogram sinogram;
  std::uint64_t noise_seed = 0;
};

void write_sinogram(const std::string& path, const Sinogram& s,
                    const ScanGeometry& g, std::uint64_t noise_seed);
SinogramFile read_sinogram(const std::string& path);

/// Image sidecar: small text header plus raw little-endian float64 payload,
/// row-major. Lossless, for exact metric recomputation.
void write_image(const std::string& path, const Image& img);
Image read_image(const std::string& path);

/// CSV with header "iteration,loss" and one full-precision row per entry.
void write_loss_csv(const std::string& path,
                    const std::vector<double>& loss_history);

}  // namespace tomo
