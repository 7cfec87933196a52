#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace tomo {

/// Square scalar field on a pixel grid, row-major. Row 0 is the top of the
/// image; pixel (r, c) has world coordinates
///   x = (c - (size-1)/2) * pixel_spacing,  y = ((size-1)/2 - r) * pixel_spacing,
/// so the grid is centered on the world origin.
struct Image {
  int size = 0;
  double pixel_spacing = 1.0;
  std::vector<double> data;

  Image() = default;
  Image(int size_, double pixel_spacing_ = 1.0)
      : size(size_), pixel_spacing(pixel_spacing_),
        data(static_cast<std::size_t>(size_) * size_, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * size + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * size + c]; }
  std::size_t pixel_count() const { return data.size(); }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Stack of detector rows, one per projection angle, row-major (angle-major).
/// geometry_tag binds the sinogram to the ScanGeometry it was produced under;
/// operators reject a sinogram whose tag does not match theirs.
struct Sinogram {
  int num_angles = 0;
  int num_bins = 0;
  std::uint64_t geometry_tag = 0;
  std::vector<double> data;

  Sinogram() = default;
  Sinogram(int num_angles_, int num_bins_, std::uint64_t tag)
      : num_angles(num_angles_), num_bins(num_bins_), geometry_tag(tag),
        data(static_cast<std::size_t>(num_angles_) * num_bins_, 0.0) {}

  double* row(int a) { return data.data() + static_cast<std::size_t>(a) * num_bins; }
  const double* row(int a) const { return data.data() + static_cast<std::size_t>(a) * num_bins; }
  double& at(int a, int b) { return data[static_cast<std::size_t>(a) * num_bins + b]; }
  double at(int a, int b) const { return data[static_cast<std::size_t>(a) * num_bins + b]; }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace tomo
