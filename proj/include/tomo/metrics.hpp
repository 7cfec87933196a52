#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomo/image.hpp"

namespace tomo {

/// Boolean pixel mask over a square grid.
struct Mask {
  int size = 0;
  std::vector<std::uint8_t> inside;

  bool at(int r, int c) const {
    return inside[static_cast<std::size_t>(r) * size + c] != 0;
  }
};

/// Pixels whose center lies in the circle of radius size/2 about the grid
/// center: the region parallel-beam data can reconstruct. Corners are
/// outside every ray set and excluded from default evaluation.
Mask inscribed_disk_mask(int size);

Mask full_mask(int size);

/// 10*log10(data_range^2 / MSE) over masked pixels (whole frame when mask
/// is null). Identical images give +infinity.
double psnr(const Image& reference, const Image& test, double data_range,
            const Mask* mask = nullptr);

/// Gaussian-weighted SSIM, standard parameters: 11x11 window, sigma 1.5,
/// k1 = 0.01, k2 = 0.03, windowed moments without sample correction, mean
/// over windows fully inside the frame.
double ssim(const Image& reference, const Image& test, double data_range);

/// One row of the evaluation table.
struct MetricReport {
  std::string method;
  std::string dose_fraction;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

std::string metric_csv_header();
std::string metric_csv_row(const MetricReport& r);

}  // namespace tomo
