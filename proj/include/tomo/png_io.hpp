#pragma once

#include <string>
#include <vector>

#include "tomo/image.hpp"

namespace tomo {

/// 16-bit grayscale PNG; values are windowed to [0, data_range] and scaled
/// to the full 16-bit range.
void write_png16(const std::string& path, const Image& img, double data_range);

/// Side-by-side panels separated by thin white rules, same windowing as
/// write_png16. All panels must share one size.
void write_grid_png16(const std::string& path,
                      const std::vector<const Image*>& panels,
                      double data_range);

}  // namespace tomo
