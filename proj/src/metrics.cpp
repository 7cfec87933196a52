#include "tomo/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

std::string format_metric(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

Mask inscribed_disk_mask(int size) {
  if (size < 1) throw ValidationError("inscribed_disk_mask: size must be >= 1");
  Mask m;
  m.size = size;
  m.inside.assign(static_cast<std::size_t>(size) * size, 0);
  const double c = 0.5 * (size - 1);
  const double r2 = 0.25 * size * size;
  for (int r = 0; r < size; ++r) {
    const double dy = r - c;
    for (int col = 0; col < size; ++col) {
      const double dx = col - c;
      if (dx * dx + dy * dy <= r2)
        m.inside[static_cast<std::size_t>(r) * size + col] = 1;
    }
  }
  return m;
}

Mask full_mask(int size) {
  if (size < 1) throw ValidationError("full_mask: size must be >= 1");
  Mask m;
  m.size = size;
  m.inside.assign(static_cast<std::size_t>(size) * size, 1);
  return m;
}

double psnr(const Image& reference, const Image& test, double data_range,
            const Mask* mask) {
  if (reference.size != test.size)
    throw ValidationError("psnr: image dimensions differ");
  if (mask != nullptr && mask->size != reference.size)
    throw ValidationError("psnr: mask dimensions differ from the images");
  if (!(data_range > 0.0))
    throw ValidationError("psnr: data_range must be positive");
  double sq_sum = 0.0;
  std::size_t count = 0;
  const std::size_t n = reference.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask != nullptr && mask->inside[i] == 0) continue;
    const double d = test.data[i] - reference.data[i];
    sq_sum += d * d;
    ++count;
  }
  if (count == 0) throw ValidationError("psnr: mask selects no pixels");
  const double mse = sq_sum / static_cast<double>(count);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(data_range * data_range / mse);
}

double ssim(const Image& reference, const Image& test, double data_range) {
  if (reference.size != test.size)
    throw ValidationError("ssim: image dimensions differ");
  if (!(data_range > 0.0))
    throw ValidationError("ssim: data_range must be positive");
  const int size = reference.size;
  if (size < kWindow)
    throw ValidationError("ssim: image smaller than the " +
                          std::to_string(kWindow) + "-pixel window");

  double weight[kWindow * kWindow];
  double wsum = 0.0;
  for (int dy = 0; dy < kWindow; ++dy) {
    for (int dx = 0; dx < kWindow; ++dx) {
      const double ry = dy - (kWindow - 1) / 2;
      const double rx = dx - (kWindow - 1) / 2;
      const double w = std::exp(-(rx * rx + ry * ry) / (2.0 * kSigma * kSigma));
      weight[dy * kWindow + dx] = w;
      wsum += w;
    }
  }
  for (double& w : weight) w /= wsum;

  const double c1 = (kK1 * data_range) * (kK1 * data_range);
  const double c2 = (kK2 * data_range) * (kK2 * data_range);
  const int valid = size - kWindow + 1;
  double total = 0.0;
  for (int r = 0; r < valid; ++r) {
    for (int c = 0; c < valid; ++c) {
      double mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
      for (int dy = 0; dy < kWindow; ++dy) {
        const double* xrow = &reference.data[(r + dy) *
                                             static_cast<std::size_t>(size) +
                                             c];
        const double* yrow =
            &test.data[(r + dy) * static_cast<std::size_t>(size) + c];
        const double* wrow = &weight[dy * kWindow];
        for (int dx = 0; dx < kWindow; ++dx) {
          const double w = wrow[dx];
          const double x = xrow[dx];
          const double y = yrow[dx];
          mx += w * x;
          my += w * y;
          mxx += w * (x * x);
          myy += w * (y * y);
          mxy += w * (x * y);
        }
      }
      const double vx = mxx - mx * mx;
      const double vy = myy - my * my;
      const double cxy = mxy - mx * my;
      const double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
      const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
      total += num / den;
    }
  }
  return total / (static_cast<double>(valid) * valid);
}

std::string metric_csv_header() { return "method,dose_fraction,psnr_db,ssim"; }

std::string metric_csv_row(const MetricReport& r) {
  return r.method + "," + r.dose_fraction + "," + format_metric(r.psnr_db) +
         "," + format_metric(r.ssim);
}

}  // namespace tomo
