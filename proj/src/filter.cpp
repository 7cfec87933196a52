#include "tomo/filter.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tomo/errors.hpp"

namespace tomo {
namespace filter {

int padded_size(int num_bins) {
  if (num_bins <= 0)
    throw ValidationError("padded_size: num_bins must be positive, got " +
                          std::to_string(num_bins));
  int npad = 1;
  while (npad < 2 * num_bins) npad *= 2;
  return npad;
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw ValidationError("fft_inplace: length must be a power of two, got " +
                          std::to_string(n));
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv_n;
  }
}

std::vector<double> response(int npad, double pixel_spacing,
                             FilterKind kind) {
  if (npad <= 0 || (npad & (npad - 1)) != 0)
    throw ValidationError("response: npad must be a power of two, got " +
                          std::to_string(npad));
  if (!(pixel_spacing > 0.0))
    throw ValidationError("response: pixel_spacing must be positive");
  std::vector<double> h(npad);
  const double scale = 1.0 / (npad * pixel_spacing * pixel_spacing);
  for (int k = 0; k < npad; ++k) {
    const int folded = std::min(k, npad - k);
    double v = folded * scale;
    if (kind == FilterKind::hann)
      v *= 0.5 * (1.0 + std::cos(2.0 * kPi * folded / npad));
    h[k] = v;
  }
  return h;
}

void apply_padded(std::vector<double>& padded,
                  const std::vector<double>& response) {
  const std::size_t n = padded.size();
  if (n != response.size())
    throw ValidationError(
        "apply_padded: signal and response lengths differ");
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = padded[i];
  fft_inplace(buf, false);
  for (std::size_t i = 0; i < n; ++i) buf[i] *= response[i];
  fft_inplace(buf, true);
  for (std::size_t i = 0; i < n; ++i) padded[i] = buf[i].real();
}

RowFilter::RowFilter(int num_bins, double pixel_spacing, FilterSpec spec)
    : num_bins_(num_bins),
      npad_(padded_size(num_bins)),
      response_(response(npad_, pixel_spacing, spec.kind)) {}

void RowFilter::apply_row(const double* in, double* out) const {
  std::vector<double> padded(npad_, 0.0);
  for (int i = 0; i < num_bins_; ++i) padded[i] = in[i];
  apply_padded(padded, response_);
  for (int i = 0; i < num_bins_; ++i) out[i] = padded[i];
}

}  // namespace filter

Sinogram ramp_filter(const Sinogram& s, const ScanGeometry& g,
                     const FilterSpec& spec) {
  if (s.geometry_tag != g.tag())
    throw ValidationError(
        "ramp_filter: sinogram geometry tag does not match the scan "
        "geometry");
  if (s.num_angles != g.num_angles() || s.num_bins != g.num_bins())
    throw ValidationError("ramp_filter: sinogram shape does not match the "
                          "scan geometry");
  if (!s.all_finite())
    throw NumericalError("ramp_filter: sinogram contains non-finite values");
  const filter::RowFilter rf(s.num_bins, g.pixel_spacing(), spec);
  Sinogram out = s;
  for (int a = 0; a < s.num_angles; ++a) rf.apply_row(s.row(a), out.row(a));
  return out;
}

}  // namespace tomo
