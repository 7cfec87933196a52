#pragma once

#include <complex>
#include <vector>

#include "tomo/geometry.hpp"
#include "tomo/image.hpp"

namespace tomo {

enum class FilterKind { ram_lak, hann };

struct FilterSpec {
  FilterKind kind = FilterKind::ram_lak;
};

namespace filter {

/// Smallest power of two >= 2*num_bins; rows are zero-padded to this length
/// before frequency-domain filtering so circular convolution does not wrap
/// measurable support.
int padded_size(int num_bins);

/// In-place radix-2 FFT; length must be a power of two. The inverse scales
/// by 1/n.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

/// Frequency response of the reconstruction filter on a padded row,
/// indexed by DFT bin. Real and even (response[k] == response[npad-k]), so
/// the induced convolution is symmetric and the row filter equals its own
/// transpose. Scaled so that backprojecting filtered rows with the pi/n
/// angle weight reconstructs density per unit area:
///   response[k] = min(k, npad-k) / (npad * pixel_spacing^2),
/// optionally tapered by a Hann window that reaches zero at Nyquist.
std::vector<double> response(int npad, double pixel_spacing, FilterKind kind);

/// Multiplies a length-npad real signal by `response` in the frequency
/// domain, in place. This is the exact linear map the row filter applies
/// between zero-pad and crop; tests probe it directly.
void apply_padded(std::vector<double>& padded,
                  const std::vector<double>& response);

/// Per-row filtering pipeline: zero-pad to npad, apply `response`, crop.
class RowFilter {
 public:
  RowFilter(int num_bins, double pixel_spacing, FilterSpec spec);

  int num_bins() const { return num_bins_; }
  int padded() const { return npad_; }
  const std::vector<double>& frequency_response() const { return response_; }

  void apply_row(const double* in, double* out) const;

 private:
  int num_bins_;
  int npad_;
  std::vector<double> response_;
};

}  // namespace filter

/// Filters every angle row of the sinogram. The sinogram must carry the
/// geometry's tag. Non-finite input raises NumericalError.
Sinogram ramp_filter(const Sinogram& s, const ScanGeometry& g,
                     const FilterSpec& spec);

}  // namespace tomo
