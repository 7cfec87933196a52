#include "tomo/geometry.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

namespace {

std::uint64_t fnv1a_init() { return 0xcbf29ce484222325ull; }

void fnv1a_mix(std::uint64_t& h, const void* bytes, std::size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
}

void fnv1a_mix_double(std::uint64_t& h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  fnv1a_mix(h, &bits, sizeof bits);
}

void fnv1a_mix_int(std::uint64_t& h, int v) { fnv1a_mix(h, &v, sizeof v); }

}  // namespace

AngleSet::AngleSet(std::vector<double> angles) : angles_(std::move(angles)) {
  if (angles_.empty())
    throw ValidationError("AngleSet: angle list must be non-empty");
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    double a = angles_[i];
    if (!(a >= 0.0 && a < kPi))
      throw ValidationError("AngleSet: angle " + std::to_string(a) +
                            " outside [0, pi)");
    if (i > 0 && !(a > angles_[i - 1]))
      throw ValidationError("AngleSet: angles must be strictly increasing");
  }
}

AngleSet AngleSet::uniform(int num_angles) {
  if (num_angles < 1)
    throw ValidationError("AngleSet::uniform: num_angles must be >= 1");
  std::vector<double> a(num_angles);
  for (int i = 0; i < num_angles; ++i) a[i] = i * kPi / num_angles;
  return AngleSet(std::move(a));
}

AngleSet AngleSet::subset(const std::vector<int>& indices) const {
  std::vector<double> a;
  a.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= count())
      throw ValidationError("AngleSet::subset: index " + std::to_string(i) +
                            " out of range");
    a.push_back(angles_[i]);
  }
  return AngleSet(std::move(a));
}

ScanGeometry::ScanGeometry(int image_size, double pixel_spacing,
                           DetectorSpec detector, AngleSet angles)
    : image_size_(image_size), pixel_spacing_(pixel_spacing),
      detector_(detector), angles_(std::move(angles)) {
  if (image_size_ < 1)
    throw ValidationError("ScanGeometry: image_size must be >= 1");
  if (!(pixel_spacing_ > 0.0))
    throw ValidationError("ScanGeometry: pixel_spacing must be > 0");
  if (detector_.num_bins < 1)
    throw ValidationError("ScanGeometry: detector num_bins must be >= 1");
  if (!(detector_.bin_spacing > 0.0))
    throw ValidationError("ScanGeometry: detector bin_spacing must be > 0");
  const double width = detector_.num_bins * detector_.bin_spacing;
  const double diagonal = image_size_ * pixel_spacing_ * std::sqrt(2.0);
  if (width < diagonal)
    throw ValidationError(
        "ScanGeometry: detector width " + std::to_string(width) +
        " does not cover the image diagonal " + std::to_string(diagonal));

  std::uint64_t h = fnv1a_init();
  fnv1a_mix_int(h, image_size_);
  fnv1a_mix_double(h, pixel_spacing_);
  fnv1a_mix_int(h, detector_.num_bins);
  fnv1a_mix_double(h, detector_.bin_spacing);
  for (double a : angles_.angles()) fnv1a_mix_double(h, a);
  tag_ = h;
}

ScanGeometry ScanGeometry::restricted(const std::vector<int>& angle_indices) const {
  return ScanGeometry(image_size_, pixel_spacing_, detector_,
                      angles_.subset(angle_indices));
}

AngleSplit::AngleSplit(AngleSet full_set, std::vector<int> measured,
                       std::vector<int> missing)
    : full(std::move(full_set)), measured_idx(std::move(measured)),
      missing_idx(std::move(missing)) {
  const int n = full.count();
  if (measured_idx.empty() || missing_idx.empty())
    throw ValidationError("AngleSplit: both index sets must be non-empty");
  std::vector<char> seen(n, 0);
  auto mark = [&](const std::vector<int>& idx, const char* side) {
    int prev = -1;
    for (int i : idx) {
      if (i < 0 || i >= n)
        throw ValidationError(std::string("AngleSplit: ") + side + " index " +
                              std::to_string(i) + " out of range");
      if (i <= prev)
        throw ValidationError(std::string("AngleSplit: ") + side +
                              " indices must be strictly increasing");
      if (seen[i])
        throw ValidationError("AngleSplit: index " + std::to_string(i) +
                              " appears in both sets");
      seen[i] = 1;
      prev = i;
    }
  };
  mark(measured_idx, "measured");
  mark(missing_idx, "missing");
  if (static_cast<int>(measured_idx.size() + missing_idx.size()) != n)
    throw ValidationError("AngleSplit: index sets do not exhaust the angle range");
}

ScanGeometry make_full_scan(int num_angles, int image_size, int num_bins) {
  if (num_angles < 2)
    throw ValidationError("make_full_scan: num_angles must be >= 2");
  DetectorSpec det{num_bins, 1.0};
  return ScanGeometry(image_size, 1.0, det, AngleSet::uniform(num_angles));
}

AngleSplit split_by_stride(const ScanGeometry& geometry, int keep_every, int phase) {
  const int n = geometry.num_angles();
  if (keep_every < 2)
    throw ValidationError("split_by_stride: keep_every must be >= 2");
  if (phase < 0 || phase >= keep_every)
    throw ValidationError("split_by_stride: phase must be in [0, keep_every)");
  if (keep_every >= n)
    throw ValidationError("split_by_stride: keep_every " +
                          std::to_string(keep_every) +
                          " leaves fewer than one measured angle per stride of " +
                          std::to_string(n));
  std::vector<int> measured, missing;
  for (int i = 0; i < n; ++i) {
    if (i % keep_every == phase)
      measured.push_back(i);
    else
      missing.push_back(i);
  }
  return AngleSplit(geometry.angles(), std::move(measured), std::move(missing));
}

}  // namespace tomo
