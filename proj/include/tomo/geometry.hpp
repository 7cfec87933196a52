#pragma once

#include <cstdint>
#include <vector>

namespace tomo {

inline constexpr double kPi = 3.14159265358979323846;

/// Centered 1D detector: bin b sits at signed offset
/// s = (b - (num_bins-1)/2) * bin_spacing from the rotation axis.
struct DetectorSpec {
  int num_bins = 0;
  double bin_spacing = 1.0;

  double coord(int bin) const {
    return (bin - 0.5 * (num_bins - 1)) * bin_spacing;
  }
};

/// Strictly increasing projection angles in [0, pi). Parallel-beam rays are
/// fully determined by a half rotation; the redundant half is excluded.
class AngleSet {
 public:
  AngleSet() = default;
  explicit AngleSet(std::vector<double> angles);  // validates ordering and range

  /// Uniform full scan: angle_i = i*pi/n, endpoint-exclusive.
  static AngleSet uniform(int num_angles);

  const std::vector<double>& angles() const { return angles_; }
  int count() const { return static_cast<int>(angles_.size()); }
  double operator[](int i) const { return angles_[i]; }

  AngleSet subset(const std::vector<int>& indices) const;

 private:
  std::vector<double> angles_;
};

/// Complete parallel-beam acquisition description. The detector must cover the
/// image diagonal so no projection is ever truncated.
class ScanGeometry {
 public:
  ScanGeometry() = default;
  ScanGeometry(int image_size, double pixel_spacing, DetectorSpec detector,
               AngleSet angles);  // validates coverage

  int image_size() const { return image_size_; }
  double pixel_spacing() const { return pixel_spacing_; }
  const DetectorSpec& detector() const { return detector_; }
  const AngleSet& angles() const { return angles_; }
  int num_angles() const { return angles_.count(); }
  int num_bins() const { return detector_.num_bins; }

  /// Stable identifier over all geometry fields; used to bind sinograms.
  std::uint64_t tag() const { return tag_; }

  /// Same grid and detector, restricted to a subset of the angles.
  ScanGeometry restricted(const std::vector<int>& angle_indices) const;

 private:
  int image_size_ = 0;
  double pixel_spacing_ = 1.0;
  DetectorSpec detector_;
  AngleSet angles_;
  std::uint64_t tag_ = 0;
};

/// Partition of the full angle index range into measured (J) and missing (K)
/// sets. Both sides are non-empty and together exhaust 0..N-1.
struct AngleSplit {
  AngleSet full;
  std::vector<int> measured_idx;
  std::vector<int> missing_idx;

  AngleSplit() = default;
  AngleSplit(AngleSet full_set, std::vector<int> measured,
             std::vector<int> missing);  // validates the partition
};

/// Uniform scan over [0, pi) with a unit-spacing centered detector.
ScanGeometry make_full_scan(int num_angles, int image_size, int num_bins);

/// Keep every keep_every-th angle starting at phase; the rest are missing.
AngleSplit split_by_stride(const ScanGeometry& geometry, int keep_every, int phase);

}  // namespace tomo
