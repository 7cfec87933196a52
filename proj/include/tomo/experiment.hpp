#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tomo/filter.hpp"
#include "tomo/inpaint.hpp"
#include "tomo/phantom.hpp"

namespace tomo {

enum class EvalMask { disk, full };

/// Harness configuration. File format is flat "key = value" lines; every
/// key is also a CLI flag of the same name. Unknown keys are hard errors.
struct ExperimentConfig {
  std::string phantom = "shepp_logan";
  int image_size = 256;
  int num_angles = 360;
  /// Dose fractions 1/k, one subdirectory per entry.
  std::vector<int> keep_every = {2, 3};
  NoiseKind noise = NoiseKind::gaussian;
  /// Absolute sigma wins when set; otherwise sigma is noise_sigma_rel times
  /// the clean sinogram maximum.
  double noise_sigma = 0.0;
  bool noise_sigma_set = false;
  double noise_sigma_rel = 0.01;
  std::uint64_t seed = 1;
  int repeats = 1;
  FilterSpec filter;
  OptimizerConfig optimizer;
  EvalMask eval_mask = EvalMask::disk;
  std::string output_dir = "out";

  /// Applies one key/value pair; throws ValidationError naming the field
  /// and the violated constraint.
  void set(const std::string& key, const std::string& value);

  /// All recognized keys, for CLI flag generation.
  static const std::vector<std::string>& keys();
};

ExperimentConfig parse_config_file(const std::string& path);

/// Writes ground_truth.{img,png} and seed_<s>/full.sino for each of the
/// configured seeds.
void run_simulate(const ExperimentConfig& cfg);

/// Fills missing rows for every configured seed and dose with the given
/// method ("nearest", "linear", "optimize", or "" for all three); writes
/// completed sinograms, reconstructions, and the optimizer loss CSV.
void run_inpaint(const ExperimentConfig& cfg, const std::string& method);

/// Computes PSNR/SSIM against the ground truth for every method and dose,
/// writes per-seed metrics.csv, comparison grids, and (for repeats > 1) an
/// aggregate summary with mean and sample std over seeds.
void run_evaluate(const ExperimentConfig& cfg);

/// Property checks at small sizes, one line per family, all deterministic.
/// mismatched_adjoint swaps in a deliberately wrong backprojector so the
/// adjoint family must fail (negative control). Returns the number of
/// failed families.
int run_selftest(bool mismatched_adjoint, std::ostream& out);

}  // namespace tomo
