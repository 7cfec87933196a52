#pragma once

#include <vector>

#include "tomo/filter.hpp"
#include "tomo/geometry.hpp"
#include "tomo/image.hpp"

namespace tomo {

enum class LossKind { mae, mse };

/// A sparse-view acquisition: the full-scan geometry, the measured/missing
/// angle partition, and the measured rows. `measured` is tagged to the
/// geometry restricted to measured_idx.
struct InpaintProblem {
  ScanGeometry geometry;
  AngleSplit split;
  Sinogram measured;
};

/// Extracts the measured rows of a full sinogram into an InpaintProblem.
InpaintProblem make_problem(const ScanGeometry& g, const AngleSplit& split,
                            const Sinogram& full);

enum class InitKind { linear, nearest };

struct OptimizerConfig {
  double learning_rate = 0.1;
  int max_iterations = 500;
  LossKind loss = LossKind::mae;
  int plateau_patience = 50;
  double plateau_rel_tol = 1e-4;
  bool clamp_nonnegative = true;
  InitKind init = InitKind::linear;
};

/// Trainable missing rows plus bookkeeping; loss_history[i] is the loss
/// evaluated at the start of step i, so its length equals iteration.
struct InpaintState {
  Sinogram missing;
  int iteration = 0;
  std::vector<double> loss_history;
};

/// Missing rows filled with the nearest measured row by angle; ties break
/// toward the lower angle, boundaries clamp (no wraparound).
Sinogram interpolate_nearest(const InpaintProblem& p);

/// Missing rows as convex combinations of the bracketing measured rows,
/// linear in angle per detector bin; outside the measured range, the
/// nearest measured row is copied.
Sinogram interpolate_linear(const InpaintProblem& p);

struct LossResult {
  double value = 0.0;
  Image grad;  // dL/dy_K; no gradient flows to the measured reconstruction
};

/// Reconstructs y_J from the measured rows and y_K from the candidate
/// missing rows, each with its own sub-geometry, and evaluates the
/// mean-reduced loss L(y_J, y_K) with its gradient with respect to y_K.
LossResult self_supervised_loss(const InpaintProblem& p,
                                const Sinogram& missing,
                                const FilterSpec& filter, LossKind kind);

/// Plain full-batch gradient descent on the missing rows: initialize by
/// angular interpolation, then step along -learning_rate * dL/dmissing,
/// optionally clamping rows to >= 0. Stops at max_iterations or when the
/// best loss has not improved by plateau_rel_tol (relative) for
/// plateau_patience consecutive iterations. Fully deterministic.
InpaintState optimize(const InpaintProblem& p, const OptimizerConfig& cfg,
                      const FilterSpec& filter);

/// Full sinogram with measured rows copied bit-exactly from the problem and
/// missing rows taken from the block.
Sinogram assemble_full(const InpaintProblem& p, const Sinogram& missing);

}  // namespace tomo
