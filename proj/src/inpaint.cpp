#include "tomo/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "tomo/errors.hpp"
#include "tomo/kernels.hpp"
#include "tomo/projector.hpp"

namespace tomo {
namespace {

void check_split(const AngleSplit& split, int num_angles) {
  if (split.full.count() != num_angles)
    throw ValidationError(
        "inpaint: split angle count does not match the geometry");
  const std::size_t total =
      split.measured_idx.size() + split.missing_idx.size();
  if (total != static_cast<std::size_t>(num_angles) ||
      split.measured_idx.empty() || split.missing_idx.empty())
    throw ValidationError("inpaint: split is not a two-sided partition");
}

void check_problem(const InpaintProblem& p) {
  check_split(p.split, p.geometry.num_angles());
  for (int i = 0; i < p.geometry.num_angles(); ++i) {
    if (p.split.full[i] != p.geometry.angles()[i])
      throw ValidationError(
          "inpaint: split angles differ from the geometry's angles");
  }
  const ScanGeometry gj = p.geometry.restricted(p.split.measured_idx);
  if (p.measured.geometry_tag != gj.tag() ||
      p.measured.num_angles !=
          static_cast<int>(p.split.measured_idx.size()) ||
      p.measured.num_bins != p.geometry.num_bins())
    throw ValidationError(
        "inpaint: measured block is not bound to the measured sub-geometry");
  if (!p.measured.all_finite())
    throw NumericalError("inpaint: measured rows contain non-finite values");
}

void check_missing_block(const InpaintProblem& p, const Sinogram& missing) {
  const ScanGeometry gk = p.geometry.restricted(p.split.missing_idx);
  if (missing.geometry_tag != gk.tag() ||
      missing.num_angles != static_cast<int>(p.split.missing_idx.size()) ||
      missing.num_bins != p.geometry.num_bins())
    throw ValidationError(
        "inpaint: missing block is not bound to the missing sub-geometry");
}

void check_config(const OptimizerConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0))
    throw ValidationError("optimize: learning_rate must be >= 0");
  if (cfg.max_iterations < 0)
    throw ValidationError("optimize: max_iterations must be >= 0");
  if (cfg.plateau_patience < 1)
    throw ValidationError("optimize: plateau_patience must be >= 1");
  if (!(cfg.plateau_rel_tol > 0.0))
    throw ValidationError("optimize: plateau_rel_tol must be > 0");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

/// Mean-reduced loss between the two reconstructions and its gradient with
/// respect to pred.
double loss_and_grad(const Image& pred, const Image& ref, LossKind kind,
                     Image& grad) {
  const std::size_t n = pred.pixel_count();
  const double gscale = 1.0 / static_cast<double>(n);
  const kernels::KernelTable& K = kernels::active();
  double sum;
  if (kind == LossKind::mae)
    sum = K.mae_grad(pred.data.data(), ref.data.data(), grad.data.data(),
                     gscale, n);
  else
    sum = K.mse_grad(pred.data.data(), ref.data.data(), grad.data.data(),
                     gscale, n);
  return sum / static_cast<double>(n);
}

}  // namespace

InpaintProblem make_problem(const ScanGeometry& g, const AngleSplit& split,
                            const Sinogram& full) {
  check_split(split, g.num_angles());
  if (full.geometry_tag != g.tag() || full.num_angles != g.num_angles() ||
      full.num_bins != g.num_bins())
    throw ValidationError(
        "make_problem: full sinogram is not bound to the geometry");
  InpaintProblem p;
  p.geometry = g;
  p.split = split;
  const ScanGeometry gj = g.restricted(split.measured_idx);
  p.measured = Sinogram(static_cast<int>(split.measured_idx.size()),
                        g.num_bins(), gj.tag());
  for (std::size_t i = 0; i < split.measured_idx.size(); ++i) {
    std::memcpy(p.measured.row(static_cast<int>(i)),
                full.row(split.measured_idx[i]),
                sizeof(double) * full.num_bins);
  }
  check_problem(p);
  return p;
}

Sinogram interpolate_nearest(const InpaintProblem& p) {
  check_problem(p);
  const ScanGeometry gk = p.geometry.restricted(p.split.missing_idx);
  Sinogram out(static_cast<int>(p.split.missing_idx.size()),
               p.geometry.num_bins(), gk.tag());
  const std::vector<double>& angles = p.geometry.angles().angles();
  const std::vector<int>& measured = p.split.measured_idx;
  for (std::size_t m = 0; m < p.split.missing_idx.size(); ++m) {
    const double theta = angles[p.split.missing_idx[m]];
    // First measured angle strictly above theta; the nearest row is that one
    // or its predecessor. Ties go to the predecessor (lower angle).
    std::size_t hi = 0;
    while (hi < measured.size() && angles[measured[hi]] <= theta) ++hi;
    std::size_t pick;
    if (hi == 0) {
      pick = 0;
    } else if (hi == measured.size()) {
      pick = measured.size() - 1;
    } else {
      const double below = theta - angles[measured[hi - 1]];
      const double above = angles[measured[hi]] - theta;
      pick = below <= above ? hi - 1 : hi;
    }
    std::memcpy(out.row(static_cast<int>(m)),
                p.measured.row(static_cast<int>(pick)),
                sizeof(double) * out.num_bins);
  }
  return out;
}

Sinogram interpolate_linear(const InpaintProblem& p) {
  check_problem(p);
  const ScanGeometry gk = p.geometry.restricted(p.split.missing_idx);
  Sinogram out(static_cast<int>(p.split.missing_idx.size()),
               p.geometry.num_bins(), gk.tag());
  const std::vector<double>& angles = p.geometry.angles().angles();
  const std::vector<int>& measured = p.split.measured_idx;
  const kernels::KernelTable& K = kernels::active();
  for (std::size_t m = 0; m < p.split.missing_idx.size(); ++m) {
    const double theta = angles[p.split.missing_idx[m]];
    std::size_t hi = 0;
    while (hi < measured.size() && angles[measured[hi]] < theta) ++hi;
    double* row = out.row(static_cast<int>(m));
    if (hi == 0 || hi == measured.size()) {
      const std::size_t pick = hi == 0 ? 0 : measured.size() - 1;
      std::memcpy(row, p.measured.row(static_cast<int>(pick)),
                  sizeof(double) * out.num_bins);
      continue;
    }
    const double t0 = angles[measured[hi - 1]];
    const double t1 = angles[measured[hi]];
    const double t = (theta - t0) / (t1 - t0);
    K.lerp(p.measured.row(static_cast<int>(hi - 1)),
           p.measured.row(static_cast<int>(hi)), t, row, out.num_bins);
  }
  return out;
}

LossResult self_supervised_loss(const InpaintProblem& p,
                                const Sinogram& missing,
                                const FilterSpec& filter, LossKind kind) {
  check_problem(p);
  check_missing_block(p, missing);
  const ScanGeometry gj = p.geometry.restricted(p.split.measured_idx);
  const ScanGeometry gk = p.geometry.restricted(p.split.missing_idx);
  const Image y_j = fbp(p.measured, gj, filter);
  const Image y_k = fbp(missing, gk, filter);
  LossResult r;
  r.grad = Image(y_k.size, y_k.pixel_spacing);
  r.value = loss_and_grad(y_k, y_j, kind, r.grad);
  return r;
}

InpaintState optimize(const InpaintProblem& p, const OptimizerConfig& cfg,
                      const FilterSpec& filter) {
  check_config(cfg);
  check_problem(p);
  InpaintState state;
  state.missing = cfg.init == InitKind::linear ? interpolate_linear(p)
                                               : interpolate_nearest(p);
  if (cfg.max_iterations == 0) return state;

  const ScanGeometry gj = p.geometry.restricted(p.split.measured_idx);
  const ScanGeometry gk = p.geometry.restricted(p.split.missing_idx);
  const Image y_j = fbp(p.measured, gj, filter);
  Image grad_image(p.geometry.image_size(), p.geometry.pixel_spacing());
  const kernels::KernelTable& K = kernels::active();

  double best = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Image y_k = fbp(state.missing, gk, filter);
    const double value = loss_and_grad(y_k, y_j, cfg.loss, grad_image);
    if (!std::isfinite(value) || !grad_image.all_finite())
      throw NumericalError(
          "optimize: non-finite loss or gradient at iteration " +
          std::to_string(it) + " (max |grad| = " +
          std::to_string(max_abs(grad_image.data)) + ")");
    const Sinogram grad_block = grad_wrt_sinogram(grad_image, gk, filter);
    K.axpy(-cfg.learning_rate, grad_block.data.data(),
           state.missing.data.data(), state.missing.data.size());
    if (cfg.clamp_nonnegative)
      K.clamp_min(state.missing.data.data(), state.missing.data.size(), 0.0);
    if (!state.missing.all_finite())
      throw NumericalError(
          "optimize: non-finite parameters after iteration " +
          std::to_string(it) + " (max |grad| = " +
          std::to_string(max_abs(grad_block.data)) + ")");
    state.loss_history.push_back(value);
    state.iteration = it + 1;
    if (value < best * (1.0 - cfg.plateau_rel_tol)) {
      best = value;
      stall = 0;
    } else {
      ++stall;
      if (stall >= cfg.plateau_patience) break;
    }
  }
  return state;
}

Sinogram assemble_full(const InpaintProblem& p, const Sinogram& missing) {
  check_problem(p);
  check_missing_block(p, missing);
  Sinogram out(p.geometry.num_angles(), p.geometry.num_bins(),
               p.geometry.tag());
  for (std::size_t i = 0; i < p.split.measured_idx.size(); ++i)
    std::memcpy(out.row(p.split.measured_idx[i]),
                p.measured.row(static_cast<int>(i)),
                sizeof(double) * out.num_bins);
  for (std::size_t i = 0; i < p.split.missing_idx.size(); ++i)
    std::memcpy(out.row(p.split.missing_idx[i]),
                missing.row(static_cast<int>(i)),
                sizeof(double) * out.num_bins);
  return out;
}

}  // namespace tomo
