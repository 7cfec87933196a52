#include "tomo/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "tomo/filter.hpp"
#include "tomo/inpaint.hpp"
#include "tomo/metrics.hpp"
#include "tomo/phantom.hpp"
#include "tomo/projector.hpp"

namespace tomo {
namespace {

struct Check {
  const char* name;
  double measured;
  double tolerance;
  bool pass;
};

void report(std::ostream& out, const Check& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[%s] %-24s measured %.3e (tol %.0e)\n",
                c.pass ? " OK " : "FAIL", c.name, c.measured, c.tolerance);
  out << buf;
}

Image random_image(int size, std::mt19937_64& rng) {
  Image img(size);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : img.data) v = u(rng);
  return img;
}

Sinogram random_sinogram(const ScanGeometry& g, std::mt19937_64& rng) {
  Sinogram s(g.num_angles(), g.num_bins(), g.tag());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : s.data) v = u(rng);
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Pixel-driven nearest-ray backprojector. Deliberately not the transpose of
/// the ray-driven forward model; selects the broken path for the negative
/// control of the adjoint identity check.
Image pixel_driven_backprojection(const Sinogram& s, const ScanGeometry& g) {
  Image img(g.image_size(), g.pixel_spacing());
  const double c0 = 0.5 * (g.image_size() - 1);
  for (int a = 0; a < g.num_angles(); ++a) {
    const double theta = g.angles()[a];
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double* row = s.row(a);
    for (int r = 0; r < g.image_size(); ++r) {
      for (int c = 0; c < g.image_size(); ++c) {
        const double x = (c - c0) * g.pixel_spacing();
        const double y = (c0 - r) * g.pixel_spacing();
        const double t = x * ct + y * st;
        const double b =
            t / g.detector().bin_spacing + 0.5 * (g.num_bins() - 1);
        const int b0 = static_cast<int>(std::floor(b));
        if (b0 < 0 || b0 + 1 >= g.num_bins()) continue;
        const double u = b - b0;
        img.at(r, c) += (1.0 - u) * row[b0] + u * row[b0 + 1];
      }
    }
  }
  return img;
}

Check check_adjoint(bool mismatched) {
  std::mt19937_64 rng(2024);
  const ScanGeometry g = make_full_scan(40, 48, 69);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Image x = random_image(48, rng);
    const Sinogram y = random_sinogram(g, rng);
    const Sinogram ax = forward(x, g);
    const Image aty = mismatched ? pixel_driven_backprojection(y, g)
                                 : adjoint(y, g);
    const double lhs = dot(ax.data, y.data);
    const double rhs = dot(x.data, aty.data);
    const double rel = std::abs(lhs - rhs) / (std::abs(lhs) + 1e-12);
    worst = std::max(worst, rel);
  }
  return {"adjoint identity", worst, 1e-6, worst < 1e-6};
}

Check check_gradient() {
  std::mt19937_64 rng(7);
  const ScanGeometry g = make_full_scan(24, 32, 46);
  const Sinogram s = random_sinogram(g, rng);
  const Image ref = random_image(32, rng);
  const FilterSpec spec;
  const double npix = static_cast<double>(ref.pixel_count());

  auto loss_of = [&](const Sinogram& v) {
    const Image recon = fbp(v, g, spec);
    double acc = 0.0;
    for (std::size_t i = 0; i < recon.data.size(); ++i) {
      const double d = recon.data[i] - ref.data[i];
      acc += d * d;
    }
    return acc / npix;
  };

  const Image recon = fbp(s, g, spec);
  Image grad_img(32);
  for (std::size_t i = 0; i < recon.data.size(); ++i)
    grad_img.data[i] = 2.0 * (recon.data[i] - ref.data[i]) / npix;
  const Sinogram grad = grad_wrt_sinogram(grad_img, g, spec);

  const double h = 1e-4;
  std::uniform_int_distribution<std::size_t> pick(0, s.data.size() - 1);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t i = pick(rng);
    Sinogram plus = s, minus = s;
    plus.data[i] += h;
    minus.data[i] -= h;
    const double fd = (loss_of(plus) - loss_of(minus)) / (2.0 * h);
    const double rel =
        std::abs(fd - grad.data[i]) / (std::abs(fd) + std::abs(grad.data[i]) + 1e-12);
    worst = std::max(worst, rel);
  }
  return {"gradient vs fd", worst, 1e-3, worst < 1e-3};
}

Check check_forward_oracle() {
  Phantom disk;
  disk.ellipses.push_back({0.1, -0.15, 0.55, 0.55, 0.0, 1.0});
  const ScanGeometry g = make_full_scan(45, 96, 136);
  const Sinogram numeric = forward(rasterize(disk, 96), g);
  const Sinogram exact = analytic_sinogram(disk, g);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.data.size(); ++i) {
    const double d = numeric.data[i] - exact.data[i];
    num += d * d;
    den += exact.data[i] * exact.data[i];
  }
  const double rel = std::sqrt(num / den);
  return {"forward vs analytic", rel, 2e-2, rel < 2e-2};
}

Check check_filter_dc() {
  std::mt19937_64 rng(99);
  const int n = 73;
  const std::size_t npad = filter::padded_size(n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> padded(npad, 0.0);
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    padded[i] = u(rng);
    peak = std::max(peak, std::abs(padded[i]));
  }
  const std::vector<double> h =
      filter::response(npad, 1.0, FilterKind::ram_lak);
  filter::apply_padded(padded, h);
  double mean = 0.0;
  for (double v : padded) mean += v;
  mean = std::abs(mean / static_cast<double>(npad));
  const double rel = mean / peak;
  return {"filter dc removal", rel, 1e-8, rel < 1e-8};
}

Check check_determinism() {
  Phantom p = shepp_logan();
  const ScanGeometry g = make_full_scan(24, 32, 46);
  const Sinogram full = simulate_measurement(p, g, {NoiseKind::gaussian, 0.05, 5});
  const AngleSplit split = split_by_stride(g, 2, 0);
  const InpaintProblem problem = make_problem(g, split, full);
  OptimizerConfig cfg;
  cfg.max_iterations = 6;
  const InpaintState a = optimize(problem, cfg, {});
  const InpaintState b = optimize(problem, cfg, {});
  double worst = 0.0;
  for (std::size_t i = 0; i < a.missing.data.size(); ++i)
    worst = std::max(worst,
                     std::abs(a.missing.data[i] - b.missing.data[i]));
  for (std::size_t i = 0; i < a.loss_history.size(); ++i)
    worst = std::max(worst,
                     std::abs(a.loss_history[i] - b.loss_history[i]));
  const bool pass = worst == 0.0 && a.loss_history.size() == b.loss_history.size();
  return {"repeat determinism", worst, 0.0, pass};
}

}  // namespace

int run_selftest(bool mismatched_adjoint, std::ostream& out) {
  const Check checks[] = {
      check_adjoint(mismatched_adjoint), check_gradient(),
      check_forward_oracle(), check_filter_dc(), check_determinism()};
  int failed = 0;
  for (const Check& c : checks) {
    report(out, c);
    if (!c.pass) ++failed;
  }
  out << (failed == 0 ? "selftest: all checks passed\n"
                      : "selftest: " + std::to_string(failed) +
                            " check(s) failed\n");
  return failed;
}

}  // namespace tomo
