#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "doctest.h"
#include "tomo/errors.hpp"
#include "tomo/metrics.hpp"
#include "tomo/phantom.hpp"
#include "tomo/projector.hpp"

using namespace tomo;

namespace {

Image random_image(int size, std::mt19937_64& rng, double lo = -1.0,
                   double hi = 1.0) {
  Image img(size);
  std::uniform_real_distribution<double> u(lo, hi);
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

int bins_for(int size) {
  return static_cast<int>(std::ceil(size * std::sqrt(2.0)));
}

}  // namespace

TEST_CASE("forward: zero image projects to the zero sinogram") {
  const ScanGeometry g = make_full_scan(12, 32, 46);
  const Sinogram s = forward(Image(32), g);
  for (double v : s.data) CHECK(v == 0.0);
  CHECK(s.geometry_tag == g.tag());
}

TEST_CASE("forward is linear") {
  std::mt19937_64 rng(41);
  const ScanGeometry g = make_full_scan(15, 32, 46);
  const Image x = random_image(32, rng);
  const Image z = random_image(32, rng);
  const double alpha = 1.7, beta = -0.4;

  Image combo(32);
  for (std::size_t i = 0; i < combo.data.size(); ++i)
    combo.data[i] = alpha * x.data[i] + beta * z.data[i];

  const Sinogram fx = forward(x, g);
  const Sinogram fz = forward(z, g);
  const Sinogram fc = forward(combo, g);
  double scale = 0.0;
  for (double v : fc.data) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < fc.data.size(); ++i)
    CHECK(std::abs(fc.data[i] - (alpha * fx.data[i] + beta * fz.data[i])) <
          1e-10 * scale);
}

TEST_CASE("forward of the rasterized disk tracks the analytic sinogram") {
  Phantom disk;
  disk.ellipses.push_back({0.0, 0.0, 0.5, 0.5, 0.0, 1.0});
  const ScanGeometry g = make_full_scan(90, 256, 363);
  const Sinogram numeric = forward(rasterize(disk, 256), g);
  const Sinogram exact = analytic_sinogram(disk, g);

  // Central ray of every angle: chord 1.0 normalized = 128 world units.
  for (int a = 0; a < g.num_angles(); ++a)
    CHECK(std::abs(numeric.at(a, 181) - 128.0) < 0.02 * 128.0);

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.data.size(); ++i) {
    const double d = numeric.data[i] - exact.data[i];
    num += d * d;
    den += exact.data[i] * exact.data[i];
  }
  CHECK(std::sqrt(num / den) < 0.02);
}

TEST_CASE("adjoint: zero sinogram backprojects to the zero image") {
  const ScanGeometry g = make_full_scan(12, 32, 46);
  const Image img = adjoint(Sinogram(12, 46, g.tag()), g);
  for (double v : img.data) CHECK(v == 0.0);
}

TEST_CASE("adjoint identity holds at sizes 32, 64, 128") {
  std::mt19937_64 rng(42);
  for (int size : {32, 64, 128}) {
    const ScanGeometry g = make_full_scan(45, size, bins_for(size));
    for (int pair = 0; pair < 20; ++pair) {
      const Image x = random_image(size, rng);
      const Sinogram y = random_sinogram(g, rng);
      const double lhs = dot(forward(x, g).data, y.data);
      const double rhs = dot(x.data, adjoint(y, g).data);
      CHECK(std::abs(lhs - rhs) / (std::abs(lhs) + 1e-12) < 1e-6);
    }
  }
}

TEST_CASE("adjoint of a single hot bin is one ray strip") {
  const ScanGeometry g = make_full_scan(2, 32, 46);
  Sinogram s(2, 46, g.tag());
  // Angle 0 is a vertical ray; bin 23 sits at s = 0.5, pixel column 16.
  s.at(0, 23) = 1.0;
  const Image img = adjoint(s, g);

  double strip = 0.0;
  for (int r = 0; r < 32; ++r) {
    for (int c = 0; c < 32; ++c) {
      if (c == 16 || c == 17)
        strip += img.at(r, c);
      else
        CHECK(img.at(r, c) == 0.0);
    }
  }
  CHECK(strip > 0.0);
}

TEST_CASE("adjoint is deterministic across worker counts") {
  // parallel_chunks reads TOMO_THREADS; the merge order contract says the
  // result must not depend on it.
  std::mt19937_64 rng(43);
  const ScanGeometry g = make_full_scan(37, 48, 68);
  const Sinogram y = random_sinogram(g, rng);

  setenv("TOMO_THREADS", "1", 1);
  const Image a = adjoint(y, g);
  setenv("TOMO_THREADS", "7", 1);
  const Image b = adjoint(y, g);
  unsetenv("TOMO_THREADS");
  const Image c = adjoint(y, g);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    CHECK(a.data[i] == b.data[i]);
    CHECK(a.data[i] == c.data[i]);
  }
}

TEST_CASE("forward of a smooth isotropic object is angle-invariant") {
  // A rasterized hard-edged disk is not rotation invariant at the pixel
  // scale, so the invariance contract is probed with a centered Gaussian
  // whose tails vanish inside the frame.
  const int size = 64;
  const double c0 = 0.5 * (size - 1);
  const double sigma = size / 10.0;
  Image img(size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c)
      img.at(r, c) = std::exp(-((r - c0) * (r - c0) + (c - c0) * (c - c0)) /
                              (2 * sigma * sigma));

  const ScanGeometry g = make_full_scan(60, size, bins_for(size));
  const Sinogram s = forward(img, g);
  double peak = 0.0;
  for (int b = 0; b < g.num_bins(); ++b)
    peak = std::max(peak, std::abs(s.at(0, b)));

  // Bilinear ray sampling is anisotropic at the pixel scale, which floors
  // the row-to-row deviation near (px/sigma)^2; measured 1.2e-3 here.
  double worst = 0.0;
  for (int a = 1; a < g.num_angles(); ++a)
    for (int b = 0; b < g.num_bins(); ++b)
      worst = std::max(worst, std::abs(s.at(a, b) - s.at(0, b)));
  CHECK(worst / peak < 5e-3);
}

TEST_CASE("fbp: zero sinogram reconstructs the zero image") {
  const ScanGeometry g = make_full_scan(12, 32, 46);
  const Image img = fbp(Sinogram(12, 46, g.tag()), g);
  for (double v : img.data) CHECK(v == 0.0);
}

TEST_CASE("fbp recovers the density of a disk") {
  Phantom disk;
  disk.ellipses.push_back({0.0, 0.0, 0.5, 0.5, 0.0, 1.0});
  const ScanGeometry g = make_full_scan(360, 256, 363);
  const Image recon = fbp(analytic_sinogram(disk, g), g);

  // Interior: disk radius 64 px eroded by 3 px.
  const double c0 = 0.5 * 255;
  double sum = 0.0;
  int count = 0;
  for (int r = 0; r < 256; ++r) {
    for (int c = 0; c < 256; ++c) {
      const double d2 = (r - c0) * (r - c0) + (c - c0) * (c - c0);
      if (d2 <= 61.0 * 61.0) {
        sum += recon.at(r, c);
        ++count;
      }
    }
  }
  const double mean = sum / count;
  CHECK(std::abs(mean - 1.0) < 0.05);
}

TEST_CASE("fbp of a dense Shepp-Logan scan reaches the pinned fidelity") {
  const int size = 256;
  const Phantom p = shepp_logan();
  const ScanGeometry g = make_full_scan(720, size, 363);
  const Image recon = fbp(analytic_sinogram(p, g), g);
  const Image gt = rasterize(p, size);

  // Error concentrates in the one-pixel rasterized skull edge, so the
  // full-disk number is edge-limited while the head interior (outer brain
  // ellipse eroded by 3 px, as in the disk-density check) is far cleaner.
  // Both are pinned from a reference run with +-1 dB slack; a drift means
  // the projector, filter, or phantom changed behavior.
  const Mask disk = inscribed_disk_mask(size);
  const double disk_db = psnr(gt, recon, 1.0, &disk);
  CHECK(disk_db > 25.25 - 1.0);
  CHECK(disk_db < 25.25 + 1.0);

  Mask interior;
  interior.size = size;
  interior.inside.assign(static_cast<std::size_t>(size) * size, 0);
  const double margin = 3.0 * 2.0 / size;
  const double a = 0.6624 - margin, b = 0.874 - margin, cy = -0.0184;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double x = (c + 0.5) * 2.0 / size - 1.0;
      const double y = 1.0 - (r + 0.5) * 2.0 / size;
      const double u = x / a, v = (y - cy) / b;
      interior.inside[static_cast<std::size_t>(r) * size + c] =
          u * u + v * v <= 1.0;
    }
  }
  const double interior_db = psnr(gt, recon, 1.0, &interior);
  CHECK(interior_db >= 30.0);
  CHECK(interior_db > 53.93 - 1.0);
  CHECK(interior_db < 53.93 + 1.0);
}

TEST_CASE("grad_wrt_sinogram: zero gradient image maps to zero") {
  const ScanGeometry g = make_full_scan(12, 32, 46);
  const Sinogram s = grad_wrt_sinogram(Image(32), g);
  for (double v : s.data) CHECK(v == 0.0);
}

TEST_CASE("composed adjointness: fbp vs grad_wrt_sinogram") {
  std::mt19937_64 rng(44);
  const ScanGeometry g = make_full_scan(45, 64, 91);
  for (int pair = 0; pair < 10; ++pair) {
    const Sinogram p = random_sinogram(g, rng);
    const Image gimg = random_image(64, rng);
    const double lhs = dot(fbp(p, g).data, gimg.data);
    const double rhs = dot(p.data, grad_wrt_sinogram(gimg, g).data);
    CHECK(std::abs(lhs - rhs) / (std::abs(lhs) + 1e-12) < 1e-6);
  }
}

TEST_CASE("grad_wrt_sinogram matches finite differences of 0.5*||fbp||^2") {
  std::mt19937_64 rng(45);
  const ScanGeometry g = make_full_scan(45, 64, 91);
  Sinogram p = random_sinogram(g, rng);

  auto loss = [&](const Sinogram& s) {
    const Image y = fbp(s, g);
    return 0.5 * dot(y.data, y.data);
  };
  const Sinogram grad = grad_wrt_sinogram(fbp(p, g), g);

  const double h = 1e-4;
  std::uniform_int_distribution<std::size_t> pick(0, p.data.size() - 1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t i = pick(rng);
    Sinogram plus = p, minus = p;
    plus.data[i] += h;
    minus.data[i] -= h;
    const double fd = (loss(plus) - loss(minus)) / (2 * h);
    CHECK(std::abs(fd - grad.data[i]) /
              (std::abs(fd) + std::abs(grad.data[i]) + 1e-12) <
          1e-4);
  }
}

TEST_CASE("smaller integration steps keep the forward model consistent") {
  Phantom disk;
  disk.ellipses.push_back({0.1, 0.0, 0.4, 0.4, 0.0, 1.0});
  const ScanGeometry g = make_full_scan(18, 64, 91);
  const Image img = rasterize(disk, 64);
  const Sinogram coarse = forward(img, g, 0.5);
  const Sinogram fine = forward(img, g, 0.25);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < coarse.data.size(); ++i) {
    num += (coarse.data[i] - fine.data[i]) * (coarse.data[i] - fine.data[i]);
    den += fine.data[i] * fine.data[i];
  }
  CHECK(std::sqrt(num / den) < 0.01);
}

TEST_CASE("projector operations validate their inputs") {
  const ScanGeometry g = make_full_scan(12, 32, 46);
  const ScanGeometry other = make_full_scan(13, 32, 46);

  CHECK_THROWS_AS(forward(Image(16), g), ValidationError);

  Image nan_img(32);
  nan_img.at(1, 1) = std::nan("");
  CHECK_THROWS_AS(forward(nan_img, g), NumericalError);

  Sinogram wrong_tag(12, 46, other.tag());
  CHECK_THROWS_AS(adjoint(wrong_tag, g), ValidationError);
  CHECK_THROWS_AS(fbp(wrong_tag, g), ValidationError);

  Sinogram nan_sino(12, 46, g.tag());
  nan_sino.at(0, 0) = std::nan("");
  CHECK_THROWS_AS(adjoint(nan_sino, g), NumericalError);
}
