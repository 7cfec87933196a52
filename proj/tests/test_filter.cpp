#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "tomo/errors.hpp"
#include "tomo/filter.hpp"
#include "tomo/phantom.hpp"

using namespace tomo;

namespace {

std::vector<double> random_row(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> row(n);
  for (double& v : row) v = u(rng);
  return row;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("padded length is the next power of two covering 2n") {
  CHECK(filter::padded_size(1) == 2);
  CHECK(filter::padded_size(4) == 8);
  CHECK(filter::padded_size(5) == 16);
  CHECK(filter::padded_size(256) == 512);
  CHECK(filter::padded_size(363) == 1024);
  CHECK_THROWS_AS(filter::padded_size(0), ValidationError);
}

TEST_CASE("fft: delta transforms to a flat spectrum and round-trips") {
  std::vector<std::complex<double>> a(64, 0.0);
  a[0] = 1.0;
  filter::fft_inplace(a, false);
  for (const auto& z : a) {
    CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(z.imag()) < 1e-14);
  }

  std::mt19937_64 rng(5);
  std::vector<std::complex<double>> b(256);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& z : b) z = {u(rng), u(rng)};
  const std::vector<std::complex<double>> orig = b;
  filter::fft_inplace(b, false);
  filter::fft_inplace(b, true);
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(std::abs(b[i] - orig[i]) < 1e-12);

  std::vector<std::complex<double>> bad(3);
  CHECK_THROWS_AS(filter::fft_inplace(bad, false), ValidationError);
}

TEST_CASE("frequency response is real, even, zero at DC, ramp-scaled") {
  const int npad = 1024;
  const double px = 0.5;
  const std::vector<double> h = filter::response(npad, px, FilterKind::ram_lak);
  REQUIRE(static_cast<int>(h.size()) == npad);
  CHECK(h[0] == 0.0);
  for (int k = 1; k < npad; ++k) {
    CHECK(h[k] == h[npad - k]);  // even symmetry, exact
    CHECK(h[k] > 0.0);
  }
  CHECK(h[1] == doctest::Approx(1.0 / (npad * px * px)));
  CHECK(h[npad / 2] == doctest::Approx((npad / 2) / (npad * px * px)));

  const std::vector<double> hann = filter::response(npad, px, FilterKind::hann);
  CHECK(hann[0] == 0.0);
  CHECK(std::abs(hann[npad / 2]) < 1e-16);  // window reaches zero at Nyquist
  for (int k = 0; k < npad; ++k) {
    CHECK(hann[k] <= h[k] + 1e-18);
    CHECK(hann[k] == hann[(npad - k) % npad]);
  }
}

TEST_CASE("filtering a padded row removes its DC component") {
  std::mt19937_64 rng(6);
  const int n = 91;
  const int npad = filter::padded_size(n);
  std::vector<double> padded(npad, 0.0);
  const std::vector<double> row = random_row(n, rng);
  for (int i = 0; i < n; ++i) padded[i] = row[i];

  filter::apply_padded(padded,
                       filter::response(npad, 1.0, FilterKind::ram_lak));
  double mean = 0.0;
  for (double v : padded) mean += v;
  mean /= npad;
  CHECK(std::abs(mean) < 1e-8 * max_abs(row));
}

TEST_CASE("impulse response of the ramp is even") {
  const int npad = 256;
  std::vector<double> kernel(npad, 0.0);
  kernel[0] = 1.0;
  filter::apply_padded(kernel,
                       filter::response(npad, 1.0, FilterKind::ram_lak));
  for (int i = 1; i < npad; ++i)
    CHECK(kernel[i] == doctest::Approx(kernel[npad - i]).epsilon(1e-10));
  CHECK(kernel[0] > 0.0);   // center tap dominates
  CHECK(kernel[1] < 0.0);   // immediate negative lobes
}

TEST_CASE("constant row: interior response is a small crop artifact") {
  // An exact DC-kill would zero a constant row entirely, but the row is
  // cropped out of the padded signal, so the dropped tail leaves a residue
  // that decays quadratically from the edges. At n = 363 the interior
  // residue sits near 3e-4 of the constant; assert the measured scale.
  const ScanGeometry g = make_full_scan(2, 256, 363);
  Sinogram s(2, 363, g.tag());
  const double c = 2.0;
  for (double& v : s.data) v = c;
  const Sinogram f = ramp_filter(s, g, {FilterKind::ram_lak});

  double interior = 0.0;
  for (int b = 60; b < 303; ++b)
    interior = std::max(interior, std::abs(f.at(0, b)));
  CHECK(interior < 1e-3 * c);

  double edge = 0.0;
  for (int b = 0; b < 363; ++b) edge = std::max(edge, std::abs(f.at(0, b)));
  CHECK(edge > interior);  // roll-off concentrates at the edges
}

TEST_CASE("filtering twice equals the squared response, padded domain") {
  std::mt19937_64 rng(7);
  const int npad = 512;
  const std::vector<double> h = filter::response(npad, 1.0, FilterKind::ram_lak);
  std::vector<double> h2(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) h2[i] = h[i] * h[i];

  std::vector<double> twice = random_row(npad, rng);
  std::vector<double> once = twice;
  filter::apply_padded(twice, h);
  filter::apply_padded(twice, h);
  filter::apply_padded(once, h2);

  const double scale = max_abs(once);
  for (int i = 0; i < npad; ++i)
    CHECK(std::abs(twice[i] - once[i]) < 1e-8 * scale);
}

TEST_CASE("row filter is linear") {
  std::mt19937_64 rng(8);
  const filter::RowFilter rf(101, 1.0, {FilterKind::ram_lak});
  const std::vector<double> x = random_row(101, rng);
  const std::vector<double> z = random_row(101, rng);
  const double alpha = 0.7, beta = -1.3;

  std::vector<double> combo(101), fx(101), fz(101), fcombo(101);
  for (int i = 0; i < 101; ++i) combo[i] = alpha * x[i] + beta * z[i];
  rf.apply_row(x.data(), fx.data());
  rf.apply_row(z.data(), fz.data());
  rf.apply_row(combo.data(), fcombo.data());

  double scale = max_abs(fcombo);
  for (int i = 0; i < 101; ++i)
    CHECK(std::abs(fcombo[i] - (alpha * fx[i] + beta * fz[i])) <
          1e-10 * scale);
}

TEST_CASE("row filter equals its own transpose") {
  // Real even response makes the padded convolution symmetric, and cropping
  // is the transpose of zero-padding, so the cropped-domain map is
  // self-adjoint. The composed-gradient identity depends on this.
  std::mt19937_64 rng(9);
  const int n = 91;
  const filter::RowFilter rf(n, 1.0, {FilterKind::ram_lak});
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> x = random_row(n, rng);
    const std::vector<double> y = random_row(n, rng);
    std::vector<double> fx(n), fy(n);
    rf.apply_row(x.data(), fx.data());
    rf.apply_row(y.data(), fy.data());
    double fx_y = 0.0, x_fy = 0.0;
    for (int i = 0; i < n; ++i) {
      fx_y += fx[i] * y[i];
      x_fy += x[i] * fy[i];
    }
    CHECK(std::abs(fx_y - x_fy) < 1e-10 * (std::abs(fx_y) + 1.0));
  }
}

TEST_CASE("ramp_filter validates tag, shape, and finiteness") {
  const ScanGeometry g = make_full_scan(4, 16, 23);
  const ScanGeometry other = make_full_scan(5, 16, 23);

  Sinogram zero(4, 23, g.tag());
  const Sinogram fz = ramp_filter(zero, g, {});
  for (double v : fz.data) CHECK(v == 0.0);

  Sinogram wrong_tag(4, 23, other.tag());
  CHECK_THROWS_AS(ramp_filter(wrong_tag, g, {}), ValidationError);

  Sinogram nan_row(4, 23, g.tag());
  nan_row.at(2, 5) = std::nan("");
  CHECK_THROWS_AS(ramp_filter(nan_row, g, {}), NumericalError);
}

TEST_CASE("hann filtering damps high frequencies relative to ram_lak") {
  std::mt19937_64 rng(10);
  const ScanGeometry g = make_full_scan(2, 64, 91);
  Sinogram s(2, 91, g.tag());
  for (double& v : s.data) v = random_row(1, rng)[0];

  const Sinogram ram = ramp_filter(s, g, {FilterKind::ram_lak});
  const Sinogram hann = ramp_filter(s, g, {FilterKind::hann});
  double e_ram = 0.0, e_hann = 0.0;
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    e_ram += ram.data[i] * ram.data[i];
    e_hann += hann.data[i] * hann.data[i];
  }
  CHECK(e_hann < e_ram);
}
