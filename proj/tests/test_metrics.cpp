#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "tomo/errors.hpp"
#include "tomo/metrics.hpp"
#include "tomo/phantom.hpp"

using namespace tomo;

namespace {

Image random_image(int size, std::mt19937_64& rng, double lo = 0.0,
                   double hi = 1.0) {
  Image img(size);
  std::uniform_real_distribution<double> u(lo, hi);
  for (double& v : img.data) v = u(rng);
  return img;
}

Image with_noise(const Image& base, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  Image out = base;
  for (double& v : out.data) v += n(rng);
  return out;
}

double naive_psnr(const Image& ref, const Image& test, double range,
                  const Mask* mask) {
  double se = 0.0;
  long count = 0;
  for (int r = 0; r < ref.size; ++r) {
    for (int c = 0; c < ref.size; ++c) {
      if (mask && !mask->at(r, c)) continue;
      const double d = ref.at(r, c) - test.at(r, c);
      se += d * d;
      ++count;
    }
  }
  return 10.0 * std::log10(range * range * count / se);
}

}  // namespace

TEST_CASE("inscribed disk mask excludes corners, keeps the center") {
  const Mask m = inscribed_disk_mask(64);
  CHECK_FALSE(m.at(0, 0));
  CHECK_FALSE(m.at(0, 63));
  CHECK_FALSE(m.at(63, 0));
  CHECK(m.at(31, 31));
  CHECK(m.at(32, 32));
  CHECK(m.at(31, 2));  // left edge midline is inside the circle

  long inside = 0;
  for (auto v : m.inside) inside += v != 0;
  // Area close to pi/4 of the frame.
  CHECK(inside > 0.75 * kPi / 4 * 64 * 64);
  CHECK(inside < 1.05 * kPi / 4 * 64 * 64);

  const Mask full = full_mask(8);
  for (auto v : full.inside) CHECK(v != 0);
}

TEST_CASE("psnr: identical images give the +infinity sentinel") {
  std::mt19937_64 rng(61);
  const Image img = random_image(16, rng);
  const double v = psnr(img, img, 1.0);
  CHECK(std::isinf(v));
  CHECK(v > 0);
}

TEST_CASE("psnr: constant offset 0.1 at range 1 is 20 dB") {
  Image ref(16);
  Image test(16);
  for (double& v : test.data) v = 0.1;
  CHECK(psnr(ref, test, 1.0) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("psnr matches a naive reference, masked and unmasked") {
  std::mt19937_64 rng(62);
  const Image ref = random_image(32, rng);
  const Image test = random_image(32, rng);
  const Mask disk = inscribed_disk_mask(32);

  CHECK(std::abs(psnr(ref, test, 1.0) - naive_psnr(ref, test, 1.0, nullptr)) <
        1e-10);
  CHECK(std::abs(psnr(ref, test, 1.0, &disk) -
                 naive_psnr(ref, test, 1.0, &disk)) < 1e-10);

  const Mask full = full_mask(32);
  CHECK(psnr(ref, test, 1.0, &full) == psnr(ref, test, 1.0, nullptr));
}

TEST_CASE("psnr decreases as noise grows") {
  const Image base = rasterize(shepp_logan(), 64);
  const double p1 = psnr(base, with_noise(base, 0.01, 7), 1.0);
  const double p5 = psnr(base, with_noise(base, 0.05, 7), 1.0);
  const double p10 = psnr(base, with_noise(base, 0.10, 7), 1.0);
  CHECK(p1 > p5);
  CHECK(p5 > p10);
}

TEST_CASE("psnr validates dimensions, range, and mask") {
  std::mt19937_64 rng(63);
  const Image a = random_image(16, rng);
  const Image b = random_image(8, rng);
  CHECK_THROWS_AS(psnr(a, b, 1.0), ValidationError);
  CHECK_THROWS_AS(psnr(a, a, 0.0), ValidationError);
  CHECK_THROWS_AS(psnr(a, a, -1.0), ValidationError);

  Mask empty;
  empty.size = 16;
  empty.inside.assign(16 * 16, 0);
  CHECK_THROWS_AS(psnr(a, a, 1.0, &empty), ValidationError);

  Mask wrong;
  wrong.size = 8;
  wrong.inside.assign(64, 1);
  CHECK_THROWS_AS(psnr(a, a, 1.0, &wrong), ValidationError);
}

TEST_CASE("ssim: self-similarity is exactly one") {
  std::mt19937_64 rng(64);
  const Image img = random_image(32, rng);
  CHECK(ssim(img, img, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssim is symmetric") {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 5; ++trial) {
    const Image a = random_image(24, rng);
    const Image b = random_image(24, rng);
    CHECK(std::abs(ssim(a, b, 1.0) - ssim(b, a, 1.0)) < 1e-12);
  }
}

TEST_CASE("ssim is bounded by one and penalizes perturbation") {
  std::mt19937_64 rng(66);
  const Image a = rasterize(shepp_logan(), 64);
  const Image noisy = with_noise(a, 0.05, 13);
  const double s = ssim(a, noisy, 1.0);
  CHECK(s < 1.0);
  CHECK(s > -1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Image x = random_image(16, rng);
    const Image y = random_image(16, rng);
    CHECK(ssim(x, y, 1.0) <= 1.0);
  }
}

TEST_CASE("ssim: inverted structure scores negative") {
  Image board(32);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) board.at(r, c) = (r + c) % 2;
  Image inverted(32);
  for (std::size_t i = 0; i < board.data.size(); ++i)
    inverted.data[i] = 1.0 - board.data[i];
  CHECK(ssim(board, inverted, 1.0) < 0.0);
}

TEST_CASE("ssim validates dimensions and window size") {
  std::mt19937_64 rng(67);
  const Image a = random_image(16, rng);
  const Image b = random_image(8, rng);
  CHECK_THROWS_AS(ssim(a, b, 1.0), ValidationError);
  const Image tiny = random_image(8, rng);
  CHECK_THROWS_AS(ssim(tiny, tiny, 1.0), ValidationError);
  CHECK_THROWS_AS(ssim(a, a, 0.0), ValidationError);
}

TEST_CASE("metric reports serialize as CSV") {
  CHECK(metric_csv_header() == "method,dose_fraction,psnr_db,ssim");
  MetricReport r;
  r.method = "nearest";
  r.dose_fraction = "1/2";
  r.psnr_db = 21.52;
  r.ssim = 0.871;
  CHECK(metric_csv_row(r) == "nearest,1/2,21.52,0.871");

  r.psnr_db = std::numeric_limits<double>::infinity();
  const std::string row = metric_csv_row(r);
  CHECK(row.find("inf") != std::string::npos);
}
