#include "tomo/phantom.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {
namespace {

void check_phantom(const Phantom& p) {
  for (std::size_t i = 0; i < p.ellipses.size(); ++i) {
    const Ellipse& e = p.ellipses[i];
    if (!(e.semi_axis_a > 0.0) || !(e.semi_axis_b > 0.0))
      throw ValidationError("phantom ellipse " + std::to_string(i) +
                            ": semi-axes must be positive");
  }
}

/// Uniform double in (0, 1); never 0, so it is safe under log.
double next_open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double next_gaussian(std::mt19937_64& rng) {
  const double u1 = next_open_unit(rng);
  const double u2 = next_open_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

Image rasterize(const Phantom& p, int image_size) {
  if (image_size < 1)
    throw ValidationError("rasterize: image_size must be >= 1, got " +
                          std::to_string(image_size));
  check_phantom(p);
  Image img(image_size);
  const double scale = 2.0 / image_size;
  for (const Ellipse& e : p.ellipses) {
    const double c = std::cos(e.rotation);
    const double s = std::sin(e.rotation);
    const double inv_a2 = 1.0 / (e.semi_axis_a * e.semi_axis_a);
    const double inv_b2 = 1.0 / (e.semi_axis_b * e.semi_axis_b);
    for (int r = 0; r < image_size; ++r) {
      const double yn = 1.0 - (r + 0.5) * scale;
      const double dy = yn - e.center_y;
      for (int col = 0; col < image_size; ++col) {
        const double xn = (col + 0.5) * scale - 1.0;
        const double dx = xn - e.center_x;
        const double xr = dx * c + dy * s;
        const double yr = -dx * s + dy * c;
        if (xr * xr * inv_a2 + yr * yr * inv_b2 <= 1.0)
          img.at(r, col) += e.density;
      }
    }
  }
  return img;
}

Sinogram analytic_sinogram(const Phantom& p, const ScanGeometry& g) {
  check_phantom(p);
  Sinogram out(g.num_angles(), g.num_bins(), g.tag());
  // Chords come out in normalized units; one normalized unit spans half the
  // grid in world units.
  const double scale = 0.5 * g.image_size() * g.pixel_spacing();
  const std::vector<double>& angles = g.angles().angles();
  for (int a = 0; a < g.num_angles(); ++a) {
    const double cos_t = std::cos(angles[a]);
    const double sin_t = std::sin(angles[a]);
    double* row = out.row(a);
    for (const Ellipse& e : p.ellipses) {
      const double center_proj =
          e.center_x * cos_t + e.center_y * sin_t;
      const double tr = angles[a] - e.rotation;
      const double ct = std::cos(tr);
      const double st = std::sin(tr);
      const double a2 = e.semi_axis_a * e.semi_axis_a;
      const double b2 = e.semi_axis_b * e.semi_axis_b;
      // Projection width of the rotated ellipse at this angle.
      const double w2 = a2 * ct * ct + b2 * st * st;
      const double chord_scale =
          2.0 * e.density * e.semi_axis_a * e.semi_axis_b / w2;
      for (int b = 0; b < g.num_bins(); ++b) {
        const double tau = g.detector().coord(b) / scale - center_proj;
        const double rem = w2 - tau * tau;
        if (rem > 0.0) row[b] += chord_scale * std::sqrt(rem);
      }
    }
    for (int b = 0; b < g.num_bins(); ++b) row[b] *= scale;
  }
  return out;
}

Sinogram simulate_measurement(const Phantom& p, const ScanGeometry& g,
                              const NoiseModel& noise) {
  if (noise.sigma < 0.0)
    throw ValidationError("simulate_measurement: noise sigma must be >= 0");
  Sinogram out = analytic_sinogram(p, g);
  if (noise.kind == NoiseKind::none || noise.sigma == 0.0) return out;
  std::mt19937_64 rng(noise.seed);
  for (double& v : out.data) v += noise.sigma * next_gaussian(rng);
  return out;
}

Phantom shepp_logan() {
  // Shepp & Logan (1974) head phantom table (center, semi-axes, rotation in
  // degrees, density), skull normalized to density 1.
  static constexpr double kTable[10][6] = {
      {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
      {0.0, -0.0184, 0.6624, 0.8740, 0.0, -0.98},
      {0.22, 0.0, 0.11, 0.31, -18.0, -0.02},
      {-0.22, 0.0, 0.16, 0.41, 18.0, -0.02},
      {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
      {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
      {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
      {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
      {0.0, -0.606, 0.023, 0.023, 0.0, 0.01},
      {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
  };
  Phantom p;
  p.ellipses.reserve(10);
  for (const double* row : kTable) {
    Ellipse e;
    e.center_x = row[0];
    e.center_y = row[1];
    e.semi_axis_a = row[2];
    e.semi_axis_b = row[3];
    e.rotation = row[4] * kPi / 180.0;
    e.density = row[5];
    p.ellipses.push_back(e);
  }
  return p;
}

Phantom load_phantom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("phantom file not found: " + path);
  Phantom p;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    Ellipse e;
    if (!(fields >> tag >> e.center_x >> e.center_y >> e.semi_axis_a >>
          e.semi_axis_b >> e.rotation >> e.density) ||
        tag != "ellipse") {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": expected 'ellipse cx cy a b rotation "
                            "density'");
    }
    std::string extra;
    if (fields >> extra)
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": trailing fields after ellipse entry");
    p.ellipses.push_back(e);
  }
  check_phantom(p);
  return p;
}

void save_phantom(const Phantom& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write phantom file: " + path);
  char buf[256];
  for (const Ellipse& e : p.ellipses) {
    std::snprintf(buf, sizeof buf,
                  "ellipse %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  e.center_x, e.center_y, e.semi_axis_a, e.semi_axis_b,
                  e.rotation, e.density);
    out << buf;
  }
}

}  // namespace tomo
