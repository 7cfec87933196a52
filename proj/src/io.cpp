#include "tomo/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tomo/errors.hpp"

namespace tomo {
namespace {

static_assert(std::endian::native == std::endian::little,
              "payload serialization assumes a little-endian host");

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("input file not found: " + path);
  return in;
}

[[noreturn]] void malformed(const std::string& path, const std::string& why) {
  throw ValidationError("malformed file " + path + ": " + why);
}

std::string read_header_line(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) malformed(path, "truncated header");
  return line;
}

}  // namespace

void write_sinogram(const std::string& path, const Sinogram& s,
                    const ScanGeometry& g, std::uint64_t noise_seed) {
  if (s.geometry_tag != g.tag() || s.num_angles != g.num_angles() ||
      s.num_bins != g.num_bins())
    throw ValidationError(
        "write_sinogram: sinogram is not bound to the geometry");
  std::ofstream out = open_out(path);
  out << "TOMOSINO 1\n";
  out << "image_size " << g.image_size() << "\n";
  out << "pixel_spacing " << fmt_double(g.pixel_spacing()) << "\n";
  out << "num_angles " << g.num_angles() << "\n";
  out << "num_bins " << g.num_bins() << "\n";
  out << "bin_spacing " << fmt_double(g.detector().bin_spacing) << "\n";
  out << "noise_seed " << noise_seed << "\n";
  out << "angles";
  for (double a : g.angles().angles()) out << " " << fmt_double(a);
  out << "\nend_header\n";
  std::vector<float> payload(s.data.size());
  for (std::size_t i = 0; i < s.data.size(); ++i)
    payload[i] = static_cast<float>(s.data[i]);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!out) throw ValidationError("write failed: " + path);
}

SinogramFile read_sinogram(const std::string& path) {
  std::ifstream in = open_in(path);
  if (read_header_line(in, path) != "TOMOSINO 1")
    malformed(path, "bad magic, expected 'TOMOSINO 1'");

  int image_size = -1, num_angles = -1, num_bins = -1;
  double pixel_spacing = 0.0, bin_spacing = 0.0;
  std::uint64_t noise_seed = 0;
  std::vector<double> angles;
  bool saw_angles = false;
  for (;;) {
    const std::string line = read_header_line(in, path);
    if (line == "end_header") break;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "image_size") fields >> image_size;
    else if (key == "pixel_spacing") fields >> pixel_spacing;
    else if (key == "num_angles") fields >> num_angles;
    else if (key == "num_bins") fields >> num_bins;
    else if (key == "bin_spacing") fields >> bin_spacing;
    else if (key == "noise_seed") fields >> noise_seed;
    else if (key == "angles") {
      double a;
      while (fields >> a) angles.push_back(a);
      saw_angles = true;
      fields.clear();
    } else {
      malformed(path, "unknown header key '" + key + "'");
    }
    if (fields.fail()) malformed(path, "unparsable value for '" + key + "'");
  }
  if (image_size < 0 || num_angles < 0 || num_bins < 0 ||
      pixel_spacing == 0.0 || bin_spacing == 0.0 || !saw_angles)
    malformed(path, "incomplete header");
  if (static_cast<int>(angles.size()) != num_angles)
    malformed(path, "angle list length disagrees with num_angles");

  SinogramFile f;
  f.noise_seed = noise_seed;
  f.geometry = ScanGeometry(image_size, pixel_spacing,
                            DetectorSpec{num_bins, bin_spacing},
                            AngleSet(std::move(angles)));
  f.sinogram = Sinogram(num_angles, num_bins, f.geometry.tag());
  std::vector<float> payload(f.sinogram.data.size());
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (in.gcount() !=
      static_cast<std::streamsize>(payload.size() * sizeof(float)))
    malformed(path, "payload shorter than num_angles*num_bins floats");
  for (std::size_t i = 0; i < payload.size(); ++i)
    f.sinogram.data[i] = payload[i];
  return f;
}

void write_image(const std::string& path, const Image& img) {
  std::ofstream out = open_out(path);
  out << "TOMOIMG 1\n";
  out << "size " << img.size << "\n";
  out << "pixel_spacing " << fmt_double(img.pixel_spacing) << "\n";
  out << "end_header\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(double)));
  if (!out) throw ValidationError("write failed: " + path);
}

Image read_image(const std::string& path) {
  std::ifstream in = open_in(path);
  if (read_header_line(in, path) != "TOMOIMG 1")
    malformed(path, "bad magic, expected 'TOMOIMG 1'");
  int size = -1;
  double pixel_spacing = 0.0;
  for (;;) {
    const std::string line = read_header_line(in, path);
    if (line == "end_header") break;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "size") fields >> size;
    else if (key == "pixel_spacing") fields >> pixel_spacing;
    else malformed(path, "unknown header key '" + key + "'");
    if (fields.fail()) malformed(path, "unparsable value for '" + key + "'");
  }
  if (size < 1 || !(pixel_spacing > 0.0)) malformed(path, "incomplete header");
  Image img(size, pixel_spacing);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size() * sizeof(double)));
  if (in.gcount() !=
      static_cast<std::streamsize>(img.data.size() * sizeof(double)))
    malformed(path, "payload shorter than size*size doubles");
  return img;
}

void write_loss_csv(const std::string& path,
                    const std::vector<double>& loss_history) {
  std::ofstream out = open_out(path);
  out << "iteration,loss\n";
  for (std::size_t i = 0; i < loss_history.size(); ++i)
    out << i << "," << fmt_double(loss_history[i]) << "\n";
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace tomo
