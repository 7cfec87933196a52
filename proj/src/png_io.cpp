#include "tomo/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "tomo/errors.hpp"

namespace tomo {
namespace {

constexpr int kSeparator = 2;

std::uint16_t window16(double v, double data_range) {
  double t = v / data_range;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return static_cast<std::uint16_t>(std::lround(t * 65535.0));
}

/// rows: width*height samples, row-major, already windowed.
void write_gray16(const std::string& path,
                  const std::vector<std::uint16_t>& samples, int width,
                  int height) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) throw ValidationError("cannot write PNG: " + path);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (info == nullptr) {
    if (png != nullptr) png_destroy_write_struct(&png, nullptr);
    std::fclose(fp);
    throw ValidationError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw ValidationError("libpng write failed: " + path);
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  // PNG samples are big-endian.
  std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * 2);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::uint16_t s = samples[static_cast<std::size_t>(r) * width + c];
      row[2 * c] = static_cast<std::uint8_t>(s >> 8);
      row[2 * c + 1] = static_cast<std::uint8_t>(s & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

void write_png16(const std::string& path, const Image& img,
                 double data_range) {
  if (!(data_range > 0.0))
    throw ValidationError("write_png16: data_range must be positive");
  std::vector<std::uint16_t> samples(img.pixel_count());
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = window16(img.data[i], data_range);
  write_gray16(path, samples, img.size, img.size);
}

void write_grid_png16(const std::string& path,
                      const std::vector<const Image*>& panels,
                      double data_range) {
  if (panels.empty())
    throw ValidationError("write_grid_png16: no panels given");
  if (!(data_range > 0.0))
    throw ValidationError("write_grid_png16: data_range must be positive");
  const int size = panels[0]->size;
  for (const Image* p : panels)
    if (p->size != size)
      throw ValidationError("write_grid_png16: panel sizes differ");
  const int count = static_cast<int>(panels.size());
  const int width = count * size + (count - 1) * kSeparator;
  std::vector<std::uint16_t> samples(
      static_cast<std::size_t>(width) * size, 65535);
  for (int p = 0; p < count; ++p) {
    const int x0 = p * (size + kSeparator);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c)
        samples[static_cast<std::size_t>(r) * width + x0 + c] =
            window16(panels[p]->at(r, c), data_range);
  }
  write_gray16(path, samples, width, size);
}

}  // namespace tomo
