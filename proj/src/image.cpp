#include "sclab/io/image.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "sclab/error.hpp"

namespace sclab::io {

void write_pfm(const std::string& path, int width, int height, const std::vector<float>& data) {
  if (static_cast<std::size_t>(width) * height != data.size())
    throw DataError(path + ": PFM size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open file for writing");
  out << "Pf\n" << width << " " << height << "\n-1.0\n";
  // PFM stores rows bottom-to-top.
  for (int row = height - 1; row >= 0; --row) {
    out.write(reinterpret_cast<const char*>(data.data() + static_cast<std::size_t>(row) * width),
              static_cast<std::streamsize>(width * sizeof(float)));
  }
  if (!out) throw DataError(path + ": write failed");
}

std::vector<float> read_pfm(const std::string& path, int& width, int& height) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  std::string magic;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  if (magic != "Pf" || width <= 0 || height <= 0)
    throw DataError(path + ": not a grayscale PFM");
  if (scale >= 0.0) throw DataError(path + ": big-endian PFM not supported");
  in.get();  // single whitespace after the scale
  std::vector<float> data(static_cast<std::size_t>(width) * height);
  for (int row = height - 1; row >= 0; --row) {
    in.read(reinterpret_cast<char*>(data.data() + static_cast<std::size_t>(row) * width),
            static_cast<std::streamsize>(width * sizeof(float)));
  }
  if (!in) throw DataError(path + ": truncated PFM data");
  return data;
}

void write_png16(const std::string& path, int width, int height,
                 const std::vector<uint16_t>& data) {
  if (static_cast<std::size_t>(width) * height != data.size())
    throw DataError(path + ": PNG size mismatch");
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw DataError(path + ": cannot open file for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError(path + ": png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError(path + ": png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError(path + ": libpng write error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_set_swap(png);  // host is little-endian; PNG wants network order

  std::vector<png_bytep> rows(height);
  for (int r = 0; r < height; ++r) {
    rows[r] = reinterpret_cast<png_bytep>(
        const_cast<uint16_t*>(data.data() + static_cast<std::size_t>(r) * width));
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace sclab::io
