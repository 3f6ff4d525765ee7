#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sclab::io {

/// Grayscale PFM ("Pf"), float32, little-endian, rows bottom-to-top.
void write_pfm(const std::string& path, int width, int height, const std::vector<float>& data);
std::vector<float> read_pfm(const std::string& path, int& width, int& height);

/// 16-bit grayscale PNG.
void write_png16(const std::string& path, int width, int height,
                 const std::vector<uint16_t>& data);

}  // namespace sclab::io
