// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_PNG_IO_HPP
#define VESSELMIP_PNG_IO_HPP

#include <cstdint>
#include <string>

#include "vesselmip/volume.hpp"

namespace vesselmip {

// Grayscale PNG helpers.  Image rows run over v, columns over u.

// Writes values scaled by 65535 and rounded; input must lie in [0,1].
void write_png16(const std::string& path, const Grid2D<float>& img);

// Writes raw 16-bit samples.
void write_png16_raw(const std::string& path, const Grid2D<std::uint16_t>& img);

// Writes a binary image as 0 / 255.
void write_png8(const std::string& path, const Grid2D<std::uint8_t>& img);

Grid2D<std::uint8_t> read_png8(const std::string& path);
Grid2D<std::uint16_t> read_png16(const std::string& path);

}  // namespace vesselmip

#endif
