#pragma once

#include <array>
#include <string>

namespace driftscope {

using Rgb = std::array<unsigned char, 3>;

// 256-entry plasma lookup table, dark violet at 0 to bright yellow at 1.
const std::array<Rgb, 256>& plasma_table();

// Nearest table entry for v clamped to [0,1].
Rgb plasma(double v);

// "#rrggbb"
std::string to_hex(Rgb color);

}  // namespace driftscope
