#pragma once

#include <cstdint>
#include <string>

#include "scn/image.hpp"

namespace scn {

// Binary P5 portable graymap, maxval 255 only. Loaded bytes map to b/255.
Image load_pgm(const std::string& path);

// Writes P5/maxval-255. Each value v is stored as
// round(clamp(v,0,1)*255) with ties rounded away from zero.
void save_pgm(const Image& image, const std::string& path);

// Raw float container used for lossless inter-stage handoff:
//   magic "SCNR", u32le height, u32le width, height*width f32le values.
Image load_raw_f32(const std::string& path);
void save_raw_f32(const Image& image, const std::string& path);

// Sniffs the magic bytes and dispatches to the PGM or raw loader.
Image load_image_any(const std::string& path);

// 8-bit storage quantization as one byte value.
std::uint8_t quantize_byte(double v);

// Image with every value snapped to the k/255 grid (same rule as save_pgm).
Image quantize_u8_levels(const Image& image);

}  // namespace scn
