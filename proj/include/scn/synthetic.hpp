#pragma once

#include <cstdint>
#include <vector>

#include "scn/image.hpp"

namespace scn {

// Procedural grayscale texture in [0,1]: a random linear gradient, a few
// oriented sinusoids and band-limited (box-smoothed) noise, normalized.
// Deterministic in the seed; stands in for a natural-image corpus at desk
// scale.
Image make_texture(std::uint64_t seed, int height, int width);

// count textures with seeds seed, seed+1, ...
std::vector<Image> make_texture_set(std::uint64_t seed, int count, int height, int width);

}  // namespace scn
