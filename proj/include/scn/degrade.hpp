#pragma once

#include <cstdint>

#include "scn/image.hpp"

namespace scn {

// Gaussian noise, std quoted on the 0-255 scale (sigma=30 means 30/255 in
// normalized units).
struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct ScaleSpec {
    int factor = 2;  // one of 2, 3, 4
};

// i.i.d. Gaussian noise, pixels filled in row-major order from a
// xoshiro256++/Box-Muller stream seeded with spec.seed. Output is not
// clamped; values may leave [0,1].
Image add_awgn(const Image& img, const NoiseSpec& spec);

// factor x factor block average. Input dims must be divisible by factor.
Image box_downscale(const Image& img, int factor);

// Catmull-Rom bicubic (a = -0.5) upscale by an integer factor, mirror
// boundary, separable with the horizontal pass first.
Image bicubic_upscale(const Image& img, int factor);

// Crops to dims divisible by factor (dropping the bottom/right remainder),
// box-downscales, then bicubic-upscales back to the cropped dims. This is
// the degraded input for the super-resolution experiments.
Image make_sisr_input(const Image& img, const ScaleSpec& spec);

}  // namespace scn
