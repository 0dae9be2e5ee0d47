#pragma once

#include "scn/image.hpp"

namespace scn {

// Mean squared difference in normalized units. The squared differences are
// summed in ascending value order, which makes the result exactly invariant
// under any joint permutation of the two images (flips, rotations).
double mse(const Image& a, const Image& b);

// 10*log10(1/mse) dB, peak 1.0. Identical images report +infinity.
double psnr(const Image& a, const Image& b);

// PSNR after snapping both images to the 8-bit k/255 grid, the convention of
// published tables.
double psnr_u8(const Image& a, const Image& b);

// committee_psnr - base_psnr, in dB. Rejects non-finite inputs.
double ipsnr(double committee_psnr, double base_psnr);

}  // namespace scn
