#pragma once

#include "scn/image.hpp"

namespace scn {

// One of the 8 flip/rotation operations of the dihedral group acting on the
// pixel grid:
//   1 original          2 flip up-down
//   3 rotate  +90       4 rotate  +90 then flip up-down
//   5 rotate +180       6 rotate +180 then flip up-down
//   7 rotate  -90       8 rotate  -90 then flip up-down
// Rotations are counterclockwise; flip up-down maps row r to row H-1-r.
struct D4Transform {
    explicit D4Transform(int index) : k(index) {
        if (k < 1 || k > 8)
            throw ValidationError("D4 transform index must be in 1..8");
    }
    int k;
};

// Per-pixel linear map v -> alpha*v + beta. alpha must be nonzero so the
// inverse (v-beta)/alpha exists.
struct AffineParams {
    AffineParams() = default;
    AffineParams(double a, double b) : alpha(a), beta(b) {
        if (alpha == 0.0)
            throw ValidationError("affine alpha must be nonzero");
    }
    double alpha = 1.0;
    double beta = 0.0;

    bool is_identity() const { return alpha == 1.0 && beta == 0.0; }
};

// True for the four operations that swap image height and width.
bool d4_transposes_dims(D4Transform t);

// Group inverse of t within the 8 operations.
D4Transform d4_inverse(D4Transform t);

// Pure pixel permutation; output dims are (W,H) for k in {3,4,7,8}.
Image apply_d4(D4Transform t, const Image& img);

// Exact inverse: invert_d4(t, apply_d4(t, img)) is bit-identical to img.
Image invert_d4(D4Transform t, const Image& img);

// No clamping: values may leave [0,1], which keeps the map invertible.
Image apply_affine(const AffineParams& p, const Image& img);
Image invert_affine(const AffineParams& p, const Image& img);

}  // namespace scn
