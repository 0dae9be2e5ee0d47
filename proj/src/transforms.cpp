#include "scn/transforms.hpp"

namespace scn {

bool d4_transposes_dims(D4Transform t) {
    return t.k == 3 || t.k == 4 || t.k == 7 || t.k == 8;
}

D4Transform d4_inverse(D4Transform t) {
    // Every flip composite and the 180-degree rotation are involutions; only
    // the two quarter turns swap.
    switch (t.k) {
        case 3: return D4Transform(7);
        case 7: return D4Transform(3);
        default: return t;
    }
}

Image apply_d4(D4Transform t, const Image& img) {
    const int h = img.height;
    const int w = img.width;
    const int oh = d4_transposes_dims(t) ? w : h;
    const int ow = d4_transposes_dims(t) ? h : w;
    Image out(oh, ow);

    // Gather form: out(r,c) = img(source(r,c)). Each case is the pull map of
    // the corresponding push convention documented in the header.
    for (int r = 0; r < oh; ++r) {
        for (int c = 0; c < ow; ++c) {
            double v = 0.0;
            switch (t.k) {
                case 1: v = img.at(r, c); break;
                case 2: v = img.at(h - 1 - r, c); break;
                case 3: v = img.at(c, w - 1 - r); break;
                case 4: v = img.at(c, r); break;
                case 5: v = img.at(h - 1 - r, w - 1 - c); break;
                case 6: v = img.at(r, w - 1 - c); break;
                case 7: v = img.at(h - 1 - c, r); break;
                case 8: v = img.at(h - 1 - c, w - 1 - r); break;
            }
            out.at(r, c) = v;
        }
    }
    return out;
}

Image invert_d4(D4Transform t, const Image& img) {
    return apply_d4(d4_inverse(t), img);
}

Image apply_affine(const AffineParams& p, const Image& img) {
    if (p.alpha == 0.0) throw ValidationError("affine alpha must be nonzero");
    if (p.is_identity()) return img;
    Image out(img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = p.alpha * img.data[i] + p.beta;
    return out;
}

Image invert_affine(const AffineParams& p, const Image& img) {
    if (p.alpha == 0.0) throw ValidationError("affine alpha must be nonzero");
    if (p.is_identity()) return img;
    Image out(img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = (img.data[i] - p.beta) / p.alpha;
    return out;
}

}  // namespace scn
