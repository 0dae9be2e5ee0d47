#include "scn/degrade.hpp"

#include <array>
#include <cmath>

#include "scn/rng.hpp"

namespace scn {

Image add_awgn(const Image& img, const NoiseSpec& spec) {
    if (spec.sigma < 0.0) throw ValidationError("noise sigma must be >= 0");
    if (spec.sigma == 0.0) return img;
    NormalStream normals(spec.seed);
    const double std_norm = spec.sigma / 255.0;
    Image out(img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = img.data[i] + std_norm * normals.next();
    return out;
}

Image box_downscale(const Image& img, int factor) {
    if (factor < 1) throw ValidationError("scale factor must be positive");
    if (img.height % factor != 0 || img.width % factor != 0)
        throw ValidationError("image dims must be divisible by the scale factor");
    const int oh = img.height / factor;
    const int ow = img.width / factor;
    const double inv_area = 1.0 / (static_cast<double>(factor) * factor);
    Image out(oh, ow);
    for (int r = 0; r < oh; ++r) {
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int i = 0; i < factor; ++i)
                for (int j = 0; j < factor; ++j)
                    acc += img.at(r * factor + i, c * factor + j);
            out.at(r, c) = acc * inv_area;
        }
    }
    return out;
}

namespace {

// Catmull-Rom weights (a = -0.5) for taps at offsets -1, 0, 1, 2 around the
// sample position, t in [0,1). Weights sum to 1 in exact arithmetic.
std::array<double, 4> catmull_rom_weights(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return {-0.5 * t3 + t2 - 0.5 * t,
            1.5 * t3 - 2.5 * t2 + 1.0,
            -1.5 * t3 + 2.0 * t2 + 0.5 * t,
            0.5 * t3 - 0.5 * t2};
}

// One separable pass along the row direction: width n -> n*factor.
void upscale_rows(const double* in, int n, int stride_in, double* out, int stride_out,
                  int factor) {
    for (int x = 0; x < n * factor; ++x) {
        // Destination pixel centers map to source coordinates under the
        // usual half-pixel alignment.
        const double sx = (x + 0.5) / factor - 0.5;
        const double base = std::floor(sx);
        const double t = sx - base;
        const auto wgt = catmull_rom_weights(t);
        double acc = 0.0;
        for (int tap = -1; tap <= 2; ++tap) {
            const int si = mirror_index(static_cast<int>(base) + tap, n);
            acc += wgt[static_cast<std::size_t>(tap + 1)] * in[si * stride_in];
        }
        out[x * stride_out] = acc;
    }
}

}  // namespace

Image bicubic_upscale(const Image& img, int factor) {
    if (factor < 1) throw ValidationError("scale factor must be positive");
    const int h = img.height;
    const int w = img.width;
    const int ow = w * factor;
    const int oh = h * factor;

    // Horizontal pass, then vertical.
    Image wide(h, ow);
    for (int r = 0; r < h; ++r)
        upscale_rows(img.data.data() + static_cast<std::size_t>(r) * w, w, 1,
                     wide.data.data() + static_cast<std::size_t>(r) * ow, 1, factor);

    Image out(oh, ow);
    for (int c = 0; c < ow; ++c)
        upscale_rows(wide.data.data() + c, h, ow, out.data.data() + c, ow, factor);
    return out;
}

Image make_sisr_input(const Image& img, const ScaleSpec& spec) {
    if (spec.factor < 2 || spec.factor > 4)
        throw ValidationError("scale factor must be 2, 3 or 4");
    if (img.height < spec.factor || img.width < spec.factor)
        throw ValidationError("image smaller than the scale factor");
    const int ch = img.height - img.height % spec.factor;
    const int cw = img.width - img.width % spec.factor;
    Image cropped(ch, cw);
    for (int r = 0; r < ch; ++r)
        for (int c = 0; c < cw; ++c)
            cropped.at(r, c) = img.at(r, c);
    return bicubic_upscale(box_downscale(cropped, spec.factor), spec.factor);
}

}  // namespace scn
