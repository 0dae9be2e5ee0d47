#include "scn/restorer.hpp"

#include <cmath>
#include <utility>

#include "scn/transforms.hpp"

namespace scn {

ConvFilterRestorer::ConvFilterRestorer(int kh, int kw, std::vector<double> kernel,
                                       std::string label)
    : kh_(kh), kw_(kw), kernel_(std::move(kernel)), label_(std::move(label)) {
    if (kh_ < 1 || kw_ < 1 || kh_ % 2 == 0 || kw_ % 2 == 0)
        throw ValidationError("filter kernel dims must be odd and positive");
    if (kernel_.size() != static_cast<std::size_t>(kh_) * static_cast<std::size_t>(kw_))
        throw ValidationError("filter kernel length does not match dims");
}

Image correlate_mirror(const Image& img, int kh, int kw, const std::vector<double>& kernel) {
    const int h = img.height;
    const int w = img.width;
    const int cr = kh / 2;
    const int cc = kw / 2;
    Image out(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int i = 0; i < kh; ++i) {
                const int sr = mirror_index(r + i - cr, h);
                for (int j = 0; j < kw; ++j) {
                    const int sc = mirror_index(c + j - cc, w);
                    acc += kernel[static_cast<std::size_t>(i) * kw + j] * img.at(sr, sc);
                }
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

Image ConvFilterRestorer::restore(const Image& img) const {
    return correlate_mirror(img, kh_, kw_, kernel_);
}

double d4_equivariance_gap(const Restorer& r, const Image& img) {
    const Image base = r.restore(img);
    double worst = 0.0;
    for (int k = 2; k <= 8; ++k) {
        const D4Transform t(k);
        const Image member = invert_d4(t, r.restore(apply_d4(t, img)));
        for (std::size_t i = 0; i < base.data.size(); ++i)
            worst = std::max(worst, std::fabs(member.data[i] - base.data[i]));
    }
    return worst;
}

bool is_d4_equivariant(const Restorer& r, const Image& img, double tol) {
    return d4_equivariance_gap(r, img) <= tol;
}

}  // namespace scn
