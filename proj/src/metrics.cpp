#include "scn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "scn/image_io.hpp"

namespace scn {

double mse(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw ValidationError("mse: image dimensions differ");
    std::vector<double> sq(a.data.size());
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sq[i] = d * d;
    }
    std::sort(sq.begin(), sq.end());
    double acc = 0.0;
    for (double v : sq) acc += v;
    return acc / static_cast<double>(sq.size());
}

double psnr(const Image& a, const Image& b) {
    const double err = mse(a, b);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / err);
}

double psnr_u8(const Image& a, const Image& b) {
    return psnr(quantize_u8_levels(a), quantize_u8_levels(b));
}

double ipsnr(double committee_psnr, double base_psnr) {
    if (!std::isfinite(committee_psnr) || !std::isfinite(base_psnr))
        throw ValidationError("ipsnr requires finite PSNR inputs");
    return committee_psnr - base_psnr;
}

}  // namespace scn
