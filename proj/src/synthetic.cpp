#include "scn/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "scn/rng.hpp"

namespace scn {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

// Two box-blur passes over the noise plane give it a rough 1/f^2 falloff,
// enough structure for conv filters to latch onto.
void box_blur_inplace(std::vector<double>& plane, int h, int w, int radius) {
    std::vector<double> tmp(plane.size());
    const double inv = 1.0 / (2 * radius + 1);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j)
                acc += plane[static_cast<std::size_t>(r) * w + mirror_index(c + j, w)];
            tmp[static_cast<std::size_t>(r) * w + c] = acc * inv;
        }
    }
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += tmp[static_cast<std::size_t>(mirror_index(r + i, h)) * w + c];
            plane[static_cast<std::size_t>(r) * w + c] = acc * inv;
        }
    }
}

}  // namespace

Image make_texture(std::uint64_t seed, int height, int width) {
    if (height < 1 || width < 1) throw ValidationError("texture dims must be positive");
    Xoshiro256pp rng(seed);

    const double gradient_angle = kTau * rng.next_double();
    const double gradient_gain = 0.3 + 0.5 * rng.next_double();
    const double gx = std::cos(gradient_angle);
    const double gy = std::sin(gradient_angle);

    struct Wave {
        double fx, fy, phase, amp;
    };
    std::vector<Wave> waves;
    const int wave_count = 2 + rng.next_below(3);
    for (int i = 0; i < wave_count; ++i) {
        const double angle = kTau * rng.next_double();
        const double cycles = 1.5 + 6.0 * rng.next_double();  // cycles across the image
        waves.push_back({cycles * std::cos(angle), cycles * std::sin(angle),
                         kTau * rng.next_double(), 0.1 + 0.25 * rng.next_double()});
    }

    std::vector<double> noise(static_cast<std::size_t>(height) * width);
    for (double& v : noise) v = rng.next_double() - 0.5;
    box_blur_inplace(noise, height, width, 1);
    box_blur_inplace(noise, height, width, 2);
    const double noise_amp = 0.5 + 0.8 * rng.next_double();

    Image img(height, width);
    const double inv_h = height > 1 ? 1.0 / (height - 1) : 0.0;
    const double inv_w = width > 1 ? 1.0 / (width - 1) : 0.0;
    for (int r = 0; r < height; ++r) {
        const double y = r * inv_h;
        for (int c = 0; c < width; ++c) {
            const double x = c * inv_w;
            double v = gradient_gain * (gx * x + gy * y);
            for (const Wave& wv : waves)
                v += wv.amp * std::sin(kTau * (wv.fx * x + wv.fy * y) + wv.phase);
            v += noise_amp * noise[static_cast<std::size_t>(r) * width + c];
            img.at(r, c) = v;
        }
    }

    double lo = img.data[0], hi = img.data[0];
    for (double v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;
    for (double& v : img.data) v = range > 0.0 ? (v - lo) / range : 0.5;
    return img;
}

std::vector<Image> make_texture_set(std::uint64_t seed, int count, int height, int width) {
    std::vector<Image> set;
    set.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        set.push_back(make_texture(seed + static_cast<std::uint64_t>(i), height, width));
    return set;
}

}  // namespace scn
