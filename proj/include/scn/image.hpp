#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "scn/errors.hpp"

namespace scn {

// Single-channel grayscale image, row-major, nominal intensity range [0,1].
// Pixels are kept in double precision end to end; quantization happens only
// at the file boundaries (PGM export, raw-f32 handoff).
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> data;  // height*width values, row-major

    Image() = default;

    Image(int h, int w)
        : height(h), width(w), data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0.0) {
        check_shape();
    }

    Image(int h, int w, std::vector<double> values)
        : height(h), width(w), data(std::move(values)) {
        check_shape();
        if (data.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
            throw ValidationError("image data length does not match dimensions");
    }

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }

    std::size_t pixel_count() const { return data.size(); }

    bool same_shape(const Image& other) const {
        return height == other.height && width == other.width;
    }

private:
    void check_shape() const {
        if (height < 1 || width < 1)
            throw ValidationError("image dimensions must be at least 1x1");
    }
};

// Mirror fold with edge duplication: ..., -2 -> 1, -1 -> 0, n -> n-1, n+1 -> n-2.
// Shared boundary rule for convolution padding and resampling.
inline int mirror_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

}  // namespace scn
