#pragma once

#include <string>
#include <vector>

#include "scn/image.hpp"

namespace scn {

// Restoration function f(Y) -> X hat. Implementations must be deterministic,
// shape-preserving and stateless during inference, so restore() can run
// concurrently from several workers on the same instance.
class Restorer {
public:
    virtual ~Restorer() = default;
    virtual Image restore(const Image& img) const = 0;
    virtual std::string name() const = 0;
};

class IdentityRestorer final : public Restorer {
public:
    Image restore(const Image& img) const override { return img; }
    std::string name() const override { return "identity"; }
};

// Single linear correlation kernel, zero bias, mirror padding. The kernel is
// applied as written (no flip), so test vectors are unambiguous.
class ConvFilterRestorer final : public Restorer {
public:
    ConvFilterRestorer(int kh, int kw, std::vector<double> kernel,
                       std::string label = "filter");

    Image restore(const Image& img) const override;
    std::string name() const override { return label_; }

    int kernel_height() const { return kh_; }
    int kernel_width() const { return kw_; }
    const std::vector<double>& kernel() const { return kernel_; }

private:
    int kh_;
    int kw_;
    std::vector<double> kernel_;
    std::string label_;
};

// Correlation of a single-channel image with a single kernel, mirror padding.
// Shared by ConvFilterRestorer and the network forward pass.
Image correlate_mirror(const Image& img, int kh, int kw, const std::vector<double>& kernel);

// True iff max_k | g_k^{-1}(f(g_k(img))) - f(img) |_inf <= tol over all 8
// flip/rotation operations.
bool is_d4_equivariant(const Restorer& r, const Image& img, double tol);

// The worst-case member deviation itself, for diagnostics.
double d4_equivariance_gap(const Restorer& r, const Image& img);

}  // namespace scn
