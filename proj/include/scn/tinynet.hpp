#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scn/image.hpp"
#include "scn/restorer.hpp"

namespace scn {

enum class Activation : std::uint8_t { linear = 0, relu = 1 };

// One convolution layer. Weights are stored in [out][in][kh][kw] order as
// f32, matching the on-disk format bit for bit; arithmetic promotes to
// double.
struct Layer {
    int out_ch = 0;
    int in_ch = 0;
    int kh = 0;
    int kw = 0;
    Activation activation = Activation::linear;
    std::vector<float> weights;  // out_ch*in_ch*kh*kw
    std::vector<float> bias;     // out_ch

    std::size_t weight_count() const {
        return static_cast<std::size_t>(out_ch) * in_ch * kh * kw;
    }
    std::size_t weight_index(int oc, int ic, int i, int j) const {
        return ((static_cast<std::size_t>(oc) * in_ch + ic) * kh + i) * kw + j;
    }
};

struct NetworkWeights {
    bool residual_mode = false;  // output = input - net(input)
    std::vector<Layer> layers;
};

// Checks channel chaining (first in_ch = 1, last out_ch = 1), odd kernel
// dims, buffer lengths and the final-layer-linear rule. Throws
// ValidationError with a distinct message per violation.
void validate(const NetworkWeights& w);

// Forward pass with mirror "same" padding. Shape-preserving for all
// dims >= 1; deterministic with a fixed layer/channel/row accumulation
// order.
Image forward(const NetworkWeights& w, const Image& img);

// Post-activation channel buffers of every layer, channel-major. buffers[0]
// is the input plane; buffers[l] has layers[l-1].out_ch * H * W doubles.
// Exposed for the trainer's backward pass and the feature-dump operation.
std::vector<std::vector<double>> forward_buffers(const NetworkWeights& w, const Image& img);

// One post-activation channel map, min-max normalized to [0,1] for export.
// raw_min/raw_max restore the original scale; a constant channel normalizes
// to all zeros.
struct FeatureMap {
    Image map;
    double raw_min = 0.0;
    double raw_max = 0.0;
};

// layer_index is 1-based. Throws ValidationError when out of range.
std::vector<FeatureMap> dump_features(const NetworkWeights& w, const Image& img, int layer_index);

// Bit-exact weight container:
//   magic "SCNW", u32le version=1, u8 residual flag, u32le layer count,
//   per layer: u32le out_ch,in_ch,kh,kw, u8 activation (0=linear,1=relu),
//   f32le weights then biases in declared order.
void save_weights(const NetworkWeights& w, const std::string& path);
NetworkWeights load_weights(const std::string& path);

class TinyCnnRestorer final : public Restorer {
public:
    explicit TinyCnnRestorer(NetworkWeights w, std::string label = "tinynet");

    Image restore(const Image& img) const override { return forward(weights_, img); }
    std::string name() const override { return label_; }
    const NetworkWeights& weights() const { return weights_; }

private:
    NetworkWeights weights_;
    std::string label_;
};

}  // namespace scn
