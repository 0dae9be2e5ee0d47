#pragma once

#include <cstdint>
#include <vector>

#include "scn/image.hpp"
#include "scn/tinynet.hpp"

namespace scn {

struct LayerSpec {
    int out_ch = 1;
    int kh = 3;
    int kw = 3;
    Activation activation = Activation::linear;
};

struct Architecture {
    std::vector<LayerSpec> layers;
    bool residual_mode = true;
};

// 1->8 (3x3, relu) -> 8->8 (3x3, relu) -> 8->1 (3x3, linear), residual.
Architecture default_architecture();

// Uniform(-s, s) with s = sqrt(6 / (in_ch*kh*kw + out_ch*kh*kw)) per layer,
// biases zero, drawn deterministically from the seed.
NetworkWeights init_weights(std::uint64_t seed, const Architecture& arch);

struct TrainConfig {
    int patch_size = 17;         // odd, >= max kernel dim
    int patches_per_epoch = 256;
    int epochs = 20;
    double learning_rate = 0.01;
    double sigma = 25.0;         // noise std on the 0-255 scale
    std::uint64_t seed = 1;
    bool augment_fr = false;     // random flip/rotation per training patch
    Architecture arch = default_architecture();
};

struct TrainReport {
    NetworkWeights weights;
    std::vector<double> epoch_mse;  // mean per-patch training loss per epoch
};

// Plain sequential SGD on noisy/clean patch pairs. Pure function of
// (config, clean_images): the same seed yields bit-identical weights.
TrainReport train(const TrainConfig& config, const std::vector<Image>& clean_images);

// Per-layer parameter gradients, in the layer's weight/bias index order.
struct Gradients {
    struct LayerGrads {
        std::vector<double> weights;
        std::vector<double> bias;
    };
    std::vector<LayerGrads> layers;
};

// MSE between forward(noisy) and clean. Double precision end to end; the
// finite-difference oracle in the tests differentiates exactly this.
double training_loss(const NetworkWeights& w, const Image& noisy, const Image& clean);

// Backpropagation. Returns the loss and fills grads (resized as needed).
double loss_and_gradients(const NetworkWeights& w, const Image& noisy, const Image& clean,
                          Gradients& grads);

}  // namespace scn
