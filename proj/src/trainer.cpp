#include "scn/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "scn/degrade.hpp"
#include "scn/rng.hpp"
#include "scn/transforms.hpp"

namespace scn {

Architecture default_architecture() {
    Architecture arch;
    arch.layers = {{8, 3, 3, Activation::relu},
                   {8, 3, 3, Activation::relu},
                   {1, 3, 3, Activation::linear}};
    arch.residual_mode = true;
    return arch;
}

NetworkWeights init_weights(std::uint64_t seed, const Architecture& arch) {
    if (arch.layers.empty()) throw ValidationError("architecture has no layers");
    Xoshiro256pp rng(seed);
    NetworkWeights w;
    w.residual_mode = arch.residual_mode;
    int in_ch = 1;
    for (const LayerSpec& spec : arch.layers) {
        Layer layer;
        layer.out_ch = spec.out_ch;
        layer.in_ch = in_ch;
        layer.kh = spec.kh;
        layer.kw = spec.kw;
        layer.activation = spec.activation;
        const double fan = static_cast<double>(in_ch) * spec.kh * spec.kw +
                           static_cast<double>(spec.out_ch) * spec.kh * spec.kw;
        const double s = std::sqrt(6.0 / fan);
        layer.weights.resize(layer.weight_count());
        for (float& f : layer.weights)
            f = static_cast<float>(-s + 2.0 * s * rng.next_double());
        layer.bias.assign(static_cast<std::size_t>(layer.out_ch), 0.0f);
        w.layers.push_back(std::move(layer));
        in_ch = spec.out_ch;
    }
    validate(w);
    return w;
}

namespace {

double mse_loss(const std::vector<double>& prediction, const Image& clean) {
    double acc = 0.0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const double d = prediction[i] - clean.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(prediction.size());
}

std::vector<double> predict(const NetworkWeights& w, const Image& noisy,
                            const std::vector<std::vector<double>>& buffers) {
    const std::vector<double>& net_out = buffers.back();
    std::vector<double> prediction(net_out.size());
    if (w.residual_mode) {
        for (std::size_t i = 0; i < net_out.size(); ++i)
            prediction[i] = noisy.data[i] - net_out[i];
    } else {
        prediction = net_out;
    }
    return prediction;
}

}  // namespace

double training_loss(const NetworkWeights& w, const Image& noisy, const Image& clean) {
    if (!noisy.same_shape(clean)) throw ValidationError("noisy/clean shape mismatch");
    const auto buffers = forward_buffers(w, noisy);
    return mse_loss(predict(w, noisy, buffers), clean);
}

double loss_and_gradients(const NetworkWeights& w, const Image& noisy, const Image& clean,
                          Gradients& grads) {
    if (!noisy.same_shape(clean)) throw ValidationError("noisy/clean shape mismatch");
    const int h = noisy.height;
    const int width = noisy.width;
    const std::size_t plane = noisy.pixel_count();
    const std::size_t layer_count = w.layers.size();

    grads.layers.resize(layer_count);
    for (std::size_t l = 0; l < layer_count; ++l) {
        grads.layers[l].weights.assign(w.layers[l].weight_count(), 0.0);
        grads.layers[l].bias.assign(static_cast<std::size_t>(w.layers[l].out_ch), 0.0);
    }

    const auto buffers = forward_buffers(w, noisy);
    const std::vector<double> prediction = predict(w, noisy, buffers);
    const double loss = mse_loss(prediction, clean);

    // d loss / d net_output. Residual output flips the sign.
    const double scale = 2.0 / static_cast<double>(plane);
    std::vector<double> delta(plane);
    for (std::size_t i = 0; i < plane; ++i) {
        const double d = scale * (prediction[i] - clean.data[i]);
        delta[i] = w.residual_mode ? -d : d;
    }

    for (std::size_t l = layer_count; l-- > 0;) {
        const Layer& layer = w.layers[l];
        const std::vector<double>& input = buffers[l];
        const std::vector<double>& output = buffers[l + 1];
        const int cr = layer.kh / 2;
        const int cc = layer.kw / 2;

        // Relu: post-activation zero means the pre-activation was clipped (or
        // exactly zero), so no gradient flows.
        if (layer.activation == Activation::relu) {
            for (std::size_t i = 0; i < delta.size(); ++i)
                if (output[i] <= 0.0) delta[i] = 0.0;
        }

        Gradients::LayerGrads& lg = grads.layers[l];
        std::vector<double> delta_in(l > 0 ? input.size() : 0, 0.0);

        for (int oc = 0; oc < layer.out_ch; ++oc) {
            const double* dout = delta.data() + static_cast<std::size_t>(oc) * plane;
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < width; ++c) {
                    const double d = dout[static_cast<std::size_t>(r) * width + c];
                    if (d == 0.0) continue;
                    lg.bias[static_cast<std::size_t>(oc)] += d;
                    for (int ic = 0; ic < layer.in_ch; ++ic) {
                        const double* in_plane =
                            input.data() + static_cast<std::size_t>(ic) * plane;
                        double* din_plane =
                            l > 0 ? delta_in.data() + static_cast<std::size_t>(ic) * plane
                                  : nullptr;
                        for (int i = 0; i < layer.kh; ++i) {
                            const int sr = mirror_index(r + i - cr, h);
                            for (int j = 0; j < layer.kw; ++j) {
                                const int sc = mirror_index(c + j - cc, width);
                                const std::size_t src = static_cast<std::size_t>(sr) * width + sc;
                                lg.weights[layer.weight_index(oc, ic, i, j)] +=
                                    d * in_plane[src];
                                if (din_plane)
                                    din_plane[src] +=
                                        d * static_cast<double>(
                                                layer.weights[layer.weight_index(oc, ic, i, j)]);
                            }
                        }
                    }
                }
            }
        }
        if (l > 0) delta = std::move(delta_in);
    }
    return loss;
}

namespace {

Image crop_patch(const Image& img, int r0, int c0, int size) {
    Image patch(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            patch.at(r, c) = img.at(r0 + r, c0 + c);
    return patch;
}

void sgd_step(NetworkWeights& w, const Gradients& grads, double lr) {
    for (std::size_t l = 0; l < w.layers.size(); ++l) {
        Layer& layer = w.layers[l];
        const Gradients::LayerGrads& lg = grads.layers[l];
        for (std::size_t i = 0; i < layer.weights.size(); ++i)
            layer.weights[i] = static_cast<float>(
                static_cast<double>(layer.weights[i]) - lr * lg.weights[i]);
        for (std::size_t i = 0; i < layer.bias.size(); ++i)
            layer.bias[i] = static_cast<float>(
                static_cast<double>(layer.bias[i]) - lr * lg.bias[i]);
    }
}

}  // namespace

TrainReport train(const TrainConfig& config, const std::vector<Image>& clean_images) {
    if (clean_images.empty()) throw ValidationError("no training images");
    if (config.patch_size < 1 || config.patch_size % 2 == 0)
        throw ValidationError("patch_size must be odd and positive");
    if (config.learning_rate < 0.0) throw ValidationError("learning_rate must be >= 0");
    if (config.sigma < 0.0) throw ValidationError("sigma must be >= 0");
    if (config.patches_per_epoch < 1) throw ValidationError("patches_per_epoch must be positive");
    if (config.epochs < 0) throw ValidationError("epochs must be >= 0");

    int max_kernel = 1;
    for (const LayerSpec& spec : config.arch.layers)
        max_kernel = std::max({max_kernel, spec.kh, spec.kw});
    if (config.patch_size < max_kernel)
        throw ValidationError("patch_size must be >= max kernel dim");
    for (const Image& img : clean_images)
        if (img.height < config.patch_size || img.width < config.patch_size)
            throw ValidationError("training image smaller than patch_size");

    TrainReport report;
    report.weights = init_weights(config.seed, config.arch);

    // Patch sampling consumes the shared stream in a pinned per-patch order:
    // image index, top row, left column, then the flip/rotation index when
    // augmentation is on. Noise uses a per-patch derived seed so the two
    // streams stay independent.
    Xoshiro256pp sampler(mix_seed(config.seed, 0x5ca1ab1eULL));
    Gradients grads;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (int p = 0; p < config.patches_per_epoch; ++p) {
            const int img_idx = sampler.next_below(static_cast<int>(clean_images.size()));
            const Image& source = clean_images[static_cast<std::size_t>(img_idx)];
            const int r0 = sampler.next_below(source.height - config.patch_size + 1);
            const int c0 = sampler.next_below(source.width - config.patch_size + 1);
            Image clean = crop_patch(source, r0, c0, config.patch_size);
            if (config.augment_fr) {
                const int k = 1 + sampler.next_below(8);
                clean = apply_d4(D4Transform(k), clean);
            }
            const std::uint64_t noise_seed =
                mix_seed(config.seed, (static_cast<std::uint64_t>(epoch) << 32) |
                                          static_cast<std::uint64_t>(p));
            const Image noisy = add_awgn(clean, NoiseSpec{config.sigma, noise_seed});

            epoch_loss += loss_and_gradients(report.weights, noisy, clean, grads);
            sgd_step(report.weights, grads, config.learning_rate);
        }
        report.epoch_mse.push_back(epoch_loss / config.patches_per_epoch);
    }
    return report;
}

}  // namespace scn
