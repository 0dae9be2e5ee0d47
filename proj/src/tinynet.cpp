#include "scn/tinynet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

namespace scn {

void validate(const NetworkWeights& w) {
    if (w.layers.empty()) throw ValidationError("network has no layers");
    if (w.layers.front().in_ch != 1)
        throw ValidationError("first layer must take 1 input channel");
    if (w.layers.back().out_ch != 1)
        throw ValidationError("last layer must produce 1 output channel");
    if (w.layers.back().activation != Activation::linear)
        throw ValidationError("final layer activation must be linear");
    int prev_out = 1;
    for (std::size_t l = 0; l < w.layers.size(); ++l) {
        const Layer& layer = w.layers[l];
        const std::string where = " (layer " + std::to_string(l + 1) + ")";
        if (layer.out_ch < 1 || layer.in_ch < 1)
            throw ValidationError("channel counts must be positive" + where);
        if (layer.in_ch != prev_out)
            throw ValidationError("channel mismatch: in_ch " + std::to_string(layer.in_ch) +
                                  " does not chain from previous out_ch " +
                                  std::to_string(prev_out) + where);
        if (layer.kh < 1 || layer.kw < 1 || layer.kh % 2 == 0 || layer.kw % 2 == 0)
            throw ValidationError("kernel dims must be odd and positive" + where);
        if (layer.weights.size() != layer.weight_count())
            throw ValidationError("weight buffer length mismatch" + where);
        if (layer.bias.size() != static_cast<std::size_t>(layer.out_ch))
            throw ValidationError("bias buffer length mismatch" + where);
        if (layer.activation != Activation::linear && layer.activation != Activation::relu)
            throw ValidationError("unknown activation" + where);
        prev_out = layer.out_ch;
    }
}

std::vector<std::vector<double>> forward_buffers(const NetworkWeights& w, const Image& img) {
    validate(w);
    const int h = img.height;
    const int width = img.width;
    const std::size_t plane = static_cast<std::size_t>(h) * width;

    std::vector<std::vector<double>> buffers;
    buffers.reserve(w.layers.size() + 1);
    buffers.push_back(img.data);

    for (const Layer& layer : w.layers) {
        const std::vector<double>& in = buffers.back();
        std::vector<double> out(static_cast<std::size_t>(layer.out_ch) * plane);
        const int cr = layer.kh / 2;
        const int cc = layer.kw / 2;
        for (int oc = 0; oc < layer.out_ch; ++oc) {
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < width; ++c) {
                    double acc = static_cast<double>(layer.bias[oc]);
                    for (int ic = 0; ic < layer.in_ch; ++ic) {
                        const double* in_plane = in.data() + static_cast<std::size_t>(ic) * plane;
                        for (int i = 0; i < layer.kh; ++i) {
                            const int sr = mirror_index(r + i - cr, h);
                            const double* in_row = in_plane + static_cast<std::size_t>(sr) * width;
                            for (int j = 0; j < layer.kw; ++j) {
                                const int sc = mirror_index(c + j - cc, width);
                                acc += static_cast<double>(
                                           layer.weights[layer.weight_index(oc, ic, i, j)]) *
                                       in_row[sc];
                            }
                        }
                    }
                    if (layer.activation == Activation::relu && acc < 0.0) acc = 0.0;
                    out[static_cast<std::size_t>(oc) * plane +
                        static_cast<std::size_t>(r) * width + c] = acc;
                }
            }
        }
        buffers.push_back(std::move(out));
    }
    return buffers;
}

Image forward(const NetworkWeights& w, const Image& img) {
    const auto buffers = forward_buffers(w, img);
    const std::vector<double>& net_out = buffers.back();
    Image out(img.height, img.width);
    if (w.residual_mode) {
        for (std::size_t i = 0; i < out.data.size(); ++i)
            out.data[i] = img.data[i] - net_out[i];
    } else {
        out.data = net_out;
    }
    return out;
}

std::vector<FeatureMap> dump_features(const NetworkWeights& w, const Image& img, int layer_index) {
    validate(w);
    if (layer_index < 1 || static_cast<std::size_t>(layer_index) > w.layers.size())
        throw ValidationError("layer index " + std::to_string(layer_index) +
                              " out of range (network has " +
                              std::to_string(w.layers.size()) + " layers)");
    const auto buffers = forward_buffers(w, img);
    const std::vector<double>& acts = buffers[static_cast<std::size_t>(layer_index)];
    const int channels = w.layers[static_cast<std::size_t>(layer_index) - 1].out_ch;
    const std::size_t plane = img.pixel_count();

    std::vector<FeatureMap> maps;
    maps.reserve(static_cast<std::size_t>(channels));
    for (int ch = 0; ch < channels; ++ch) {
        const double* p = acts.data() + static_cast<std::size_t>(ch) * plane;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < plane; ++i) {
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
        }
        FeatureMap fm;
        fm.raw_min = lo;
        fm.raw_max = hi;
        fm.map = Image(img.height, img.width);
        const double range = hi - lo;
        for (std::size_t i = 0; i < plane; ++i)
            fm.map.data[i] = range > 0.0 ? (p[i] - lo) / range : 0.0;
        maps.push_back(std::move(fm));
    }
    return maps;
}

namespace {

void put_u32le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_f32le(std::string& out, float f) {
    put_u32le(out, std::bit_cast<std::uint32_t>(f));
}

class ByteReader {
public:
    ByteReader(const std::string& bytes, const std::string& path)
        : bytes_(bytes), path_(path) {}

    std::uint32_t u32() {
        need(4);
        const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
        pos_ += 4;
        return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
               (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }
    float f32() { return std::bit_cast<float>(u32()); }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw IoError("truncated weight file: " + path_);
    }
    const std::string& bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_weights(const NetworkWeights& w, const std::string& path) {
    validate(w);
    std::string bytes;
    bytes += "SCNW";
    put_u32le(bytes, 1);
    bytes.push_back(w.residual_mode ? 1 : 0);
    put_u32le(bytes, static_cast<std::uint32_t>(w.layers.size()));
    for (const Layer& layer : w.layers) {
        put_u32le(bytes, static_cast<std::uint32_t>(layer.out_ch));
        put_u32le(bytes, static_cast<std::uint32_t>(layer.in_ch));
        put_u32le(bytes, static_cast<std::uint32_t>(layer.kh));
        put_u32le(bytes, static_cast<std::uint32_t>(layer.kw));
        bytes.push_back(static_cast<char>(layer.activation));
        for (float f : layer.weights) put_f32le(bytes, f);
        for (float f : layer.bias) put_f32le(bytes, f);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

NetworkWeights load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 4 || bytes.compare(0, 4, "SCNW") != 0)
        throw IoError("bad magic (expected SCNW): " + path);

    ByteReader r(bytes, path);
    (void)r.u32();  // magic, already checked
    const std::uint32_t version = r.u32();
    if (version != 1)
        throw IoError("unsupported weight format version " + std::to_string(version) + ": " + path);

    NetworkWeights w;
    const std::uint8_t residual = r.u8();
    if (residual > 1) throw IoError("invalid residual flag: " + path);
    w.residual_mode = residual == 1;

    const std::uint32_t layer_count = r.u32();
    if (layer_count == 0 || layer_count > 1024) throw IoError("implausible layer count: " + path);
    for (std::uint32_t l = 0; l < layer_count; ++l) {
        Layer layer;
        layer.out_ch = static_cast<int>(r.u32());
        layer.in_ch = static_cast<int>(r.u32());
        layer.kh = static_cast<int>(r.u32());
        layer.kw = static_cast<int>(r.u32());
        if (layer.out_ch < 1 || layer.in_ch < 1 || layer.out_ch > 4096 || layer.in_ch > 4096 ||
            layer.kh < 1 || layer.kw < 1 || layer.kh > 99 || layer.kw > 99)
            throw IoError("implausible layer shape: " + path);
        const std::uint8_t act = r.u8();
        if (act > 1)
            throw IoError("unknown activation code " + std::to_string(act) + ": " + path);
        layer.activation = static_cast<Activation>(act);
        layer.weights.resize(layer.weight_count());
        for (float& f : layer.weights) f = r.f32();
        layer.bias.resize(static_cast<std::size_t>(layer.out_ch));
        for (float& f : layer.bias) f = r.f32();
        w.layers.push_back(std::move(layer));
    }
    if (!r.exhausted()) throw IoError("trailing bytes after weight payload: " + path);
    validate(w);
    return w;
}

TinyCnnRestorer::TinyCnnRestorer(NetworkWeights w, std::string label)
    : weights_(std::move(w)), label_(std::move(label)) {
    validate(weights_);
}

}  // namespace scn
