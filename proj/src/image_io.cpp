#include "scn/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

namespace scn {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comment lines.
bool next_header_token(std::istream& in, std::string& token) {
    token.clear();
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    if (ch == EOF) return false;
    while (ch != EOF && !std::isspace(ch) && ch != '#') {
        token.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    if (ch == '#') in.unget();
    return true;
}

bool parse_uint(const std::string& token, long& out) {
    if (token.empty()) return false;
    long value = 0;
    for (char c : token) {
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
        if (value > 1'000'000'000L) return false;
    }
    out = value;
    return true;
}

void put_u32le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t get_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace

Image load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);

    std::string magic;
    if (!next_header_token(in, magic)) throw IoError("malformed header: " + path);
    if (magic != "P5") {
        if (magic.size() == 2 && magic[0] == 'P')
            throw IoError("unsupported format \"" + magic + "\" (binary P5 required): " + path);
        throw IoError("malformed header: " + path);
    }

    std::string tok;
    long w = 0, h = 0, maxval = 0;
    if (!next_header_token(in, tok) || !parse_uint(tok, w)) throw IoError("malformed header: " + path);
    if (!next_header_token(in, tok) || !parse_uint(tok, h)) throw IoError("malformed header: " + path);
    if (!next_header_token(in, tok) || !parse_uint(tok, maxval)) throw IoError("malformed header: " + path);
    if (w == 0 || h == 0) throw IoError("zero dimension: " + path);
    if (maxval != 255) throw IoError("unsupported maxval " + std::to_string(maxval) + " (must be 255): " + path);

    // Exactly one whitespace byte separates the header from the payload; the
    // token reader has already consumed it.
    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    std::vector<unsigned char> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        throw IoError("truncated pixel data: " + path);

    Image img(static_cast<int>(h), static_cast<int>(w));
    for (std::size_t i = 0; i < count; ++i)
        img.data[i] = static_cast<double>(bytes[i]) / 255.0;
    return img;
}

std::uint8_t quantize_byte(double v) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    // llround rounds ties away from zero.
    const long long q = std::llround(clamped * 255.0);
    return static_cast<std::uint8_t>(std::clamp<long long>(q, 0, 255));
}

Image quantize_u8_levels(const Image& image) {
    Image out(image.height, image.width);
    for (std::size_t i = 0; i < image.data.size(); ++i)
        out.data[i] = static_cast<double>(quantize_byte(image.data[i])) / 255.0;
    return out;
}

void save_pgm(const Image& image, const std::string& path) {
    std::string bytes;
    bytes.reserve(image.pixel_count() + 32);
    bytes += "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    for (double v : image.data)
        bytes.push_back(static_cast<char>(quantize_byte(v)));
    write_file_bytes(path, bytes);
}

Image load_raw_f32(const std::string& path) {
    const std::string bytes = read_file_bytes(path);
    if (bytes.size() < 4 || bytes.compare(0, 4, "SCNR") != 0)
        throw IoError("bad magic (expected SCNR): " + path);
    if (bytes.size() < 12) throw IoError("truncated header: " + path);

    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t h = get_u32le(p + 4);
    const std::uint32_t w = get_u32le(p + 8);
    if (h == 0 || w == 0) throw IoError("zero dimension: " + path);
    if (h > 1u << 20 || w > 1u << 20) throw IoError("implausible dimensions: " + path);

    const std::size_t count = static_cast<std::size_t>(h) * w;
    const std::size_t expected = 12 + count * 4;
    if (bytes.size() < expected) throw IoError("truncated payload: " + path);
    if (bytes.size() > expected) throw IoError("trailing bytes after payload: " + path);

    Image img(static_cast<int>(h), static_cast<int>(w));
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t u = get_u32le(p + 12 + i * 4);
        img.data[i] = static_cast<double>(std::bit_cast<float>(u));
    }
    return img;
}

void save_raw_f32(const Image& image, const std::string& path) {
    std::string bytes;
    bytes.reserve(12 + image.pixel_count() * 4);
    bytes += "SCNR";
    put_u32le(bytes, static_cast<std::uint32_t>(image.height));
    put_u32le(bytes, static_cast<std::uint32_t>(image.width));
    for (double v : image.data)
        put_u32le(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    write_file_bytes(path, bytes);
}

Image load_image_any(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    in.close();
    if (magic[0] == 'P' && magic[1] == '5') return load_pgm(path);
    if (magic[0] == 'S' && magic[1] == 'C' && magic[2] == 'N' && magic[3] == 'R')
        return load_raw_f32(path);
    throw IoError("unrecognized image format: " + path);
}

}  // namespace scn
