#include "scn/manifest.hpp"

#include <fstream>

#include "scn/errors.hpp"

namespace scn {

void Manifest::set(const std::string& key, const std::string& value) {
    if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos)
        throw ValidationError("manifest key may not contain '=' or newline");
    if (value.find('\n') != std::string::npos)
        throw ValidationError("manifest value may not contain newline");
    for (auto& entry : entries_) {
        if (entry.first == key) {
            entry.second = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void Manifest::set_u64(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
}

bool Manifest::has(const std::string& key) const {
    for (const auto& entry : entries_)
        if (entry.first == key) return true;
    return false;
}

const std::string& Manifest::get(const std::string& key) const {
    for (const auto& entry : entries_)
        if (entry.first == key) return entry.second;
    throw ValidationError("manifest key not found: " + key);
}

void Manifest::set_argv(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i)
        set("argv." + std::to_string(i), args[i]);
}

std::vector<std::string> Manifest::argv() const {
    std::vector<std::string> args;
    for (std::size_t i = 0;; ++i) {
        const std::string key = "argv." + std::to_string(i);
        if (!has(key)) break;
        args.push_back(get(key));
    }
    return args;
}

std::vector<std::pair<std::string, std::string>> Manifest::with_prefix(
    const std::string& prefix) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& entry : entries_)
        if (entry.first.rfind(prefix, 0) == 0) out.push_back(entry);
    return out;
}

void Manifest::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    for (const auto& [key, value] : entries_) out << key << '=' << value << '\n';
    if (!out) throw IoError("write failed: " + path);
}

Manifest Manifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("malformed manifest line: " + line);
        m.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= p[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

}  // namespace scn
