#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace scn {

// Flat key=value record written next to every CLI output. It captures the
// full argument vector, the seeds and the FNV-1a hashes of all inputs and
// outputs, which is enough to re-run the command and check bit-identity.
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set_u64(const std::string& key, std::uint64_t value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;  // throws ValidationError if absent

    // Keys "argv.0", "argv.1", ... in index order.
    void set_argv(const std::vector<std::string>& args);
    std::vector<std::string> argv() const;

    // All keys with the given prefix, in insertion order.
    std::vector<std::pair<std::string, std::string>> with_prefix(const std::string& prefix) const;

    void save(const std::string& path) const;
    static Manifest load(const std::string& path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t value);

}  // namespace scn
