#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace firmtrack {

/// FNV-1a 64-bit. Used for input/output manifests; collision resistance is
/// not a goal, single-byte sensitivity is.
class Fnv1a {
public:
    void update(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001b3ULL;
        }
    }
    uint64_t digest() const { return state_; }
    std::string hex() const;

private:
    uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hash_file_hex(const std::filesystem::path& path);
std::string hash_string_hex(std::string_view s);

}  // namespace firmtrack
