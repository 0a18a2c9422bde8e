#include "firmtrack/core/hash.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace firmtrack {

std::string Fnv1a::hex() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
    return buf;
}

std::string hash_file_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for hashing: " + path.string());
    Fnv1a h;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        h.update(std::string_view(buf, static_cast<size_t>(in.gcount())));
    }
    return h.hex();
}

std::string hash_string_hex(std::string_view s) {
    Fnv1a h;
    h.update(s);
    return h.hex();
}

}  // namespace firmtrack
