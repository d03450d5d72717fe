#include "thinslice/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace thinslice {

namespace {

std::array<unsigned char, 32> sha256_raw(std::string_view data) {
    std::array<unsigned char, 32> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("sha256 digest failed");
    }
    return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    static const char* hex = "0123456789abcdef";
    auto raw = sha256_raw(data);
    std::string s;
    s.reserve(64);
    for (unsigned char b : raw) {
        s.push_back(hex[b >> 4]);
        s.push_back(hex[b & 0xf]);
    }
    return s;
}

std::uint64_t digest_u64(std::string_view data) {
    auto raw = sha256_raw(data);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | raw[static_cast<size_t>(i)];
    return v;
}

}  // namespace thinslice
