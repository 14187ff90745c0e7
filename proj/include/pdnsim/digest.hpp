#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

namespace pdnsim {

// ============================================================================
// Digest256: value type for 32-byte digests (SHA-256 output, HMAC tags)
// ============================================================================

struct Digest256 {
    std::array<std::uint8_t, 32> bytes{};

    friend bool operator==(const Digest256& a, const Digest256& b) { return a.bytes == b.bytes; }
    friend bool operator!=(const Digest256& a, const Digest256& b) { return !(a == b); }
    friend bool operator<(const Digest256& a, const Digest256& b) { return a.bytes < b.bytes; }

    bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }
};

inline std::string to_hex(const Digest256& d) {
    static const char* k = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : d.bytes) {
        out.push_back(k[b >> 4]);
        out.push_back(k[b & 0x0f]);
    }
    return out;
}

inline std::optional<Digest256> digest_from_hex(std::string_view hex) {
    if (hex.size() != 64) return std::nullopt;
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Digest256 d;
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = nib(hex[2 * i]), lo = nib(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        d.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return d;
}

// ============================================================================
// SHA-256 (one-shot and streaming) over OpenSSL EVP
// ============================================================================

class Sha256 {
  public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256 init failed");
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(const void* data, std::size_t len) {
        if (EVP_DigestUpdate(ctx_, data, len) != 1)
            throw std::runtime_error("sha256 update failed");
        return *this;
    }
    Sha256& update(std::string_view s) { return update(s.data(), s.size()); }
    Sha256& update(const std::vector<std::uint8_t>& v) { return update(v.data(), v.size()); }

    // Appends an 8-byte little-endian length, then the payload. Framing each
    // variable-length field this way keeps distinct field tuples from ever
    // hashing to the same byte stream.
    Sha256& update_framed(std::string_view s) {
        update_u64(s.size());
        return update(s);
    }
    Sha256& update_framed(const std::vector<std::uint8_t>& v) {
        update_u64(v.size());
        return update(v);
    }
    Sha256& update_u64(std::uint64_t v) {
        std::uint8_t le[8];
        for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(v >> (8 * i));
        return update(le, 8);
    }

    Digest256 finish() {
        Digest256 d;
        unsigned int n = 0;
        if (EVP_DigestFinal_ex(ctx_, d.bytes.data(), &n) != 1 || n != 32)
            throw std::runtime_error("sha256 final failed");
        return d;
    }

  private:
    EVP_MD_CTX* ctx_;
};

inline Digest256 sha256(const void* data, std::size_t len) {
    Sha256 h;
    h.update(data, len);
    return h.finish();
}
inline Digest256 sha256(std::string_view s) { return sha256(s.data(), s.size()); }
inline Digest256 sha256(const std::vector<std::uint8_t>& v) { return sha256(v.data(), v.size()); }

// ============================================================================
// HMAC-SHA256 over the OpenSSL 3 EVP_MAC interface
// ============================================================================

inline Digest256 hmac_sha256(std::string_view key, std::string_view msg) {
    static EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    if (!mac) throw std::runtime_error("hmac fetch failed");
    EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
    if (!ctx) throw std::runtime_error("hmac ctx failed");
    char digest_name[] = "SHA256";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string("digest", digest_name, 0),
        OSSL_PARAM_construct_end(),
    };
    Digest256 out;
    std::size_t n = 0;
    bool ok = EVP_MAC_init(ctx, reinterpret_cast<const unsigned char*>(key.data()), key.size(),
                           params) == 1 &&
              EVP_MAC_update(ctx, reinterpret_cast<const unsigned char*>(msg.data()),
                             msg.size()) == 1 &&
              EVP_MAC_final(ctx, out.bytes.data(), &n, out.bytes.size()) == 1 && n == 32;
    EVP_MAC_CTX_free(ctx);
    if (!ok) throw std::runtime_error("hmac compute failed");
    return out;
}

inline Digest256 hmac_sha256(std::string_view key, const std::vector<std::uint8_t>& msg) {
    return hmac_sha256(key,
                       std::string_view(reinterpret_cast<const char*>(msg.data()), msg.size()));
}

// Constant-time tag comparison.
inline bool mac_equal(const Digest256& a, const Digest256& b) {
    unsigned acc = 0;
    for (std::size_t i = 0; i < a.bytes.size(); ++i) acc |= a.bytes[i] ^ b.bytes[i];
    return acc == 0;
}

// ============================================================================
// base64url (RFC 4648 section 5, unpadded, canonical)
// ============================================================================

namespace b64 {

inline const char* alphabet() {
    return "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
}

inline std::string encode_url(const std::uint8_t* data, std::size_t len) {
    const char* tab = alphabet();
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= len; i += 3) {
        std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back(tab[v & 63]);
    }
    if (i + 1 == len) {
        std::uint32_t v = data[i] << 16;
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
    } else if (i + 2 == len) {
        std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
    }
    return out;
}

inline std::string encode_url(std::string_view s) {
    return encode_url(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}
inline std::string encode_url(const std::vector<std::uint8_t>& v) {
    return encode_url(v.data(), v.size());
}
inline std::string encode_url(const Digest256& d) { return encode_url(d.bytes.data(), 32); }

inline int decode_sym(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '-') return 62;
    if (c == '_') return 63;
    return -1;
}

// Strict decode: rejects padding characters, invalid symbols, impossible
// lengths, and non-canonical encodings (nonzero bits beyond the payload).
inline std::optional<std::vector<std::uint8_t>> decode_url(std::string_view s) {
    if (s.size() % 4 == 1) return std::nullopt;
    std::vector<std::uint8_t> out;
    out.reserve(s.size() / 4 * 3 + 2);
    std::size_t i = 0;
    for (; i + 4 <= s.size(); i += 4) {
        int a = decode_sym(s[i]), b = decode_sym(s[i + 1]), c = decode_sym(s[i + 2]),
            d = decode_sym(s[i + 3]);
        if (a < 0 || b < 0 || c < 0 || d < 0) return std::nullopt;
        std::uint32_t v = (a << 18) | (b << 12) | (c << 6) | d;
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    }
    std::size_t rem = s.size() - i;
    if (rem == 2) {
        int a = decode_sym(s[i]), b = decode_sym(s[i + 1]);
        if (a < 0 || b < 0) return std::nullopt;
        if (b & 0x0f) return std::nullopt;  // low 4 bits must be zero
        out.push_back(static_cast<std::uint8_t>((a << 2) | (b >> 4)));
    } else if (rem == 3) {
        int a = decode_sym(s[i]), b = decode_sym(s[i + 1]), c = decode_sym(s[i + 2]);
        if (a < 0 || b < 0 || c < 0) return std::nullopt;
        if (c & 0x03) return std::nullopt;  // low 2 bits must be zero
        std::uint32_t v = (a << 10) | (b << 4) | (c >> 2);
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

}  // namespace b64

// ============================================================================
// FNV-1a 64: cheap non-cryptographic fold for seeds and event traces
// ============================================================================

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline constexpr std::uint64_t fnv64_step(std::uint64_t h, std::uint8_t byte) {
    return (h ^ byte) * kFnvPrime;
}

inline constexpr std::uint64_t fnv64(std::string_view s, std::uint64_t h = kFnvOffset) {
    for (char c : s) h = fnv64_step(h, static_cast<std::uint8_t>(c));
    return h;
}

inline constexpr std::uint64_t fnv64_u64(std::uint64_t v, std::uint64_t h = kFnvOffset) {
    for (int i = 0; i < 8; ++i) h = fnv64_step(h, static_cast<std::uint8_t>(v >> (8 * i)));
    return h;
}

}  // namespace pdnsim
