#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdnsim/digest.hpp"

namespace pdnsim {

// ============================================================================
// Disposable access tokens
//
// Compact JWTs (HS256) that bind a delivery session to a customer, a peer,
// and a set of video urls, with a short ttl and a bounded number of uses.
// A stolen token therefore stops working on its own instead of becoming a
// permanent service credential.
// ============================================================================

struct AccessToken {
    std::string customer_id;
    std::string pdn_peer_id;
    std::vector<std::string> video_ids;
    std::uint64_t timestamp = 0;    // issue time, seconds
    std::uint64_t ttl = 0;          // lifetime, seconds
    std::uint32_t usage_limit = 0;  // accepted verifications allowed

    friend bool operator==(const AccessToken& a, const AccessToken& b) {
        return a.customer_id == b.customer_id && a.pdn_peer_id == b.pdn_peer_id &&
               a.video_ids == b.video_ids && a.timestamp == b.timestamp && a.ttl == b.ttl &&
               a.usage_limit == b.usage_limit;
    }
};

// Payload serialization with a fixed field order.
inline std::string token_payload_json(const AccessToken& t) {
    nlohmann::ordered_json j;
    j["customer_id"] = t.customer_id;
    j["pdn_peer_id"] = t.pdn_peer_id;
    j["video_ids"] = t.video_ids;
    j["timestamp"] = t.timestamp;
    j["ttl"] = t.ttl;
    j["usage_limit"] = t.usage_limit;
    return j.dump();
}

inline const char* token_header_json() { return "{\"alg\":\"HS256\",\"typ\":\"JWT\"}"; }

// A decoded token keeps the raw header/payload strings so that re-encoding
// reproduces the original bytes (unknown fields and formatting included) and
// signature checks run over exactly what was signed.
struct SignedToken {
    std::string header_raw;
    std::string payload_raw;
    AccessToken claims;
    Digest256 signature;

    std::string signing_input() const {
        return b64::encode_url(header_raw) + "." + b64::encode_url(payload_raw);
    }
};

inline std::string encode_token(const SignedToken& t) {
    return t.signing_input() + "." + b64::encode_url(t.signature);
}

inline SignedToken issue_token(std::string_view secret, const AccessToken& claims) {
    SignedToken t;
    t.header_raw = token_header_json();
    t.payload_raw = token_payload_json(claims);
    t.claims = claims;
    t.signature = hmac_sha256(secret, t.signing_input());
    return t;
}

// Strict parse of the compact form. Returns nothing on any structural
// problem: wrong part count, non-canonical base64url, malformed JSON, an
// unexpected header, or missing/ill-typed claims. Unknown payload fields are
// preserved, not rejected.
inline std::optional<SignedToken> decode_token(std::string_view compact) {
    std::size_t dot1 = compact.find('.');
    if (dot1 == std::string_view::npos) return std::nullopt;
    std::size_t dot2 = compact.find('.', dot1 + 1);
    if (dot2 == std::string_view::npos) return std::nullopt;
    if (compact.find('.', dot2 + 1) != std::string_view::npos) return std::nullopt;

    auto hdr = b64::decode_url(compact.substr(0, dot1));
    auto pay = b64::decode_url(compact.substr(dot1 + 1, dot2 - dot1 - 1));
    auto sig = b64::decode_url(compact.substr(dot2 + 1));
    if (!hdr || !pay || !sig || sig->size() != 32) return std::nullopt;

    SignedToken t;
    t.header_raw.assign(hdr->begin(), hdr->end());
    t.payload_raw.assign(pay->begin(), pay->end());
    std::copy(sig->begin(), sig->end(), t.signature.bytes.begin());

    auto header = nlohmann::json::parse(t.header_raw, nullptr, false);
    if (header.is_discarded() || !header.is_object()) return std::nullopt;
    if (header.value("alg", "") != "HS256" || header.value("typ", "") != "JWT")
        return std::nullopt;

    auto payload = nlohmann::json::parse(t.payload_raw, nullptr, false);
    if (payload.is_discarded() || !payload.is_object()) return std::nullopt;
    auto has = [&](const char* k) { return payload.contains(k); };
    if (!has("customer_id") || !payload["customer_id"].is_string()) return std::nullopt;
    if (!has("pdn_peer_id") || !payload["pdn_peer_id"].is_string()) return std::nullopt;
    if (!has("video_ids") || !payload["video_ids"].is_array()) return std::nullopt;
    if (!has("timestamp") || !payload["timestamp"].is_number_unsigned()) return std::nullopt;
    if (!has("ttl") || !payload["ttl"].is_number_unsigned()) return std::nullopt;
    if (!has("usage_limit") || !payload["usage_limit"].is_number_unsigned()) return std::nullopt;

    t.claims.customer_id = payload["customer_id"].get<std::string>();
    t.claims.pdn_peer_id = payload["pdn_peer_id"].get<std::string>();
    for (const auto& v : payload["video_ids"]) {
        if (!v.is_string()) return std::nullopt;
        t.claims.video_ids.push_back(v.get<std::string>());
    }
    t.claims.timestamp = payload["timestamp"].get<std::uint64_t>();
    t.claims.ttl = payload["ttl"].get<std::uint64_t>();
    t.claims.usage_limit = payload["usage_limit"].get<std::uint32_t>();
    return t;
}

// Identity of a concrete token instance, for replay accounting.
inline Digest256 token_fingerprint(const SignedToken& t) { return sha256(encode_token(t)); }

class UsageLedger {
  public:
    std::uint32_t uses(const Digest256& fingerprint) const {
        auto it = counts_.find(fingerprint);
        return it == counts_.end() ? 0 : it->second;
    }
    void record_use(const Digest256& fingerprint) { ++counts_[fingerprint]; }
    std::size_t distinct_tokens() const { return counts_.size(); }

  private:
    std::map<Digest256, std::uint32_t> counts_;
};

enum class TokenReject {
    none,
    unknown_customer,
    bad_signature,
    expired,
    video_mismatch,
    usage_exceeded,
};

inline const char* to_string(TokenReject r) {
    switch (r) {
        case TokenReject::none: return "accepted";
        case TokenReject::unknown_customer: return "unknown_customer";
        case TokenReject::bad_signature: return "bad_signature";
        case TokenReject::expired: return "expired";
        case TokenReject::video_mismatch: return "video_mismatch";
        case TokenReject::usage_exceeded: return "usage_exceeded";
    }
    return "?";
}

struct TokenVerdict {
    bool accepted = false;
    TokenReject reason = TokenReject::none;
};

/**
 * Full acceptance check for a decoded token, in order: issuer known, signature
 * valid, not expired (valid strictly while now < timestamp + ttl), requested
 * video bound, usage budget left. Acceptance consumes one use.
 */
inline TokenVerdict verify_token(const SignedToken& t, std::uint64_t now_s,
                                 std::string_view requested_video_id,
                                 const std::map<std::string, std::string>& secrets_by_customer,
                                 UsageLedger& ledger) {
    auto secret = secrets_by_customer.find(t.claims.customer_id);
    if (secret == secrets_by_customer.end()) return {false, TokenReject::unknown_customer};
    if (!mac_equal(hmac_sha256(secret->second, t.signing_input()), t.signature))
        return {false, TokenReject::bad_signature};
    if (now_s >= t.claims.timestamp + t.claims.ttl) return {false, TokenReject::expired};
    bool bound = false;
    for (const auto& v : t.claims.video_ids) bound = bound || (v == requested_video_id);
    if (!bound) return {false, TokenReject::video_mismatch};
    Digest256 fp = token_fingerprint(t);
    if (ledger.uses(fp) >= t.claims.usage_limit) return {false, TokenReject::usage_exceeded};
    ledger.record_use(fp);
    return {true, TokenReject::none};
}

}  // namespace pdnsim
