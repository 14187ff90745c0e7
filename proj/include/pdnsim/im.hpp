#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdnsim/digest.hpp"

namespace pdnsim {

// ============================================================================
// Integrity metadata
//
// An IM commits to the payload of one segment at one manifest position of one
// video, so a forged report cannot be replayed against a different segment or
// stream. The tracker authenticates the IM it settled on by MACing it into a
// signed IM that downloaders fetch and check before accepting peer bytes.
// ============================================================================

struct IntegrityMetadata {
    std::string video_id;
    std::uint32_t segment_index = 0;
    Digest256 digest;

    friend bool operator==(const IntegrityMetadata& a, const IntegrityMetadata& b) {
        return a.video_id == b.video_id && a.segment_index == b.segment_index &&
               a.digest == b.digest;
    }
    friend bool operator!=(const IntegrityMetadata& a, const IntegrityMetadata& b) {
        return !(a == b);
    }
};

inline IntegrityMetadata compute_im(const std::vector<std::uint8_t>& segment_payload,
                                    std::string video_id, std::uint32_t segment_index) {
    Sha256 h;
    h.update_framed(segment_payload);
    h.update_framed(std::string_view(video_id));
    h.update_u64(segment_index);
    IntegrityMetadata im;
    im.video_id = std::move(video_id);
    im.segment_index = segment_index;
    im.digest = h.finish();
    return im;
}

struct SignedIM {
    IntegrityMetadata im;
    Digest256 mac;
};

namespace detail {
inline std::string sim_mac_input(const IntegrityMetadata& im) {
    std::string msg;
    std::uint64_t vlen = im.video_id.size();
    for (int i = 0; i < 8; ++i) msg.push_back(static_cast<char>(vlen >> (8 * i)));
    msg += im.video_id;
    for (int i = 0; i < 8; ++i)
        msg.push_back(static_cast<char>(static_cast<std::uint64_t>(im.segment_index) >> (8 * i)));
    msg.append(reinterpret_cast<const char*>(im.digest.bytes.data()), im.digest.bytes.size());
    return msg;
}
}  // namespace detail

inline SignedIM sign_im(std::string_view key, IntegrityMetadata im) {
    SignedIM s;
    s.mac = hmac_sha256(key, detail::sim_mac_input(im));
    s.im = std::move(im);
    return s;
}

inline bool verify_sim(std::string_view key, const SignedIM& s) {
    return mac_equal(hmac_sha256(key, detail::sim_mac_input(s.im)), s.mac);
}

}  // namespace pdnsim
