#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pdnsim/digest.hpp"
#include "pdnsim/im.hpp"
#include "pdnsim/media.hpp"
#include "pdnsim/net.hpp"

namespace pdnsim {

struct Message;  // recursive via RelayEnvelope

// ============================================================================
// Wire messages
//
// One struct per protocol interaction. Payload-free control messages are
// charged a small nominal wire size; segment-bearing messages are charged
// their payload length.
// ============================================================================

// --- address reflection ---
struct StunRequest {};
struct StunResponse {
    NetAddr mapped;
};

// --- origin / CDN ---
struct ManifestRequest {
    std::string video_id;
};
struct ManifestResponse {
    bool found = false;
    Manifest manifest;
};
struct CdnSegmentRequest {
    std::string video_id;
    std::uint32_t index = 0;
    std::string account;  // traffic is billed here
};
struct CdnSegmentResponse {
    bool found = false;
    std::string video_id;
    std::uint32_t index = 0;
    SegmentBuffer payload;
};

// --- tracker session ---
enum class AuthMode { static_key, token };

struct RegisterRequest {
    AuthMode mode = AuthMode::static_key;
    std::string api_key;        // static_key mode
    std::string token_compact;  // token mode
    std::string origin;         // claimed embedding page origin
    std::string video_id;
    Digest256 manifest_digest;  // declared stream identity
    NetAddr addr;               // reflexive address learned via STUN
    std::string country;
    std::string isp;
};
struct RegisterResponse {
    bool ok = false;
    std::string reject_reason;
    std::uint64_t peer_id = 0;
    std::string sim_key;  // verification key for signed integrity metadata
};

struct CandidatesRequest {
    std::uint64_t peer_id = 0;
};
struct CandidateEntry {
    std::uint64_t peer_id = 0;
    NetAddr addr;
    bool via_relay = false;
};
struct CandidatesResponse {
    bool ok = false;
    std::vector<CandidateEntry> entries;
};
struct Heartbeat {
    std::uint64_t peer_id = 0;
};
struct UploadStats {
    std::uint64_t peer_id = 0;
    std::uint64_t bytes = 0;
};

// --- integrity checking ---
struct CdnIntent {
    std::uint64_t peer_id = 0;
    std::string video_id;
    std::uint32_t index = 0;
};
struct ReporterNotice {
    std::string video_id;
    std::uint32_t index = 0;
};
struct ImReport {
    std::uint64_t peer_id = 0;
    IntegrityMetadata im;
};
enum class SimStatus { ready, pending, unknown };
struct SimRequest {
    std::string video_id;
    std::uint32_t index = 0;
};
struct SimResponse {
    SimStatus status = SimStatus::unknown;
    std::string video_id;
    std::uint32_t index = 0;
    SignedIM sim;
};
struct MisbehaviorNotice {
    std::uint64_t reporter_peer_id = 0;
    std::uint64_t accused_peer_id = 0;
    std::string video_id;
    std::uint32_t index = 0;
    Digest256 observed_digest;
};

// --- peer to peer ---
struct BindingRequest {
    NetAddr from_addr;
};
struct BindingResponse {
    bool accepted = false;
    NetAddr from_addr;
};
struct SegmentRequest {
    std::string video_id;
    std::uint32_t index = 0;
    std::uint64_t from_peer_id = 0;
    NetAddr from_addr;
};
struct SegmentGrant {
    std::string video_id;
    std::uint32_t index = 0;
    bool granted = false;
};
struct SegmentData {
    std::string video_id;
    std::uint32_t index = 0;
    SegmentBuffer payload;
    std::uint64_t sent_at_ms = 0;
};

// --- relayed transport ---
struct RelayEnvelope {
    std::uint64_t to_peer_id = 0;
    std::uint64_t from_peer_id = 0;
    std::shared_ptr<const Message> inner;
};

using MessageVariant =
    std::variant<StunRequest, StunResponse, ManifestRequest, ManifestResponse, CdnSegmentRequest,
                 CdnSegmentResponse, RegisterRequest, RegisterResponse, CandidatesRequest,
                 CandidatesResponse, Heartbeat, UploadStats, CdnIntent, ReporterNotice, ImReport,
                 SimRequest, SimResponse, MisbehaviorNotice, BindingRequest, BindingResponse,
                 SegmentRequest, SegmentGrant, SegmentData, RelayEnvelope>;

struct Message {
    MessageVariant v;

    template <typename T>
    Message(T&& m) : v(std::forward<T>(m)) {}  // NOLINT: implicit by design

    template <typename T>
    const T* get_if() const {
        return std::get_if<T>(&v);
    }
};

inline const char* kind_name(const Message& m);

namespace detail {
struct KindVisitor {
    const char* operator()(const StunRequest&) const { return "stun_req"; }
    const char* operator()(const StunResponse&) const { return "stun_resp"; }
    const char* operator()(const ManifestRequest&) const { return "manifest_req"; }
    const char* operator()(const ManifestResponse&) const { return "manifest_resp"; }
    const char* operator()(const CdnSegmentRequest&) const { return "cdn_req"; }
    const char* operator()(const CdnSegmentResponse&) const { return "cdn_resp"; }
    const char* operator()(const RegisterRequest&) const { return "register_req"; }
    const char* operator()(const RegisterResponse&) const { return "register_resp"; }
    const char* operator()(const CandidatesRequest&) const { return "cand_req"; }
    const char* operator()(const CandidatesResponse&) const { return "cand_resp"; }
    const char* operator()(const Heartbeat&) const { return "heartbeat"; }
    const char* operator()(const UploadStats&) const { return "upload_stats"; }
    const char* operator()(const CdnIntent&) const { return "cdn_intent"; }
    const char* operator()(const ReporterNotice&) const { return "reporter_notice"; }
    const char* operator()(const ImReport&) const { return "im_report"; }
    const char* operator()(const SimRequest&) const { return "sim_req"; }
    const char* operator()(const SimResponse&) const { return "sim_resp"; }
    const char* operator()(const MisbehaviorNotice&) const { return "misbehavior"; }
    const char* operator()(const BindingRequest&) const { return "binding_req"; }
    const char* operator()(const BindingResponse&) const { return "binding_resp"; }
    const char* operator()(const SegmentRequest&) const { return "segment_req"; }
    const char* operator()(const SegmentGrant&) const { return "segment_grant"; }
    const char* operator()(const SegmentData&) const { return "segment_data"; }
    const char* operator()(const RelayEnvelope&) const { return "relay"; }
};

struct SizeVisitor {
    static constexpr std::uint64_t kControl = 200;   // nominal control frame
    static constexpr std::uint64_t kOverhead = 64;   // header share of data frames

    std::uint64_t operator()(const ManifestResponse& m) const {
        return kOverhead + (m.found ? serialize_manifest(m.manifest).size() : 0);
    }
    std::uint64_t operator()(const CdnSegmentResponse& m) const {
        return kOverhead + (m.payload ? m.payload->size() : 0);
    }
    std::uint64_t operator()(const SegmentData& m) const {
        return kOverhead + (m.payload ? m.payload->size() : 0);
    }
    std::uint64_t operator()(const RelayEnvelope& m) const;
    template <typename T>
    std::uint64_t operator()(const T&) const {
        return kControl;
    }
};
}  // namespace detail

inline const char* kind_name(const Message& m) { return std::visit(detail::KindVisitor{}, m.v); }

inline std::uint64_t wire_size(const Message& m) {
    return std::visit(detail::SizeVisitor{}, m.v);
}

inline std::uint64_t detail::SizeVisitor::operator()(const RelayEnvelope& m) const {
    return kOverhead + (m.inner ? wire_size(*m.inner) : 0);
}

}  // namespace pdnsim
