#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace pdnsim {

// ============================================================================
// Addresses and links
// ============================================================================

// A transport endpoint as the rest of the swarm sees it: reflexive ip:port
// plus the locality attributes used by candidate policies and leak reports.
struct NetAddr {
    std::uint32_t ip = 0;
    std::uint16_t port = 0;
    std::string country;
    std::string isp;

    // ip/port only: two observations of the same endpoint compare equal even
    // if one side lacks the locality annotations.
    std::uint64_t key() const { return (static_cast<std::uint64_t>(ip) << 16) | port; }
    bool routable() const { return ip != 0; }

    friend bool operator==(const NetAddr& a, const NetAddr& b) { return a.key() == b.key(); }
    friend bool operator<(const NetAddr& a, const NetAddr& b) { return a.key() < b.key(); }
};

inline std::string format_addr(const NetAddr& a) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u:%u", a.ip >> 24, (a.ip >> 16) & 0xff,
                  (a.ip >> 8) & 0xff, a.ip & 0xff, a.port);
    return buf;
}

struct LinkModel {
    std::uint64_t latency_ms = 10;          // one-way propagation to the backbone
    std::uint64_t bandwidth_bps = 12500000;  // bytes per second

    friend bool operator==(const LinkModel& a, const LinkModel& b) {
        return a.latency_ms == b.latency_ms && a.bandwidth_bps == b.bandwidth_bps;
    }
};

enum class NodeKind { peer, tracker, origin, stun, relay };

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::peer: return "peer";
        case NodeKind::tracker: return "tracker";
        case NodeKind::origin: return "origin";
        case NodeKind::stun: return "stun";
        case NodeKind::relay: return "relay";
    }
    return "?";
}

}  // namespace pdnsim
