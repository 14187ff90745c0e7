#pragma once

#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "pdnsim/config.hpp"
#include "pdnsim/origin.hpp"
#include "pdnsim/peer.hpp"
#include "pdnsim/tracker.hpp"

namespace pdnsim {

// ============================================================================
// Run reports
//
// Scenarios assemble one JSON document per invocation: scenario name, seed,
// the effective config, one entry per sub-run, and a cross-run summary. JSON
// keys are kept sorted (the default container), so rendering the same world
// twice yields byte-identical output. The CSV view flattens the per-peer
// tables for spreadsheet work.
// ============================================================================

inline std::string hash_hex(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline double mean_of(const std::vector<std::uint64_t>& samples) {
    if (samples.empty()) return 0.0;
    return static_cast<double>(std::accumulate(samples.begin(), samples.end(), 0.0)) /
           static_cast<double>(samples.size());
}

inline std::uint64_t count_observed_peer_addrs(const World& world, const Peer& peer) {
    std::uint64_t n = 0;
    for (const auto& [key, addr] : peer.observed_addrs()) {
        const std::string* id = world.node_by_addr(addr);
        if (id && world.kind_of(*id) == NodeKind::peer) ++n;
    }
    return n;
}

inline json peer_row(const World& world, const Peer& peer) {
    const PeerStats& s = peer.stats();
    json row;
    row["node"] = peer.setup().node_id;
    row["peer_id"] = peer.peer_id();
    row["role"] = to_string(peer.setup().behavior.role);
    row["mode"] = to_string(peer.mode());
    row["network"] = to_string(peer.setup().behavior.network);
    row["registered"] = peer.registered();
    row["reject_reason"] = peer.reject_reason();
    row["down_cdn_bytes"] = s.down_cdn_bytes;
    row["down_p2p_bytes"] = s.down_p2p_bytes;
    row["up_p2p_bytes"] = s.up_p2p_bytes;
    row["segments_cdn"] = s.segments_from_cdn;
    row["segments_p2p"] = s.segments_from_p2p;
    row["segments_served"] = s.segments_served;
    row["requests_refused"] = s.requests_refused;
    row["refusals_seen"] = s.refusals_seen;
    row["candidate_timeouts"] = s.candidate_timeouts;
    row["discarded_mismatch"] = s.discarded_mismatch;
    row["discarded_unverified"] = s.discarded_unverified;
    row["misbehavior_sent"] = s.misbehavior_sent;
    row["intents_sent"] = s.intents_sent;
    row["reports_sent"] = s.reports_sent;
    row["stalls"] = s.stalls;
    row["played"] = peer.playback_log().size();
    row["observed_peer_addrs"] = count_observed_peer_addrs(world, peer);
    row["latency_count"] = s.p2p_latency_samples_ms.size();
    row["latency_mean_ms"] = mean_of(s.p2p_latency_samples_ms);
    std::uint64_t consumed = s.down_cdn_bytes + s.down_p2p_bytes;
    row["offload_ratio"] = consumed == 0 ? 0.0
                                         : static_cast<double>(s.down_p2p_bytes) /
                                               static_cast<double>(consumed);
    return row;
}

inline json peer_totals(const json& rows) {
    json totals;
    for (const char* key : {"down_cdn_bytes", "down_p2p_bytes", "up_p2p_bytes", "segments_cdn",
                            "segments_p2p", "segments_served", "stalls", "played"}) {
        std::uint64_t sum = 0;
        for (const auto& row : rows) sum += row.at(key).get<std::uint64_t>();
        totals[key] = sum;
    }
    std::uint64_t down_cdn = totals["down_cdn_bytes"].get<std::uint64_t>();
    std::uint64_t down_p2p = totals["down_p2p_bytes"].get<std::uint64_t>();
    std::uint64_t consumed = down_cdn + down_p2p;
    totals["offload_ratio"] =
        consumed == 0 ? 0.0 : static_cast<double>(down_p2p) / static_cast<double>(consumed);
    return totals;
}

inline json world_section(const World& world) {
    json w;
    w["trace_hash"] = hash_hex(world.trace_hash());
    w["events"] = world.events_processed();
    w["messages_sent"] = world.messages_sent();
    w["messages_dropped"] = world.messages_dropped();
    w["bytes_sent"] = world.bytes_sent();
    w["end_ms"] = world.now_ms();
    return w;
}

inline json tracker_section(const Tracker& tracker) {
    const TrackerStats& s = tracker.stats();
    json t;
    t["registrations_accepted"] = s.registrations_accepted;
    t["registrations_rejected"] = s.registrations_rejected;
    t["candidate_requests"] = s.candidate_requests;
    t["heartbeats"] = s.heartbeats;
    t["blacklistings"] = s.blacklistings;

    json im;
    im["intents"] = s.im.intents;
    im["selections"] = s.im.selections;
    im["reports"] = s.im.reports;
    im["unsolicited_reports"] = s.im.unsolicited_reports;
    im["agreements"] = s.im.agreements;
    im["conflicts"] = s.im.conflicts;
    im["collect_timeouts"] = s.im.collect_timeouts;
    im["origin_fetches"] = s.im.origin_fetches;
    im["sims_served"] = s.im.sims_served;
    im["sims_pending"] = s.im.sims_pending;
    im["misbehavior_notices"] = s.im.misbehavior_notices;
    im["bogus_notices"] = s.im.bogus_notices;
    im["sim_subversions_detected"] = s.im.sim_subversions_detected;
    t["im"] = im;

    json billing;
    for (const auto& [customer, bill] : tracker.billing()) {
        billing[customer]["sessions"] = bill.sessions;
        billing[customer]["p2p_bytes"] = bill.p2p_bytes;
    }
    t["billing"] = billing;

    json blacklist = json::array();
    for (std::uint64_t pid : tracker.blacklisted_peers()) blacklist.push_back(pid);
    t["blacklisted_peer_ids"] = blacklist;

    json events = json::array();
    for (const AuthEvent& e : tracker.auth_events()) {
        json ev;
        ev["at_ms"] = e.at_ms;
        ev["mode"] = e.mode == AuthMode::static_key ? "static_key" : "token";
        ev["accepted"] = e.accepted;
        ev["reason"] = e.reason;
        ev["customer_id"] = e.customer_id;
        ev["origin"] = e.origin;
        events.push_back(ev);
    }
    t["auth_events"] = events;
    return t;
}

inline json origin_section(const Origin& origin) {
    json o;
    o["total_bytes"] = origin.total().bytes;
    o["total_requests"] = origin.total().requests;
    o["manifest_requests"] = origin.manifest_requests();
    json by_account;
    for (const auto& [account, counter] : origin.by_account()) {
        by_account[account]["bytes"] = counter.bytes;
        by_account[account]["requests"] = counter.requests;
    }
    o["by_account"] = by_account;
    return o;
}

// --- CSV view -----------------------------------------------------------------

namespace detail {

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "node",           "peer_id",        "role",
        "mode",           "network",        "registered",
        "down_cdn_bytes", "down_p2p_bytes", "up_p2p_bytes",
        "segments_cdn",   "segments_p2p",   "segments_served",
        "stalls",         "played",         "latency_mean_ms",
        "offload_ratio",
    };
    return cols;
}

inline std::string csv_cell(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", value.get<double>());
        return buf;
    }
    return value.dump();
}

}  // namespace detail

// One row per peer per sub-run, plus a totals row per sub-run.
inline std::string render_csv(const json& report) {
    std::string out = "run";
    for (const std::string& col : detail::csv_columns()) out += "," + col;
    out += "\n";

    for (const auto& [label, run] : report.at("runs").items()) {
        for (const auto& row : run.at("peers")) {
            out += label;
            for (const std::string& col : detail::csv_columns())
                out += "," + detail::csv_cell(row.at(col));
            out += "\n";
        }
        json totals = run.at("totals");
        totals["node"] = "__totals__";
        out += label;
        for (const std::string& col : detail::csv_columns())
            out += "," + (totals.contains(col) ? detail::csv_cell(totals.at(col)) : "");
        out += "\n";
    }
    return out;
}

inline std::string render_json(const json& report) { return report.dump(2) + "\n"; }

}  // namespace pdnsim
