#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pdnsim/im.hpp"
#include "pdnsim/media.hpp"
#include "pdnsim/messages.hpp"
#include "pdnsim/simnet.hpp"

namespace pdnsim {

// ============================================================================
// Peer: one viewer's delivery client
//
// Joins a stream (manifest, address reflection, tracker registration), then
// runs an eager fetch pipeline that tries candidates first and falls back to
// the CDN, serves cached segments to other peers, optionally verifies every
// peer-delivered segment against the tracker's signed integrity records, and
// plays the stream at segment cadence. Adversarial roles reuse the same
// machinery and differ only where the attack requires it.
// ============================================================================

enum class PeerRole {
    honest,
    polluter,         // serves altered payloads for target segments, lies in reports
    naive_polluter,   // altered the manifest itself, so its stream identity differs
    harvester,        // joins only to collect other peers' addresses
    free_rider,       // honest client on an unentitled site, riding a stolen credential
};

inline const char* to_string(PeerRole r) {
    switch (r) {
        case PeerRole::honest: return "honest";
        case PeerRole::polluter: return "polluter";
        case PeerRole::naive_polluter: return "naive_polluter";
        case PeerRole::harvester: return "harvester";
        case PeerRole::free_rider: return "free_rider";
    }
    return "?";
}

enum class NetworkType { wifi, cellular };
enum class CellularMode { disable, leech, full };

inline const char* to_string(NetworkType n) {
    return n == NetworkType::wifi ? "wifi" : "cellular";
}
inline const char* to_string(CellularMode m) {
    switch (m) {
        case CellularMode::disable: return "disable";
        case CellularMode::leech: return "leech";
        case CellularMode::full: return "full";
    }
    return "?";
}

struct PeerBehavior {
    PeerRole role = PeerRole::honest;
    double deployment_pct = 100.0;  // share of visitors that run peer delivery
    bool mobile_enabled = true;     // operator switch for mobile clients
    bool is_mobile = false;
    NetworkType network = NetworkType::wifi;
    CellularMode cellular_mode = CellularMode::leech;
    bool defense_enabled = false;   // verify peer bytes against signed records
    bool playback = true;
    std::uint64_t leave_at_ms = 0;  // 0 = stays until the end of the run
    std::uint64_t heartbeat_ms = 3000;
    std::uint64_t candidate_timeout_ms = 200;
    std::uint64_t data_timeout_ms = 30000;
};

struct PeerSetup {
    std::string node_id;
    std::string video_id;
    std::string site_account;     // page the viewer is on; CDN fetches bill here
    std::string claimed_origin;   // origin string presented to the tracker
    AuthMode auth_mode = AuthMode::static_key;
    std::string api_key;
    std::string token_compact;
    std::string country = "US";
    std::string isp = "ispA";
    std::uint64_t join_at_ms = 0;
    std::string tracker_id = "tracker";
    std::string origin_id = "origin";
    std::string stun_id = "stun";
    PeerBehavior behavior;

    // Local view of the stream for roles that do not learn it from the
    // origin: the manifest-preserving polluter's altered copy (payload source
    // for serving), and the naive polluter's rewritten manifest.
    const VideoAsset* local_asset = nullptr;
    bool manifest_from_origin = true;
};

enum class SessionMode { idle, cdn_only, p2p, rejected };

inline const char* to_string(SessionMode m) {
    switch (m) {
        case SessionMode::idle: return "idle";
        case SessionMode::cdn_only: return "cdn_only";
        case SessionMode::p2p: return "p2p";
        case SessionMode::rejected: return "rejected";
    }
    return "?";
}

struct PeerStats {
    std::uint64_t down_cdn_bytes = 0;
    std::uint64_t down_p2p_bytes = 0;
    std::uint64_t up_p2p_bytes = 0;
    std::uint64_t segments_from_cdn = 0;
    std::uint64_t segments_from_p2p = 0;
    std::uint64_t segments_served = 0;
    std::uint64_t requests_refused = 0;   // we refused to serve
    std::uint64_t refusals_seen = 0;      // a candidate refused us
    std::uint64_t candidate_timeouts = 0;
    std::uint64_t discarded_mismatch = 0;  // failed verification
    std::uint64_t discarded_unverified = 0;  // no settled record to check against
    std::uint64_t misbehavior_sent = 0;
    std::uint64_t intents_sent = 0;
    std::uint64_t reports_sent = 0;
    std::uint64_t stalls = 0;
    std::vector<std::uint64_t> p2p_latency_samples_ms;  // send-to-acceptance
    std::vector<std::uint64_t> cdn_latency_samples_ms;  // request-to-acceptance
};

// Pure deployment gate, shared by the join path and statistical tests: the
// fraction of peers joining peer delivery over many draws converges to
// deployment_pct / 100.
inline bool draws_p2p_deployment(std::uint64_t world_seed, const std::string& node_id,
                                 double deployment_pct) {
    if (deployment_pct >= 100.0) return true;
    if (deployment_pct <= 0.0) return false;
    Rng rng(substream_seed(world_seed, "deploy/" + node_id));
    return rng.d01() * 100.0 < deployment_pct;
}

class Peer : public Node {
  public:
    explicit Peer(PeerSetup setup) : cfg_(std::move(setup)) {}

    // --- scenario-facing state ----------------------------------------------

    const PeerSetup& setup() const { return cfg_; }
    const PeerStats& stats() const { return stats_; }
    SessionMode mode() const { return mode_; }
    bool registered() const { return peer_id_.has_value(); }
    std::uint64_t peer_id() const { return peer_id_.value_or(0); }
    const std::string& reject_reason() const { return reject_reason_; }
    std::uint64_t consumed_bytes() const { return stats_.down_cdn_bytes + stats_.down_p2p_bytes; }

    std::size_t cached_segments() const { return cache_.size(); }
    bool has_segment(std::uint32_t idx) const { return cache_.count(idx) != 0; }
    const std::vector<Digest256>& playback_log() const { return playback_log_; }

    // Every counterpart endpoint this peer learned: candidate lists plus
    // binding exchanges.
    const std::map<std::uint64_t, NetAddr>& observed_addrs() const { return observed_; }

    Digest256 cached_digest(std::uint32_t idx) const {
        auto it = cache_.find(idx);
        return it == cache_.end() ? Digest256{} : it->second.digest;
    }
    bool segment_came_from_p2p(std::uint32_t idx) const {
        auto it = cache_.find(idx);
        return it != cache_.end() && it->second.from_p2p;
    }

    // --- lifecycle ------------------------------------------------------------

    // Called by the scenario once the world is assembled; schedules the join.
    void start(World& world) {
        std::uint64_t delay =
            cfg_.join_at_ms > world.now_ms() ? cfg_.join_at_ms - world.now_ms() : 0;
        world.schedule(delay, "t:join:" + cfg_.node_id, [this](World& w) { join(w); });
    }

    void on_message(World& world, const std::string& from, const Message& msg) override {
        if (left_) return;  // viewer closed the session; the node goes silent
        if (auto* env = msg.get_if<RelayEnvelope>()) {
            if (!env->inner) return;
            ReplyPath reply;
            reply.via_relay = true;
            reply.relay_node = from;
            reply.counterpart_pid = env->from_peer_id;
            dispatch_p2p(world, *env->inner, reply);
            return;
        }
        if (auto* m = msg.get_if<ManifestResponse>()) return handle_manifest(world, *m);
        if (auto* m = msg.get_if<StunResponse>()) return handle_stun(world, *m);
        if (auto* m = msg.get_if<RegisterResponse>()) return handle_register(world, *m);
        if (auto* m = msg.get_if<CandidatesResponse>()) return handle_candidates(world, *m);
        if (auto* m = msg.get_if<CdnSegmentResponse>()) return handle_cdn_segment(world, *m);
        if (auto* m = msg.get_if<SimResponse>()) return handle_sim(world, *m);
        if (msg.get_if<ReporterNotice>())
            return handle_reporter_notice(world, *msg.get_if<ReporterNotice>());

        ReplyPath reply;
        reply.via_relay = false;
        dispatch_p2p(world, msg, reply);
    }

  private:
    struct CacheEntry {
        SegmentBuffer data;
        Digest256 digest;
        bool from_p2p = false;
        std::uint64_t fetched_at = 0;
    };

    struct ReplyPath {
        bool via_relay = false;
        std::string relay_node;
        std::uint64_t counterpart_pid = 0;
        NetAddr direct_addr;  // valid when !via_relay
    };

    enum class FetchPhase { binding, requesting, awaiting_data, verifying };

    struct FetchOp {
        std::uint32_t idx = 0;
        std::uint64_t generation = 0;
        FetchPhase phase = FetchPhase::binding;
        std::vector<CandidateEntry> order;
        std::size_t pos = 0;
        // payload held while the signed record check runs
        SegmentBuffer pending_payload;
        std::uint64_t pending_sent_at = 0;
        std::uint64_t pending_from_pid = 0;
        std::uint64_t cdn_requested_at = 0;
    };

    // --- join sequence ---------------------------------------------------------

    void join(World& world) {
        if (cfg_.behavior.leave_at_ms > 0) {
            std::uint64_t delay = cfg_.behavior.leave_at_ms > world.now_ms()
                                      ? cfg_.behavior.leave_at_ms - world.now_ms()
                                      : 0;
            world.schedule(delay, "t:leave:" + cfg_.node_id,
                           [this](World&) { left_ = true; });
        }
        bool p2p_allowed = true;
        if (cfg_.behavior.is_mobile && !cfg_.behavior.mobile_enabled) p2p_allowed = false;
        if (cfg_.behavior.network == NetworkType::cellular &&
            cfg_.behavior.cellular_mode == CellularMode::disable)
            p2p_allowed = false;
        if (!draws_p2p_deployment(world.seed(), cfg_.node_id, cfg_.behavior.deployment_pct))
            p2p_allowed = false;
        mode_ = p2p_allowed ? SessionMode::p2p : SessionMode::cdn_only;

        if (cfg_.manifest_from_origin) {
            world.send(cfg_.node_id, cfg_.origin_id, ManifestRequest{cfg_.video_id});
        } else {
            adopt_manifest(cfg_.local_asset->manifest);
            after_manifest(world);
        }
    }

    void handle_manifest(World& world, const ManifestResponse& resp) {
        if (!resp.found) {
            mode_ = SessionMode::idle;  // nothing to play
            return;
        }
        adopt_manifest(resp.manifest);
        after_manifest(world);
    }

    void adopt_manifest(const Manifest& m) {
        manifest_ = m;
        stream_digest_ = manifest_digest(m);
        segment_count_ = static_cast<std::uint32_t>(m.entries.size());
        segment_duration_ms_ = m.entries.empty() ? 1000 : m.entries[0].duration_ms;
    }

    void after_manifest(World& world) {
        if (cfg_.behavior.playback && cfg_.behavior.role != PeerRole::harvester &&
            segment_count_ > 0)
            schedule_playback(world);
        if (mode_ == SessionMode::p2p) {
            world.send(cfg_.node_id, cfg_.stun_id, StunRequest{});
        } else {
            fetch_next(world);
        }
    }

    void handle_stun(World& world, const StunResponse& resp) {
        mapped_addr_ = resp.mapped;
        RegisterRequest req;
        req.mode = cfg_.auth_mode;
        req.api_key = cfg_.api_key;
        req.token_compact = cfg_.token_compact;
        req.origin = cfg_.claimed_origin;
        req.video_id = cfg_.video_id;
        req.manifest_digest = stream_digest_;
        req.addr = mapped_addr_;
        req.country = cfg_.country;
        req.isp = cfg_.isp;
        world.send(cfg_.node_id, cfg_.tracker_id, req);
    }

    void handle_register(World& world, const RegisterResponse& resp) {
        if (!resp.ok) {
            mode_ = SessionMode::rejected;
            reject_reason_ = resp.reject_reason;
            // The viewer still gets the video, straight from the CDN.
            fetch_next(world);
            return;
        }
        peer_id_ = resp.peer_id;
        sim_key_ = resp.sim_key;
        world.send(cfg_.node_id, cfg_.tracker_id, CandidatesRequest{*peer_id_});
        schedule_heartbeat(world);
        fetch_next(world);
    }

    // --- steady state timers -----------------------------------------------------

    void schedule_heartbeat(World& world) {
        world.schedule(cfg_.behavior.heartbeat_ms, "t:hb:" + cfg_.node_id, [this](World& w) {
            if (!peer_id_ || left_) return;
            w.send(cfg_.node_id, cfg_.tracker_id, Heartbeat{*peer_id_});
            w.send(cfg_.node_id, cfg_.tracker_id, CandidatesRequest{*peer_id_});
            schedule_heartbeat(w);
        });
    }

    void schedule_playback(World& world) {
        world.schedule(segment_duration_ms_, "t:play:" + cfg_.node_id, [this](World& w) {
            if (left_ || play_next_ >= segment_count_) return;  // finished
            auto it = cache_.find(play_next_);
            if (it != cache_.end()) {
                playback_log_.push_back(it->second.digest);
                ++play_next_;
            } else {
                ++stats_.stalls;
            }
            schedule_playback(w);
        });
    }

    // --- candidate handling --------------------------------------------------------

    void handle_candidates(World& world, const CandidatesResponse& resp) {
        if (!resp.ok) return;
        candidates_ = resp.entries;
        for (const auto& e : resp.entries) {
            if (e.addr.routable()) observed_.emplace(e.addr.key(), e.addr);
            if (cfg_.behavior.role == PeerRole::harvester) probe_candidate(world, e);
        }
    }

    // Harvesters open a binding exchange with every newly disclosed endpoint
    // to confirm it is live; the exchange leaks the counterpart's address
    // even when the candidate list alone would not.
    void probe_candidate(World& world, const CandidateEntry& e) {
        if (!e.addr.routable()) return;
        if (!probed_.insert(e.peer_id).second) return;
        BindingRequest req;
        req.from_addr = mapped_addr_;
        send_p2p(world, e, Message(req));
    }

    // --- fetch pipeline ---------------------------------------------------------

    void fetch_next(World& world) {
        if (cfg_.behavior.role == PeerRole::harvester) return;  // watches, never fetches
        if (left_ || next_fetch_ >= segment_count_) return;
        std::uint32_t idx = next_fetch_++;
        op_.emplace();
        op_->idx = idx;
        op_->generation = ++generation_;
        if (mode_ == SessionMode::p2p && !candidates_.empty()) {
            op_->order = candidates_;
            op_->pos = 0;
            op_->phase = FetchPhase::binding;
            try_current_candidate(world);
        } else {
            cdn_fetch(world, idx);
        }
    }

    void try_current_candidate(World& world) {
        if (!op_) return;
        if (op_->pos >= op_->order.size()) {
            cdn_fetch(world, op_->idx);
            return;
        }
        const CandidateEntry& cand = op_->order[op_->pos];
        if (!cand.addr.routable()) {
            ++op_->pos;
            try_current_candidate(world);
            return;
        }
        std::uint64_t my_gen = ++generation_;
        op_->generation = my_gen;
        if (needs_binding(cand)) {
            op_->phase = FetchPhase::binding;
            BindingRequest req;
            req.from_addr = mapped_addr_;
            send_p2p(world, cand, Message(req));
        } else {
            request_segment(world, cand);
        }
        world.schedule(cfg_.behavior.candidate_timeout_ms, "t:cand:" + cfg_.node_id,
                       [this, my_gen](World& w) {
                           if (left_ || !op_ || op_->generation != my_gen) return;
                           if (op_->phase != FetchPhase::binding &&
                               op_->phase != FetchPhase::requesting)
                               return;
                           ++stats_.candidate_timeouts;
                           ++op_->pos;
                           try_current_candidate(w);
                       });
    }

    bool needs_binding(const CandidateEntry& cand) const {
        // Relay paths carry their own rendezvous; direct paths need one
        // binding exchange per counterpart endpoint.
        return !cand.via_relay && !bound_.count(cand.addr.key());
    }

    void request_segment(World& world, const CandidateEntry& cand) {
        op_->phase = FetchPhase::requesting;
        SegmentRequest req;
        req.video_id = cfg_.video_id;
        req.index = op_->idx;
        req.from_peer_id = peer_id_.value_or(0);
        req.from_addr = mapped_addr_;
        send_p2p(world, cand, Message(req));
    }

    void send_p2p(World& world, const CandidateEntry& cand, Message msg) {
        if (cand.via_relay) {
            RelayEnvelope env;
            env.to_peer_id = cand.peer_id;
            env.from_peer_id = peer_id_.value_or(0);
            env.inner = std::make_shared<const Message>(std::move(msg));
            world.send_to_addr(cfg_.node_id, cand.addr, env);
        } else {
            world.send_to_addr(cfg_.node_id, cand.addr, std::move(msg));
        }
    }

    void reply_p2p(World& world, const ReplyPath& path, Message msg) {
        if (path.via_relay) {
            RelayEnvelope env;
            env.to_peer_id = path.counterpart_pid;
            env.from_peer_id = peer_id_.value_or(0);
            env.inner = std::make_shared<const Message>(std::move(msg));
            world.send(cfg_.node_id, path.relay_node, env);
        } else {
            world.send_to_addr(cfg_.node_id, path.direct_addr, std::move(msg));
        }
    }

    void cdn_fetch(World& world, std::uint32_t idx) {
        if (op_) {
            op_->phase = FetchPhase::awaiting_data;
            op_->generation = ++generation_;
            op_->cdn_requested_at = world.now_ms();
        }
        if (peer_id_ && !sim_key_.empty()) {
            world.send(cfg_.node_id, cfg_.tracker_id, CdnIntent{*peer_id_, cfg_.video_id, idx});
            ++stats_.intents_sent;
        }
        CdnSegmentRequest req;
        req.video_id = cfg_.video_id;
        req.index = idx;
        req.account = cfg_.site_account;
        world.send(cfg_.node_id, cfg_.origin_id, req);
    }

    void handle_cdn_segment(World& world, const CdnSegmentResponse& resp) {
        if (!resp.found || !resp.payload) {
            if (op_ && op_->idx == resp.index) {
                op_.reset();
                fetch_next(world);
            }
            return;
        }
        stats_.down_cdn_bytes += resp.payload->size();
        ++stats_.segments_from_cdn;
        if (op_ && op_->idx == resp.index)
            stats_.cdn_latency_samples_ms.push_back(world.now_ms() - op_->cdn_requested_at);
        Digest256 digest = report_digest_for(resp.index, *resp.payload);
        cdn_digests_[resp.index] = digest;
        if (noticed_.count(resp.index)) send_report(world, resp.index);

        accept_segment(world, resp.index, resp.payload, false, 0);
    }

    // The digest this peer would attest for a segment it fetched from the
    // CDN. The manifest-preserving polluter lies for its target segments,
    // attesting its altered payload instead of what it actually received.
    Digest256 report_digest_for(std::uint32_t idx, const std::vector<std::uint8_t>& payload) {
        if (cfg_.behavior.role == PeerRole::polluter && cfg_.local_asset &&
            cfg_.local_asset->is_polluted_index(idx))
            return compute_im(*polluted_buffer(idx), cfg_.video_id, idx).digest;
        return compute_im(payload, cfg_.video_id, idx).digest;
    }

    void handle_reporter_notice(World& world, const ReporterNotice& notice) {
        if (notice.video_id != cfg_.video_id) return;
        noticed_.insert(notice.index);
        if (cdn_digests_.count(notice.index)) send_report(world, notice.index);
    }

    void send_report(World& world, std::uint32_t idx) {
        if (!peer_id_ || reported_.count(idx)) return;
        reported_.insert(idx);
        ImReport rep;
        rep.peer_id = *peer_id_;
        rep.im.video_id = cfg_.video_id;
        rep.im.segment_index = idx;
        rep.im.digest = cdn_digests_[idx];
        world.send(cfg_.node_id, cfg_.tracker_id, rep);
        ++stats_.reports_sent;
    }

    // --- p2p data plane ------------------------------------------------------------

    void dispatch_p2p(World& world, const Message& msg, ReplyPath reply) {
        if (auto* m = msg.get_if<BindingRequest>()) {
            reply.direct_addr = m->from_addr;
            if (m->from_addr.routable()) observed_.emplace(m->from_addr.key(), m->from_addr);
            BindingResponse resp;
            resp.accepted = true;
            resp.from_addr = mapped_addr_;
            reply_p2p(world, reply, resp);
            return;
        }
        if (auto* m = msg.get_if<BindingResponse>()) {
            if (m->from_addr.routable()) {
                observed_.emplace(m->from_addr.key(), m->from_addr);
                bound_.insert(m->from_addr.key());
            }
            // Continue the fetch that was waiting on this binding.
            if (op_ && op_->phase == FetchPhase::binding && op_->pos < op_->order.size()) {
                const CandidateEntry& cand = op_->order[op_->pos];
                if (cand.via_relay || !m->from_addr.routable() ||
                    cand.addr.key() == m->from_addr.key())
                    request_segment(world, cand);
            }
            return;
        }
        if (auto* m = msg.get_if<SegmentRequest>()) {
            reply.direct_addr = m->from_addr;
            if (m->from_addr.routable()) observed_.emplace(m->from_addr.key(), m->from_addr);
            handle_segment_request(world, *m, reply);
            return;
        }
        if (auto* m = msg.get_if<SegmentGrant>()) {
            if (!op_ || op_->idx != m->index || op_->phase != FetchPhase::requesting) return;
            if (m->granted) {
                op_->phase = FetchPhase::awaiting_data;
                std::uint64_t my_gen = op_->generation = ++generation_;
                world.schedule(cfg_.behavior.data_timeout_ms, "t:data:" + cfg_.node_id,
                               [this, my_gen](World& w) {
                                   if (left_ || !op_ || op_->generation != my_gen) return;
                                   if (op_->phase != FetchPhase::awaiting_data) return;
                                   ++stats_.candidate_timeouts;
                                   ++op_->pos;
                                   try_current_candidate(w);
                               });
            } else {
                ++stats_.refusals_seen;
                ++op_->pos;
                try_current_candidate(world);
            }
            return;
        }
        if (auto* m = msg.get_if<SegmentData>()) {
            handle_segment_data(world, *m, reply);
            return;
        }
    }

    void handle_segment_request(World& world, const SegmentRequest& req, const ReplyPath& reply) {
        SegmentGrant grant;
        grant.video_id = req.video_id;
        grant.index = req.index;
        bool cellular_blocked = cfg_.behavior.network == NetworkType::cellular &&
                                cfg_.behavior.cellular_mode != CellularMode::full;
        auto cached = cache_.find(req.index);
        if (req.video_id != cfg_.video_id || cellular_blocked || cached == cache_.end()) {
            grant.granted = false;
            ++stats_.requests_refused;
            reply_p2p(world, reply, grant);
            return;
        }
        grant.granted = true;
        reply_p2p(world, reply, grant);

        SegmentData data;
        data.video_id = req.video_id;
        data.index = req.index;
        data.sent_at_ms = world.now_ms();
        data.payload = cached->second.data;
        if (cfg_.behavior.role == PeerRole::polluter && cfg_.local_asset &&
            cfg_.local_asset->is_polluted_index(req.index))
            data.payload = polluted_buffer(req.index);
        reply_p2p(world, reply, data);

        stats_.up_p2p_bytes += data.payload->size();
        ++stats_.segments_served;
        if (peer_id_)
            world.send(cfg_.node_id, cfg_.tracker_id,
                       UploadStats{*peer_id_, data.payload->size()});
    }

    void handle_segment_data(World& world, const SegmentData& data, const ReplyPath& reply) {
        if (!op_ || op_->idx != data.index || op_->phase != FetchPhase::awaiting_data) return;
        if (cache_.count(data.index)) return;
        std::uint64_t from_pid = reply.via_relay
                                     ? reply.counterpart_pid
                                     : (op_->pos < op_->order.size() ? op_->order[op_->pos].peer_id
                                                                     : 0);
        stats_.down_p2p_bytes += data.payload->size();

        if (cfg_.behavior.defense_enabled && !sim_key_.empty()) {
            op_->phase = FetchPhase::verifying;
            op_->generation = ++generation_;
            op_->pending_payload = data.payload;
            op_->pending_sent_at = data.sent_at_ms;
            op_->pending_from_pid = from_pid;
            world.send(cfg_.node_id, cfg_.tracker_id, SimRequest{cfg_.video_id, data.index});
            return;
        }
        stats_.p2p_latency_samples_ms.push_back(world.now_ms() - data.sent_at_ms);
        ++stats_.segments_from_p2p;
        accept_segment(world, data.index, data.payload, true, data.sent_at_ms);
    }

    void handle_sim(World& world, const SimResponse& resp) {
        if (!op_ || op_->phase != FetchPhase::verifying || op_->idx != resp.index) return;
        SegmentBuffer payload = op_->pending_payload;
        std::uint64_t sent_at = op_->pending_sent_at;
        std::uint64_t from_pid = op_->pending_from_pid;
        op_->pending_payload.reset();

        if (resp.status == SimStatus::ready && verify_sim(sim_key_, resp.sim)) {
            IntegrityMetadata mine = compute_im(*payload, cfg_.video_id, resp.index);
            if (mine.digest == resp.sim.im.digest) {
                stats_.p2p_latency_samples_ms.push_back(world.now_ms() - sent_at);
                ++stats_.segments_from_p2p;
                accept_segment(world, resp.index, payload, true, sent_at);
                return;
            }
            // Verified record, conflicting bytes: drop them, tell the
            // tracker who served them, and refetch from the CDN.
            ++stats_.discarded_mismatch;
            if (peer_id_) {
                MisbehaviorNotice n;
                n.reporter_peer_id = *peer_id_;
                n.accused_peer_id = from_pid;
                n.video_id = cfg_.video_id;
                n.index = resp.index;
                n.observed_digest = mine.digest;
                world.send(cfg_.node_id, cfg_.tracker_id, n);
                ++stats_.misbehavior_sent;
            }
        } else {
            // No settled record to check against: the bytes are unusable.
            ++stats_.discarded_unverified;
        }
        cdn_fetch(world, resp.index);
    }

    void accept_segment(World& world, std::uint32_t idx, SegmentBuffer payload, bool from_p2p,
                        std::uint64_t) {
        CacheEntry entry;
        entry.data = payload;
        entry.digest = sha256(*payload);
        entry.from_p2p = from_p2p;
        entry.fetched_at = world.now_ms();
        cache_[idx] = std::move(entry);
        op_.reset();
        fetch_next(world);
    }

    // The polluter's altered payloads, generated lazily from its local copy.
    SegmentBuffer polluted_buffer(std::uint32_t idx) {
        auto it = polluted_cache_.find(idx);
        if (it == polluted_cache_.end())
            it = polluted_cache_.emplace(idx, make_segment_buffer(*cfg_.local_asset, idx)).first;
        return it->second;
    }

    PeerSetup cfg_;
    PeerStats stats_;

    SessionMode mode_ = SessionMode::idle;
    bool left_ = false;
    std::string reject_reason_;
    std::optional<std::uint64_t> peer_id_;
    std::string sim_key_;
    NetAddr mapped_addr_;

    Manifest manifest_;
    Digest256 stream_digest_;
    std::uint32_t segment_count_ = 0;
    std::uint64_t segment_duration_ms_ = 1000;

    std::vector<CandidateEntry> candidates_;
    std::map<std::uint64_t, NetAddr> observed_;
    std::set<std::uint64_t> bound_;     // addr keys with a completed binding
    std::set<std::uint64_t> probed_;    // harvester: peer ids already probed

    std::map<std::uint32_t, CacheEntry> cache_;
    std::map<std::uint32_t, SegmentBuffer> polluted_cache_;
    std::map<std::uint32_t, Digest256> cdn_digests_;
    std::set<std::uint32_t> noticed_;
    std::set<std::uint32_t> reported_;

    std::optional<FetchOp> op_;
    std::uint32_t next_fetch_ = 0;
    std::uint64_t generation_ = 0;

    std::uint32_t play_next_ = 0;
    std::vector<Digest256> playback_log_;
};

}  // namespace pdnsim
