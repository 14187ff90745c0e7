#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pdnsim/im.hpp"
#include "pdnsim/messages.hpp"
#include "pdnsim/simnet.hpp"
#include "pdnsim/token.hpp"

namespace pdnsim {

// ============================================================================
// Tracker: the delivery network's signaling and coordination service
//
// Authenticates joining peers, groups them by stream identity (manifest
// digest), hands out candidate lists under a configurable disclosure policy,
// meters peer traffic for billing, and optionally runs the segment integrity
// checking service that settles one signed integrity metadata record per
// (video, segment) from randomly selected reporters.
// ============================================================================

enum class CandidatePolicyKind { unrestricted, same_country, same_isp, relay_only };

inline const char* to_string(CandidatePolicyKind k) {
    switch (k) {
        case CandidatePolicyKind::unrestricted: return "unrestricted";
        case CandidatePolicyKind::same_country: return "same_country";
        case CandidatePolicyKind::same_isp: return "same_isp";
        case CandidatePolicyKind::relay_only: return "relay_only";
    }
    return "?";
}

inline std::optional<CandidatePolicyKind> candidate_policy_from_string(std::string_view s) {
    if (s == "unrestricted") return CandidatePolicyKind::unrestricted;
    if (s == "same_country") return CandidatePolicyKind::same_country;
    if (s == "same_isp") return CandidatePolicyKind::same_isp;
    if (s == "relay_only") return CandidatePolicyKind::relay_only;
    return std::nullopt;
}

struct CandidatePolicy {
    CandidatePolicyKind kind = CandidatePolicyKind::unrestricted;
    std::size_t max_candidates = 8;
};

struct CustomerAccount {
    std::string customer_id;
    std::string api_key;            // static_key credential
    bool whitelist_enabled = false; // check the claimed page origin
    std::set<std::string> allowed_origins;
    std::string token_secret;       // token-mode issuing/verification key
};

struct AccountBilling {
    std::uint64_t sessions = 0;    // accepted registrations
    std::uint64_t p2p_bytes = 0;   // peer uploads reported for this customer
};

struct TrackerPeerRecord {
    std::uint64_t peer_id = 0;
    std::string node_id;
    std::string customer_id;
    std::string video_id;
    Digest256 stream_digest;
    std::string claimed_origin;
    NetAddr addr;
    std::string country;
    std::string isp;
    std::uint64_t registered_at = 0;
    std::uint64_t last_seen = 0;
    bool blacklisted = false;
    std::string blacklist_reason;
    std::uint64_t candidate_rounds = 0;
    std::uint64_t uploaded_bytes_reported = 0;
};

struct AuthEvent {
    std::uint64_t at_ms = 0;
    AuthMode mode = AuthMode::static_key;
    bool accepted = false;
    std::string reason;  // "accepted" or the rejection cause
    std::string customer_id;
    std::string origin;
};

struct TrackerConfig {
    AuthMode auth_mode = AuthMode::static_key;
    CandidatePolicy policy;
    std::uint64_t liveness_timeout_ms = 10000;
    bool im_enabled = false;
    std::size_t reporter_count = 3;           // k
    std::uint64_t selection_delay_ms = 2000;  // intent collection window
    std::uint64_t collect_timeout_ms = 10000; // report collection deadline
    std::string sim_key = "sim-mac-key";
    std::string origin_node_id = "origin";
    std::string relay_node_id = "relay";
    std::string tracker_account = "__provider__";  // origin billing for audits
};

struct ImServiceStats {
    std::uint64_t intents = 0;
    std::uint64_t selections = 0;
    std::uint64_t reports = 0;
    std::uint64_t unsolicited_reports = 0;
    std::uint64_t agreements = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t collect_timeouts = 0;
    std::uint64_t origin_fetches = 0;
    std::uint64_t sims_served = 0;
    std::uint64_t sims_pending = 0;
    std::uint64_t misbehavior_notices = 0;
    std::uint64_t bogus_notices = 0;
    std::uint64_t sim_subversions_detected = 0;
};

struct TrackerStats {
    std::uint64_t registrations_accepted = 0;
    std::uint64_t registrations_rejected = 0;
    std::uint64_t candidate_requests = 0;
    std::uint64_t heartbeats = 0;
    std::uint64_t blacklistings = 0;
    ImServiceStats im;
};

class Tracker : public Node {
  public:
    Tracker(std::string node_id, TrackerConfig config)
        : id_(std::move(node_id)), cfg_(std::move(config)) {}

    // --- provisioning (control plane, not wire traffic) ---------------------

    void add_account(CustomerAccount account) {
        accounts_[account.customer_id] = account;
        billing_[account.customer_id];  // materialize the row
    }

    // Declares a stream the provider delivers: its canonical manifest digest
    // and the owning customer. Token-mode video binding resolves through this
    // registry, so a peer cannot claim an arbitrary video id for a digest.
    void publish_stream(const std::string& video_id, const Digest256& digest,
                        const std::string& customer_id) {
        streams_[digest] = StreamInfo{video_id, customer_id};
    }

    const TrackerConfig& config() const { return cfg_; }
    const std::map<std::uint64_t, TrackerPeerRecord>& peers() const { return peers_; }
    const std::map<std::string, AccountBilling>& billing() const { return billing_; }
    const std::vector<AuthEvent>& auth_events() const { return auth_events_; }
    const TrackerStats& stats() const { return stats_; }

    bool is_blacklisted(std::uint64_t peer_id) const {
        auto it = peers_.find(peer_id);
        return it != peers_.end() && it->second.blacklisted;
    }
    std::vector<std::uint64_t> blacklisted_peers() const {
        std::vector<std::uint64_t> out;
        for (const auto& [pid, rec] : peers_)
            if (rec.blacklisted) out.push_back(pid);
        return out;
    }

    const TrackerPeerRecord* find_peer(std::uint64_t peer_id) const {
        auto it = peers_.find(peer_id);
        return it == peers_.end() ? nullptr : &it->second;
    }
    const TrackerPeerRecord* find_peer_by_node(const std::string& node_id) const {
        for (const auto& [pid, rec] : peers_)
            if (rec.node_id == node_id) return &rec;
        return nullptr;
    }

    // --- message plane -------------------------------------------------------

    void on_message(World& world, const std::string& from, const Message& msg) override {
        if (auto* m = msg.get_if<RegisterRequest>()) return handle_register(world, from, *m);
        if (auto* m = msg.get_if<CandidatesRequest>()) return handle_candidates(world, from, *m);
        if (auto* m = msg.get_if<Heartbeat>()) return handle_heartbeat(world, *m);
        if (auto* m = msg.get_if<UploadStats>()) return handle_upload_stats(*m);
        if (auto* m = msg.get_if<CdnIntent>()) return handle_intent(world, *m);
        if (auto* m = msg.get_if<ImReport>()) return handle_report(world, *m);
        if (auto* m = msg.get_if<SimRequest>()) return handle_sim_request(world, from, *m);
        if (auto* m = msg.get_if<MisbehaviorNotice>()) return handle_misbehavior(world, *m);
        if (auto* m = msg.get_if<CdnSegmentResponse>()) return handle_origin_reply(world, *m);
    }

    /**
     * Computes the candidate list for one requesting peer: every live,
     * non-blacklisted peer registered under the same manifest digest, passed
     * through the disclosure policy, shuffled with a per-(requester, round)
     * substream, and truncated to the policy's maximum. Exposed for direct
     * driving in tests; wire traffic goes through CandidatesRequest.
     */
    std::vector<CandidateEntry> compute_candidates(World& world, std::uint64_t requester_id) {
        auto it = peers_.find(requester_id);
        if (it == peers_.end() || it->second.blacklisted) return {};
        TrackerPeerRecord& req = it->second;

        std::vector<const TrackerPeerRecord*> pool;
        for (const auto& [pid, rec] : peers_) {
            if (pid == requester_id || rec.blacklisted) continue;
            if (rec.stream_digest != req.stream_digest) continue;
            if (rec.last_seen + cfg_.liveness_timeout_ms < world.now_ms()) continue;
            switch (cfg_.policy.kind) {
                case CandidatePolicyKind::same_country:
                    if (rec.country != req.country) continue;
                    break;
                case CandidatePolicyKind::same_isp:
                    if (rec.isp != req.isp) continue;
                    break;
                default: break;
            }
            pool.push_back(&rec);
        }
        // peers_ iteration is already peer_id ascending; shuffle from there.
        Rng& rng = world.rng("cand/" + std::to_string(requester_id) + "/" +
                             std::to_string(req.candidate_rounds++));
        std::vector<const TrackerPeerRecord*> shuffled = pool;
        rng.shuffle(shuffled);
        if (shuffled.size() > cfg_.policy.max_candidates)
            shuffled.resize(cfg_.policy.max_candidates);

        bool relay = cfg_.policy.kind == CandidatePolicyKind::relay_only;
        NetAddr relay_addr;
        if (relay && world.has_node(cfg_.relay_node_id))
            relay_addr = world.addr_of(cfg_.relay_node_id);
        std::vector<CandidateEntry> out;
        out.reserve(shuffled.size());
        for (const auto* rec : shuffled)
            out.push_back(CandidateEntry{rec->peer_id, relay ? relay_addr : rec->addr, relay});
        return out;
    }

    void blacklist_peer(std::uint64_t peer_id, const std::string& reason) {
        auto it = peers_.find(peer_id);
        if (it == peers_.end() || it->second.blacklisted) return;
        it->second.blacklisted = true;
        it->second.blacklist_reason = reason;
        ++stats_.blacklistings;
    }

    const UsageLedger& token_ledger() const { return token_ledger_; }

  private:
    struct StreamInfo {
        std::string video_id;
        std::string customer_id;
    };

    enum class ImPhase { collecting, awaiting_reports, resolving, authentic, conflicted };
    enum class OriginPurpose { none, conflict, audit, timeout_rescue };

    struct ImEntry {
        std::string video_id;
        std::uint32_t index = 0;
        ImPhase phase = ImPhase::collecting;
        std::vector<std::uint64_t> eligible;  // intent order
        std::set<std::uint64_t> eligible_set;
        std::vector<std::uint64_t> selected;  // draw order
        std::set<std::uint64_t> selected_set;
        std::map<std::uint64_t, Digest256> reports;
        std::optional<SignedIM> sim;
        bool origin_verified = false;  // sim digest confirmed against the origin
        OriginPurpose pending = OriginPurpose::none;
        std::vector<MisbehaviorNotice> queued_notices;
        std::set<std::string> seen_notices;
    };

    using ImKey = std::pair<std::string, std::uint32_t>;

    // --- registration --------------------------------------------------------

    void handle_register(World& world, const std::string& from, const RegisterRequest& req) {
        AuthEvent ev;
        ev.at_ms = world.now_ms();
        ev.mode = req.mode;
        ev.origin = req.origin;

        RegisterResponse resp;
        std::string customer;
        std::string resolved_video = req.video_id;
        std::string reason;

        if (req.mode == AuthMode::static_key) {
            const CustomerAccount* acct = account_by_key(req.api_key);
            if (!acct) {
                reason = "unknown_key";
            } else if (acct->whitelist_enabled && !acct->allowed_origins.count(req.origin)) {
                reason = "origin_rejected";
            } else {
                customer = acct->customer_id;
            }
        } else {
            auto tok = decode_token(req.token_compact);
            if (!tok) {
                reason = "token_malformed";
            } else {
                auto stream = streams_.find(req.manifest_digest);
                if (stream == streams_.end()) {
                    // Token-mode sessions exist only for published streams;
                    // an unlisted digest has no video to bind against.
                    reason = "unknown_stream";
                } else {
                    resolved_video = stream->second.video_id;
                    auto verdict = verify_token(*tok, world.now_ms() / 1000, resolved_video,
                                                token_secrets(), token_ledger_);
                    if (verdict.accepted)
                        customer = tok->claims.customer_id;
                    else
                        reason = to_string(verdict.reason);
                }
            }
        }

        if (customer.empty()) {
            ++stats_.registrations_rejected;
            ev.accepted = false;
            ev.reason = reason;
            auth_events_.push_back(ev);
            resp.ok = false;
            resp.reject_reason = reason;
            world.send(id_, from, resp);
            return;
        }

        if (req.mode == AuthMode::static_key) {
            // A published digest still resolves the video name for grouping
            // and billing; unpublished digests keep the peer's declaration.
            auto stream = streams_.find(req.manifest_digest);
            if (stream != streams_.end()) resolved_video = stream->second.video_id;
        }

        TrackerPeerRecord rec;
        rec.peer_id = next_peer_id_++;
        rec.node_id = from;
        rec.customer_id = customer;
        rec.video_id = resolved_video;
        rec.stream_digest = req.manifest_digest;
        rec.claimed_origin = req.origin;
        rec.addr = req.addr;
        rec.country = req.country;
        rec.isp = req.isp;
        rec.registered_at = world.now_ms();
        rec.last_seen = world.now_ms();
        peers_[rec.peer_id] = rec;

        ++billing_[customer].sessions;
        ++stats_.registrations_accepted;
        ev.accepted = true;
        ev.reason = "accepted";
        ev.customer_id = customer;
        auth_events_.push_back(ev);

        resp.ok = true;
        resp.peer_id = rec.peer_id;
        resp.sim_key = cfg_.im_enabled ? cfg_.sim_key : "";
        world.send(id_, from, resp);
    }

    const CustomerAccount* account_by_key(const std::string& api_key) const {
        for (const auto& [id, acct] : accounts_)
            if (acct.api_key == api_key) return &acct;
        return nullptr;
    }

    std::map<std::string, std::string> token_secrets() const {
        std::map<std::string, std::string> out;
        for (const auto& [id, acct] : accounts_)
            if (!acct.token_secret.empty()) out[id] = acct.token_secret;
        return out;
    }

    // --- swarm bookkeeping ----------------------------------------------------

    void handle_candidates(World& world, const std::string& from, const CandidatesRequest& req) {
        ++stats_.candidate_requests;
        CandidatesResponse resp;
        auto it = peers_.find(req.peer_id);
        if (it != peers_.end() && !it->second.blacklisted && it->second.node_id == from) {
            resp.ok = true;
            resp.entries = compute_candidates(world, req.peer_id);
        }
        world.send(id_, from, resp);
    }

    void handle_heartbeat(World& world, const Heartbeat& hb) {
        ++stats_.heartbeats;
        auto it = peers_.find(hb.peer_id);
        if (it != peers_.end()) it->second.last_seen = world.now_ms();
    }

    void handle_upload_stats(const UploadStats& up) {
        auto it = peers_.find(up.peer_id);
        if (it == peers_.end()) return;
        it->second.uploaded_bytes_reported += up.bytes;
        billing_[it->second.customer_id].p2p_bytes += up.bytes;
    }

    // --- integrity checking ----------------------------------------------------

    void handle_intent(World& world, const CdnIntent& intent) {
        if (!cfg_.im_enabled) return;
        auto rec = peers_.find(intent.peer_id);
        if (rec == peers_.end() || rec->second.blacklisted) return;
        if (rec->second.video_id != intent.video_id) return;
        ++stats_.im.intents;

        ImKey key{intent.video_id, intent.index};
        auto [it, created] = im_entries_.try_emplace(key);
        ImEntry& entry = it->second;
        if (created) {
            entry.video_id = intent.video_id;
            entry.index = intent.index;
        }
        if (entry.phase != ImPhase::collecting) return;  // selection already ran
        if (!entry.eligible_set.insert(intent.peer_id).second) return;
        entry.eligible.push_back(intent.peer_id);
        if (entry.eligible.size() == 1) {
            world.schedule(cfg_.selection_delay_ms,
                           "t:im_select:" + entry.video_id + "#" + std::to_string(entry.index),
                           [this, key](World& w) { run_selection(w, key); });
        }
    }

    void run_selection(World& world, const ImKey& key) {
        auto it = im_entries_.find(key);
        if (it == im_entries_.end()) return;
        ImEntry& entry = it->second;
        if (entry.phase != ImPhase::collecting) return;

        // Drop intenders that got blacklisted while the window was open.
        std::vector<std::uint64_t> pool;
        for (auto pid : entry.eligible)
            if (!is_blacklisted(pid)) pool.push_back(pid);
        if (pool.empty()) {
            im_entries_.erase(it);  // nobody left; next intent starts over
            return;
        }

        std::size_t k = std::min(cfg_.reporter_count, pool.size());
        Rng& rng = world.rng("reporters/" + entry.video_id + "#" + std::to_string(entry.index));
        for (auto idx : rng.sample_indices(pool.size(), k)) {
            entry.selected.push_back(pool[idx]);
            entry.selected_set.insert(pool[idx]);
        }
        entry.phase = ImPhase::awaiting_reports;
        ++stats_.im.selections;

        for (auto pid : entry.selected)
            world.send(id_, peers_[pid].node_id, ReporterNotice{entry.video_id, entry.index});
        world.schedule(cfg_.collect_timeout_ms,
                       "t:im_collect:" + entry.video_id + "#" + std::to_string(entry.index),
                       [this, key](World& w) { collect_deadline(w, key); });
    }

    void handle_report(World& world, const ImReport& report) {
        if (!cfg_.im_enabled) return;
        ImKey key{report.im.video_id, report.im.segment_index};
        auto it = im_entries_.find(key);
        if (it == im_entries_.end() || it->second.phase != ImPhase::awaiting_reports ||
            !it->second.selected_set.count(report.peer_id) ||
            it->second.reports.count(report.peer_id)) {
            ++stats_.im.unsolicited_reports;
            return;
        }
        ++stats_.im.reports;
        it->second.reports[report.peer_id] = report.im.digest;
        if (it->second.reports.size() == it->second.selected.size()) finalize(world, it->second);
    }

    void collect_deadline(World& world, const ImKey& key) {
        auto it = im_entries_.find(key);
        if (it == im_entries_.end() || it->second.phase != ImPhase::awaiting_reports) return;
        // Missing reports past the deadline: settle from the origin instead of
        // trusting a partial set.
        ++stats_.im.collect_timeouts;
        it->second.phase = ImPhase::resolving;
        it->second.pending = OriginPurpose::timeout_rescue;
        origin_fetch(world, it->second);
    }

    void finalize(World& world, ImEntry& entry) {
        bool unanimous = true;
        const Digest256& first = entry.reports.begin()->second;
        for (const auto& [pid, digest] : entry.reports) unanimous = unanimous && digest == first;

        if (unanimous) {
            IntegrityMetadata im;
            im.video_id = entry.video_id;
            im.segment_index = entry.index;
            im.digest = first;
            entry.sim = sign_im(cfg_.sim_key, im);
            entry.phase = ImPhase::authentic;
            ++stats_.im.agreements;
            flush_notices(world, entry);
            return;
        }
        ++stats_.im.conflicts;
        entry.phase = ImPhase::resolving;
        entry.pending = OriginPurpose::conflict;
        origin_fetch(world, entry);
    }

    void origin_fetch(World& world, ImEntry& entry) {
        ++stats_.im.origin_fetches;
        CdnSegmentRequest req;
        req.video_id = entry.video_id;
        req.index = entry.index;
        req.account = cfg_.tracker_account;
        world.send(id_, cfg_.origin_node_id, req);
    }

    void handle_origin_reply(World& world, const CdnSegmentResponse& resp) {
        ImKey key{resp.video_id, resp.index};
        auto it = im_entries_.find(key);
        if (it == im_entries_.end() || it->second.pending == OriginPurpose::none) return;
        ImEntry& entry = it->second;
        OriginPurpose purpose = entry.pending;
        entry.pending = OriginPurpose::none;
        if (!resp.found || !resp.payload) return;  // origin lost the asset; leave pending sims

        IntegrityMetadata origin_im = compute_im(*resp.payload, entry.video_id, entry.index);

        if (purpose == OriginPurpose::conflict || purpose == OriginPurpose::timeout_rescue) {
            entry.sim = sign_im(cfg_.sim_key, origin_im);
            entry.origin_verified = true;
            entry.phase = ImPhase::conflicted;
            for (const auto& [pid, digest] : entry.reports)
                if (digest != origin_im.digest)
                    blacklist_peer(pid, "false integrity report");
        } else if (purpose == OriginPurpose::audit) {
            entry.origin_verified = true;
            if (entry.sim && entry.sim->im.digest != origin_im.digest) {
                // The unanimous reporters subverted the record: re-settle it
                // from the origin and evict every reporter that vouched for
                // the wrong digest.
                ++stats_.im.sim_subversions_detected;
                entry.sim = sign_im(cfg_.sim_key, origin_im);
                entry.phase = ImPhase::conflicted;
                for (const auto& [pid, digest] : entry.reports)
                    if (digest != origin_im.digest)
                        blacklist_peer(pid, "false integrity report");
            }
        }
        flush_notices(world, entry);
    }

    void handle_sim_request(World& world, const std::string& from, const SimRequest& req) {
        SimResponse resp;
        resp.video_id = req.video_id;
        resp.index = req.index;
        auto it = im_entries_.find(ImKey{req.video_id, req.index});
        if (it == im_entries_.end()) {
            resp.status = SimStatus::unknown;
        } else if (it->second.sim.has_value()) {
            resp.status = SimStatus::ready;
            resp.sim = *it->second.sim;
            ++stats_.im.sims_served;
        } else {
            resp.status = SimStatus::pending;
            ++stats_.im.sims_pending;
        }
        world.send(id_, from, resp);
    }

    void handle_misbehavior(World& world, const MisbehaviorNotice& notice) {
        if (!cfg_.im_enabled) return;
        auto it = im_entries_.find(ImKey{notice.video_id, notice.index});
        if (it == im_entries_.end()) return;
        ImEntry& entry = it->second;
        std::string dedup = std::to_string(notice.reporter_peer_id) + ">" +
                            std::to_string(notice.accused_peer_id);
        if (!entry.seen_notices.insert(dedup).second) return;
        ++stats_.im.misbehavior_notices;
        entry.queued_notices.push_back(notice);

        if (!entry.sim.has_value()) return;  // adjudicate once the record settles
        if (entry.origin_verified) {
            flush_notices(world, entry);
        } else if (entry.pending == OriginPurpose::none) {
            // A complaint against an unaudited record: confirm the record
            // itself before trusting it to convict anyone.
            entry.pending = OriginPurpose::audit;
            origin_fetch(world, entry);
        }
    }

    // Settles queued complaints once the record is origin-verified: anyone
    // who served bytes that disagree with the confirmed record is evicted.
    void flush_notices(World&, ImEntry& entry) {
        if (!entry.sim.has_value() || !entry.origin_verified) return;
        std::vector<MisbehaviorNotice> pending;
        pending.swap(entry.queued_notices);
        for (const auto& n : pending) {
            if (n.observed_digest != entry.sim->im.digest)
                blacklist_peer(n.accused_peer_id, "served bytes conflicting with signed record");
            else
                ++stats_.im.bogus_notices;
        }
    }

    std::string id_;
    TrackerConfig cfg_;
    std::map<std::string, CustomerAccount> accounts_;
    std::map<std::string, AccountBilling> billing_;
    std::map<Digest256, StreamInfo> streams_;
    std::map<std::uint64_t, TrackerPeerRecord> peers_;
    std::uint64_t next_peer_id_ = 1;
    std::map<ImKey, ImEntry> im_entries_;
    UsageLedger token_ledger_;
    std::vector<AuthEvent> auth_events_;
    TrackerStats stats_;
};

// ============================================================================
// Relay: provider-operated forwarding for address-hiding candidate policies
// ============================================================================

// Forwards peer-to-peer envelopes by peer id and scrubs transport addresses
// from the forwarded payload, so neither side learns the other's endpoint.
class RelayNode : public Node {
  public:
    RelayNode(std::string node_id, const Tracker* tracker)
        : id_(std::move(node_id)), tracker_(tracker) {}

    std::uint64_t relayed_messages() const { return relayed_; }
    std::uint64_t relayed_bytes() const { return relayed_bytes_; }
    std::uint64_t dropped() const { return dropped_; }

    void on_message(World& world, const std::string&, const Message& msg) override {
        auto* env = msg.get_if<RelayEnvelope>();
        if (!env || !env->inner) return;
        const TrackerPeerRecord* target = tracker_->find_peer(env->to_peer_id);
        if (!target || target->blacklisted || !world.has_node(target->node_id)) {
            ++dropped_;
            return;
        }
        ++relayed_;
        relayed_bytes_ += wire_size(*env->inner);

        Message scrubbed = scrub(world, *env->inner);
        RelayEnvelope fwd;
        fwd.to_peer_id = env->to_peer_id;
        fwd.from_peer_id = env->from_peer_id;
        fwd.inner = std::make_shared<const Message>(std::move(scrubbed));
        world.send(id_, target->node_id, fwd);
    }

  private:
    // Any transport address a peer embedded in its payload is replaced with
    // the relay's own, which is all the counterpart may learn.
    Message scrub(World& world, const Message& inner) const {
        NetAddr self = world.addr_of(id_);
        Message out = inner;
        if (auto* b = std::get_if<BindingRequest>(&out.v)) b->from_addr = self;
        if (auto* b = std::get_if<BindingResponse>(&out.v)) b->from_addr = self;
        if (auto* s = std::get_if<SegmentRequest>(&out.v)) s->from_addr = self;
        return out;
    }

    std::string id_;
    const Tracker* tracker_;
    std::uint64_t relayed_ = 0;
    std::uint64_t relayed_bytes_ = 0;
    std::uint64_t dropped_ = 0;
};

}  // namespace pdnsim
