#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pdnsim/config.hpp"
#include "pdnsim/report.hpp"

namespace pdnsim {

// ============================================================================
// Scenarios
//
// Each scenario assembles one or more worlds (one per labeled sub-run), runs
// them to a horizon, and reports per-peer tables plus scenario-specific
// measurements. Sub-run seeds are derived from the root seed and the label,
// so runs are independent of each other and reproducible in isolation.
// ============================================================================

namespace scen {

constexpr const char* kCustomer = "site.example";
constexpr const char* kApiKey = "static-api-key-1";
constexpr const char* kTokenSecret = "tracker-token-secret";
constexpr const char* kOriginUrl = "https://site.example";

inline VideoAsset scenario_video(const Config& cfg, const std::string& video_id = "vid://stream",
                                 std::uint64_t seed_bump = 0) {
    return build_video(video_id, cfg.u64("video", "duration_ms"), cfg.u64("video", "segment_ms"),
                       cfg.u64("video", "generation_seed") + seed_bump,
                       cfg.u64("video", "bytes_per_second"));
}

// One sub-run's deployment: infrastructure plus the cast of peers.
struct Stage {
    World world;
    Tracker tracker;
    Origin origin;
    StunServer stun;
    std::unique_ptr<RelayNode> relay;
    VideoAsset asset;
    std::vector<std::unique_ptr<Peer>> peers;
    std::uint32_t next_host = 1;

    Stage(std::uint64_t seed, TrackerConfig tcfg, VideoAsset video, bool whitelist = false)
        : world(seed), tracker("tracker", std::move(tcfg)), origin("origin"),
          asset(std::move(video)) {
        world.register_node("tracker", &tracker, NetAddr{0x01000001, 443, "", ""},
                            LinkModel{5, 1250000000}, NodeKind::tracker);
        world.register_node("origin", &origin, NetAddr{0x01000002, 443, "", ""},
                            LinkModel{5, 1250000000}, NodeKind::origin);
        world.register_node("stun", &stun, NetAddr{0x01000003, 3478, "", ""},
                            LinkModel{5, 1250000000}, NodeKind::stun);
        CustomerAccount acct;
        acct.customer_id = kCustomer;
        acct.api_key = kApiKey;
        acct.token_secret = kTokenSecret;
        acct.whitelist_enabled = whitelist;
        if (whitelist) acct.allowed_origins = {kOriginUrl};
        tracker.add_account(acct);
        tracker.publish_stream(asset.video_id, asset.stream_digest, kCustomer);
        origin.register_asset(asset, kCustomer);
    }

    void add_relay() {
        relay = std::make_unique<RelayNode>("relay", &tracker);
        world.register_node("relay", relay.get(), NetAddr{0x01000004, 3479, "", ""},
                            LinkModel{5, 1250000000}, NodeKind::relay);
    }

    PeerSetup setup(const std::string& node_id, std::uint64_t join_at) const {
        PeerSetup s;
        s.node_id = node_id;
        s.video_id = asset.video_id;
        s.site_account = kCustomer;
        s.claimed_origin = kOriginUrl;
        s.api_key = kApiKey;
        s.join_at_ms = join_at;
        return s;
    }

    Peer& add(PeerSetup s) {
        peers.push_back(std::make_unique<Peer>(std::move(s)));
        Peer& p = *peers.back();
        NetAddr addr;
        addr.ip = 0x0a000000u | next_host++;
        addr.port = 40000;
        world.register_node(p.setup().node_id, &p, addr, LinkModel{10, 12500000},
                            NodeKind::peer);
        p.start(world);
        return p;
    }

    Peer* find(const std::string& node_id) {
        for (auto& p : peers)
            if (p->setup().node_id == node_id) return p.get();
        return nullptr;
    }

    json finish(std::uint64_t run_ms, json extras = json::object()) {
        world.run_until(run_ms);
        json rows = json::array();
        for (auto& p : peers) rows.push_back(peer_row(world, *p));
        json run;
        run["peers"] = rows;
        run["totals"] = peer_totals(rows);
        run["world"] = world_section(world);
        run["tracker"] = tracker_section(tracker);
        run["origin"] = origin_section(origin);
        if (relay) {
            run["relay"]["messages"] = relay->relayed_messages();
            run["relay"]["bytes"] = relay->relayed_bytes();
            run["relay"]["dropped"] = relay->dropped();
        }
        for (auto& [k, v] : extras.items()) run[k] = v;
        return run;
    }
};

inline std::uint64_t run_seed(std::uint64_t root, const std::string& label) {
    return substream_seed(root, "run/" + label);
}

inline TrackerConfig defended_tracker(const Config& cfg) {
    TrackerConfig t;
    t.im_enabled = true;
    t.reporter_count = static_cast<std::uint32_t>(cfg.u64("defense", "reporters"));
    t.selection_delay_ms = cfg.u64("defense", "selection_delay_ms");
    return t;
}

// ----------------------------------------------------------------------------
// free_riding: a stolen publisher credential lets an unrelated site run its
// own swarm on the victim's tracker account, in static-key mode even with an
// origin whitelist (the client names its own origin); per-session tokens
// close the hole.
// ----------------------------------------------------------------------------

inline json run_free_riding(const Config& cfg, std::uint64_t seed) {
    std::uint64_t run_ms = cfg.u64("run", "duration_ms");
    std::uint64_t audience = cfg.u64("attack", "audience");

    auto pirate_video = [&] { return scenario_video(cfg, "vid://pirate", 16); };

    auto freerider = [&](Stage& st, const std::string& id, std::uint64_t at,
                         const VideoAsset& pirate, const std::string& claimed) {
        PeerSetup s = st.setup(id, at);
        s.video_id = pirate.video_id;
        s.site_account = "freerider.example";
        s.claimed_origin = claimed;
        s.behavior.role = PeerRole::free_rider;
        return s;
    };

    json runs;

    {
        Stage st(run_seed(seed, "whitelist_off"), TrackerConfig{}, scenario_video(cfg));
        VideoAsset pirate = pirate_video();
        st.origin.register_asset(pirate, "freerider.example");
        for (std::uint64_t i = 0; i < audience; ++i)
            st.add(freerider(st, "fr" + std::to_string(i), 3000 * i, pirate,
                             "https://freerider.example"));
        runs["whitelist_off"] = st.finish(run_ms);
    }

    {
        Stage st(run_seed(seed, "whitelist_on_spoof"), TrackerConfig{}, scenario_video(cfg),
                 /*whitelist=*/true);
        VideoAsset pirate = pirate_video();
        st.origin.register_asset(pirate, "freerider.example");
        // Spoofers claim the victim's origin string and sail through; only
        // the one client that tells the truth is turned away.
        for (std::uint64_t i = 0; i < audience; ++i)
            st.add(freerider(st, "fr" + std::to_string(i), 3000 * i, pirate, kOriginUrl));
        st.add(freerider(st, "fr_honest_origin", 1500, pirate, "https://freerider.example"));
        runs["whitelist_on_spoof"] = st.finish(run_ms);
    }

    {
        TrackerConfig tcfg;
        tcfg.auth_mode = AuthMode::token;
        Stage st(run_seed(seed, "token_mode"), tcfg, scenario_video(cfg));
        VideoAsset pirate = pirate_video();
        st.origin.register_asset(pirate, "freerider.example");

        AccessToken claims;
        claims.customer_id = kCustomer;
        claims.pdn_peer_id = "stolen-session";
        claims.video_ids = {st.asset.video_id};
        claims.timestamp = 0;
        claims.ttl = 86400;
        claims.usage_limit = 1;
        std::string stolen = encode_token(issue_token(kTokenSecret, claims));

        for (std::uint64_t i = 0; i < audience; ++i) {
            PeerSetup s = freerider(st, "fr" + std::to_string(i), 3000 * i, pirate, kOriginUrl);
            s.auth_mode = AuthMode::token;
            s.api_key.clear();
            s.token_compact = stolen;
            st.add(std::move(s));
        }
        AccessToken own = claims;
        own.pdn_peer_id = "viewer";
        PeerSetup legit = st.setup("viewer", 1000);
        legit.auth_mode = AuthMode::token;
        legit.api_key.clear();
        legit.token_compact = encode_token(issue_token(kTokenSecret, own));
        st.add(std::move(legit));
        runs["token_mode"] = st.finish(run_ms);
    }

    json summary;
    for (const auto& [label, run] : runs.items()) {
        std::uint64_t admitted = 0;
        for (const auto& row : run.at("peers"))
            if (row.at("role") == "free_rider" && row.at("registered").get<bool>()) ++admitted;
        summary[label]["freeriders_admitted"] = admitted;
        summary[label]["victim_sessions"] =
            run.at("tracker").at("billing").at(kCustomer).at("sessions");
        summary[label]["victim_p2p_bytes"] =
            run.at("tracker").at("billing").at(kCustomer).at("p2p_bytes");
        const json& accounts = run.at("origin").at("by_account");
        summary[label]["victim_cdn_bytes"] =
            accounts.contains(kCustomer) ? accounts.at(kCustomer).at("bytes") : json(0);
    }
    return json{{"runs", runs}, {"summary", summary}};
}

// ----------------------------------------------------------------------------
// naive_pollution: an attacker who rewrites the playlist changes the stream
// identity the tracker groups sessions by, and lands alone in its own swarm
// under every candidate policy.
// ----------------------------------------------------------------------------

inline json run_naive_pollution(const Config& cfg, std::uint64_t seed) {
    std::uint64_t run_ms = cfg.u64("run", "duration_ms");
    std::uint64_t honest = cfg.u64("audience", "honest");

    json runs;
    std::vector<std::unique_ptr<VideoAsset>> altered_assets;

    for (CandidatePolicyKind kind :
         {CandidatePolicyKind::unrestricted, CandidatePolicyKind::same_country,
          CandidatePolicyKind::same_isp, CandidatePolicyKind::relay_only}) {
        std::string label = to_string(kind);
        TrackerConfig tcfg;
        tcfg.policy.kind = kind;
        Stage st(run_seed(seed, label), tcfg, scenario_video(cfg));
        if (kind == CandidatePolicyKind::relay_only) st.add_relay();

        altered_assets.push_back(std::make_unique<VideoAsset>(st.asset));
        VideoAsset& altered = *altered_assets.back();
        std::swap(altered.manifest.entries[0], altered.manifest.entries[1]);
        std::swap(altered.segments[0], altered.segments[1]);
        altered.stream_digest = manifest_digest(altered.manifest);

        st.add(st.setup("seeder", 0));
        PeerSetup naive = st.setup("naive", 2000);
        naive.behavior.role = PeerRole::naive_polluter;
        naive.local_asset = &altered;
        naive.manifest_from_origin = false;
        st.add(std::move(naive));
        for (std::uint64_t i = 0; i < honest; ++i)
            st.add(st.setup("viewer" + std::to_string(i), 6000 + 4000 * i));

        json extras;
        st.world.run_until(run_ms);
        const Peer* np = st.find("naive");
        extras["polluter_p2p_segments"] = np->stats().segments_from_p2p;
        extras["polluter_segments_served"] = np->stats().segments_served;
        std::uint64_t infected = 0;
        for (auto& p : st.peers) {
            if (p->setup().behavior.role != PeerRole::honest) continue;
            for (std::uint32_t i = 0; i < st.asset.segment_count(); ++i)
                if (p->has_segment(i) &&
                    p->cached_digest(i) != st.asset.segments[i].content_digest) {
                    ++infected;
                    break;
                }
        }
        extras["honest_infected"] = infected;
        runs[label] = st.finish(run_ms, extras);
    }

    json summary;
    for (const auto& [label, run] : runs.items()) {
        summary[label]["polluter_p2p_segments"] = run.at("polluter_p2p_segments");
        summary[label]["polluter_segments_served"] = run.at("polluter_segments_served");
        summary[label]["honest_infected"] = run.at("honest_infected");
    }
    return json{{"runs", runs}, {"summary", summary}};
}

// ----------------------------------------------------------------------------
// segment_pollution: the attacker keeps the playlist intact and swaps payload
// bytes on chosen segments. Without verification every viewer takes and
// plays them; with signed integrity records viewers discard the bytes,
// refetch from the CDN, and the tracker bans the source.
// ----------------------------------------------------------------------------

inline std::vector<std::uint32_t> target_list(const Config& cfg) {
    std::vector<std::uint32_t> targets;
    for (const auto& t : cfg.at("attack").at("targets")) targets.push_back(t.get<std::uint32_t>());
    return targets;
}

inline json run_segment_pollution(const Config& cfg, std::uint64_t seed) {
    std::uint64_t run_ms = cfg.u64("run", "duration_ms");
    std::uint64_t viewers = cfg.u64("audience", "viewers");
    PollutionSpec spec{target_list(cfg), cfg.u64("attack", "pollution_seed")};

    json runs;
    std::vector<std::unique_ptr<VideoAsset>> polluted_assets;

    for (bool defended : {false, true}) {
        std::string label = defended ? "defense_on" : "defense_off";
        TrackerConfig tcfg = defended ? defended_tracker(cfg) : TrackerConfig{};
        Stage st(run_seed(seed, label), tcfg, scenario_video(cfg));
        polluted_assets.push_back(std::make_unique<VideoAsset>(pollute(st.asset, spec)));
        const VideoAsset& polluted = *polluted_assets.back();

        // The only honest cache refuses uploads (cellular leech), so peer
        // transfers are forced through the polluter: the undefended worst
        // case, and the defended run's proof that verification heals it.
        PeerSetup seeder = st.setup("seeder", 0);
        seeder.behavior.network = NetworkType::cellular;
        seeder.behavior.cellular_mode = CellularMode::leech;
        st.add(std::move(seeder));

        PeerSetup bad = st.setup("polluter", 3000);
        bad.behavior.role = PeerRole::polluter;
        bad.local_asset = &polluted;
        st.add(std::move(bad));

        for (std::uint64_t i = 0; i < viewers; ++i) {
            PeerSetup v = st.setup("viewer" + std::to_string(i), 10000 + 4000 * i);
            v.behavior.defense_enabled = defended;
            st.add(std::move(v));
        }

        st.world.run_until(run_ms);
        std::uint64_t infected = 0, polluted_played = 0;
        for (auto& p : st.peers) {
            if (p->setup().behavior.role != PeerRole::honest) continue;
            bool hit = false;
            for (std::uint32_t t : spec.target_indices) {
                if (p->has_segment(t) &&
                    p->cached_digest(t) == polluted.segments[t].content_digest)
                    hit = true;
                for (const Digest256& d : p->playback_log())
                    if (d == polluted.segments[t].content_digest) ++polluted_played;
            }
            if (hit) ++infected;
        }
        json extras;
        extras["infected_peers"] = infected;
        extras["polluted_segments_played"] = polluted_played;
        runs[label] = st.finish(run_ms, extras);
    }

    json summary;
    for (const auto& [label, run] : runs.items()) {
        summary[label]["infected_peers"] = run.at("infected_peers");
        summary[label]["polluted_segments_played"] = run.at("polluted_segments_played");
        summary[label]["blacklistings"] = run.at("tracker").at("blacklistings");
        summary[label]["origin_fetches"] = run.at("tracker").at("im").at("origin_fetches");
    }
    return json{{"runs", runs}, {"summary", summary}};
}

// ----------------------------------------------------------------------------
// pollution_propagation: how far tampered segments travel through honest
// caches over time, with and without verification.
// ----------------------------------------------------------------------------

inline json run_pollution_propagation(const Config& cfg, std::uint64_t seed) {
    std::uint64_t run_ms = cfg.u64("run", "duration_ms");
    std::uint64_t sample_ms = cfg.u64("run", "sample_ms");
    std::uint64_t viewers = cfg.u64("audience", "viewers");
    PollutionSpec spec{target_list(cfg), cfg.u64("attack", "pollution_seed")};

    json runs;
    std::vector<std::unique_ptr<VideoAsset>> polluted_assets;

    for (bool defended : {false, true}) {
        std::string label = defended ? "defense_on" : "defense_off";
        TrackerConfig tcfg = defended ? defended_tracker(cfg) : TrackerConfig{};
        Stage st(run_seed(seed, label), tcfg, scenario_video(cfg));
        polluted_assets.push_back(std::make_unique<VideoAsset>(pollute(st.asset, spec)));
        const VideoAsset& polluted = *polluted_assets.back();

        PeerSetup seeder = st.setup("seeder", 0);
        seeder.behavior.network = NetworkType::cellular;
        seeder.behavior.cellular_mode = CellularMode::leech;
        st.add(std::move(seeder));

        PeerSetup bad = st.setup("polluter", 3000);
        bad.behavior.role = PeerRole::polluter;
        bad.local_asset = &polluted;
        st.add(std::move(bad));

        for (std::uint64_t i = 0; i < viewers; ++i) {
            PeerSetup v = st.setup("viewer" + std::to_string(i), 8000 + 6000 * i);
            v.behavior.defense_enabled = defended;
            st.add(std::move(v));
        }

        auto infected_now = [&st, &polluted, &spec] {
            std::uint64_t n = 0;
            for (auto& p : st.peers) {
                if (p->setup().behavior.role != PeerRole::honest) continue;
                for (std::uint32_t t : spec.target_indices)
                    if (p->has_segment(t) &&
                        p->cached_digest(t) == polluted.segments[t].content_digest) {
                        ++n;
                        break;
                    }
            }
            return n;
        };

        auto curve = std::make_shared<json>(json::array());
        std::function<void(World&)> sampler = [&, curve, infected_now,
                                               sample_ms](World& w) mutable {
            json point;
            point["t_ms"] = w.now_ms();
            point["infected"] = infected_now();
            curve->push_back(point);
            w.schedule(sample_ms, "t:sample", sampler);
        };
        st.world.schedule(sample_ms, "t:sample", sampler);

        st.world.run_until(run_ms);
        json extras;
        extras["infected_curve"] = *curve;
        extras["infected_final"] = infected_now();
        runs[label] = st.finish(run_ms, extras);
    }

    json summary;
    for (const auto& [label, run] : runs.items()) {
        summary[label]["infected_final"] = run.at("infected_final");
        summary[label]["samples"] = run.at("infected_curve").size();
    }
    return json{{"runs", runs}, {"summary", summary}};
}

// ----------------------------------------------------------------------------
// ip_leak: an idle client joins, asks for candidates, and counts the peer
// addresses the tracker hands it under each disclosure policy.
// ----------------------------------------------------------------------------

inline json run_ip_leak(const Config& cfg, std::uint64_t seed) {
    std::uint64_t run_ms = cfg.u64("run", "duration_ms");
    std::uint64_t swarm = cfg.u64("swarm", "peers");
    std::uint64_t same_country = cfg.u64("swarm", "same_country_as_harvester");
    std::uint64_t max_candidates = cfg.u64("policy", "max_candidates");

    static const char* kCountries[] = {"CA", "DE", "FR", "JP", "BR"};
    static const char* kHomeIsps[] = {"ispA", "ispB", "ispC", "ispD"};
    static const char* kAwayIsps[] = {"ispE", "ispF", "ispG", "ispH"};

    json roster;
    json runs;
    for (CandidatePolicyKind kind :
         {CandidatePolicyKind::unrestricted, CandidatePolicyKind::same_country,
          CandidatePolicyKind::same_isp, CandidatePolicyKind::relay_only}) {
        std::string label = to_string(kind);
        TrackerConfig tcfg;
        tcfg.policy.kind = kind;
        tcfg.policy.max_candidates = static_cast<std::uint32_t>(max_candidates);
        Stage st(run_seed(seed, label), tcfg, scenario_video(cfg));
        if (kind == CandidatePolicyKind::relay_only) st.add_relay();

        json by_country = json::object();
        json by_isp = json::object();
        for (std::uint64_t i = 0; i < swarm; ++i) {
            PeerSetup v = st.setup("viewer" + std::to_string(i), 250 * i);
            if (i < same_country) {
                v.country = "US";
                v.isp = kHomeIsps[i % 4];
            } else {
                v.country = kCountries[(i - same_country) % 5];
                v.isp = kAwayIsps[(i - same_country) % 4];
            }
            v.behavior.playback = false;
            by_country[v.country] = by_country.value(v.country, 0) + 1;
            by_isp[v.isp] = by_isp.value(v.isp, 0) + 1;
            st.add(std::move(v));
        }
        roster = json{{"by_country", by_country}, {"by_isp", by_isp}};

        PeerSetup h = st.setup("lurker", 30000);
        h.behavior.role = PeerRole::harvester;
        h.behavior.playback = false;
        h.country = "US";
        h.isp = "ispA";
        Peer& harvester = st.add(std::move(h));

        st.world.run_until(run_ms);
        json extras;
        extras["harvested_peer_addrs"] = count_observed_peer_addrs(st.world, harvester);
        extras["harvested_total_addrs"] = harvester.observed_addrs().size();
        runs[label] = st.finish(run_ms, extras);
    }

    json summary;
    summary["roster"] = roster;
    for (const auto& [label, run] : runs.items())
        summary[label]["harvested_peer_addrs"] = run.at("harvested_peer_addrs");
    return json{{"runs", runs}, {"summary", summary}};
}

// ----------------------------------------------------------------------------
// resource_accounting: who pays in bandwidth. Seeder upload grows with every
// freeloading leecher; cellular policy decides whether a mobile viewer
// spends its data plan on uploads, downloads only, or stays off the swarm.
// ----------------------------------------------------------------------------

inline json run_resource_accounting(const Config& cfg, std::uint64_t seed) {
    std::uint64_t run_ms = cfg.u64("run", "duration_ms");

    json runs;

    auto leecher_world = [&](std::uint64_t count) {
        Stage st(run_seed(seed, "leechers_" + std::to_string(count)), TrackerConfig{},
                 scenario_video(cfg));
        st.add(st.setup("seeder", 0));
        for (std::uint64_t i = 0; i < count; ++i) {
            PeerSetup l = st.setup("leecher" + std::to_string(i), 10000 * (i + 1));
            l.behavior.network = NetworkType::cellular;
            l.behavior.cellular_mode = CellularMode::leech;
            st.add(std::move(l));
        }
        return st.finish(run_ms);
    };

    {
        Stage st(run_seed(seed, "solo"), TrackerConfig{}, scenario_video(cfg));
        st.add(st.setup("seeder", 0));
        runs["solo"] = st.finish(run_ms);
    }
    runs["leechers_1"] = leecher_world(1);
    runs["leechers_2"] = leecher_world(2);
    runs["leechers_3"] = leecher_world(3);

    {
        Stage st(run_seed(seed, "cellular_leech"), TrackerConfig{}, scenario_video(cfg));
        st.add(st.setup("seeder", 0));
        PeerSetup cell = st.setup("cell", 10000);
        cell.behavior.network = NetworkType::cellular;
        cell.behavior.cellular_mode = CellularMode::leech;
        st.add(std::move(cell));
        st.add(st.setup("viewer", 20000));
        runs["cellular_leech"] = st.finish(run_ms);
    }
    {
        Stage st(run_seed(seed, "cellular_full"), TrackerConfig{}, scenario_video(cfg));
        PeerSetup cell = st.setup("cell", 0);
        cell.behavior.network = NetworkType::cellular;
        cell.behavior.cellular_mode = CellularMode::full;
        st.add(std::move(cell));
        st.add(st.setup("viewer", 10000));
        runs["cellular_full"] = st.finish(run_ms);
    }
    {
        Stage st(run_seed(seed, "cellular_disable"), TrackerConfig{}, scenario_video(cfg));
        st.add(st.setup("seeder", 0));
        PeerSetup cell = st.setup("cell", 10000);
        cell.behavior.network = NetworkType::cellular;
        cell.behavior.cellular_mode = CellularMode::disable;
        st.add(std::move(cell));
        runs["cellular_disable"] = st.finish(run_ms);
    }
    {
        Stage st(run_seed(seed, "deployment_40"), TrackerConfig{}, scenario_video(cfg));
        std::uint64_t crowd = cfg.u64("audience", "deployment_crowd");
        for (std::uint64_t i = 0; i < crowd; ++i) {
            PeerSetup v = st.setup("viewer" + std::to_string(i), 2000 * i);
            v.behavior.deployment_pct = cfg.dbl("audience", "deployment_pct");
            st.add(std::move(v));
        }
        st.world.run_until(run_ms);
        std::uint64_t joined = 0;
        for (auto& p : st.peers)
            if (p->mode() == SessionMode::p2p) ++joined;
        json extras;
        extras["deployment"] = {{"eligible", crowd},
                                {"joined_p2p", joined},
                                {"fraction", static_cast<double>(joined) / crowd}};
        runs["deployment_40"] = st.finish(run_ms, extras);
    }

    auto seeder_upload = [&](const std::string& label) {
        for (const auto& row : runs.at(label).at("peers"))
            if (row.at("node") == "seeder") return row.at("up_p2p_bytes").get<std::uint64_t>();
        return std::uint64_t{0};
    };
    auto cell_row = [&](const std::string& label) -> json {
        for (const auto& row : runs.at(label).at("peers"))
            if (row.at("node") == "cell")
                return json{{"down_cdn_bytes", row.at("down_cdn_bytes")},
                            {"down_p2p_bytes", row.at("down_p2p_bytes")},
                            {"up_p2p_bytes", row.at("up_p2p_bytes")},
                            {"registered", row.at("registered")}};
        return json();
    };

    json summary;
    summary["seeder_upload_bytes"] = {{"solo", seeder_upload("solo")},
                                      {"leechers_1", seeder_upload("leechers_1")},
                                      {"leechers_2", seeder_upload("leechers_2")},
                                      {"leechers_3", seeder_upload("leechers_3")}};
    summary["offload_leechers_3"] = runs.at("leechers_3").at("totals").at("offload_ratio");
    summary["cellular"] = {{"leech", cell_row("cellular_leech")},
                           {"full", cell_row("cellular_full")},
                           {"disable", cell_row("cellular_disable")}};
    summary["deployment"] = runs.at("deployment_40").at("deployment");
    return json{{"runs", runs}, {"summary", summary}};
}

// ----------------------------------------------------------------------------
// im_overhead: what the verification machinery costs. Same cast twice; the
// added delivery latency is the difference of the mean samples.
// ----------------------------------------------------------------------------

inline json run_im_overhead(const Config& cfg, std::uint64_t seed) {
    std::uint64_t run_ms = cfg.u64("run", "duration_ms");
    std::uint64_t senders = cfg.u64("audience", "senders");
    std::uint64_t receivers = cfg.u64("audience", "receivers");
    std::uint64_t receivers_join_ms = cfg.u64("audience", "receivers_join_ms");

    json runs;
    for (bool defended : {false, true}) {
        std::string label = defended ? "im_on" : "im_off";
        TrackerConfig tcfg = defended ? defended_tracker(cfg) : TrackerConfig{};
        Stage st(run_seed(seed, label), tcfg, scenario_video(cfg));

        for (std::uint64_t i = 0; i < senders; ++i)
            st.add(st.setup("sender" + std::to_string(i), 100 * i));
        for (std::uint64_t i = 0; i < receivers; ++i) {
            PeerSetup r = st.setup("receiver" + std::to_string(i), receivers_join_ms + 1000 * i);
            r.behavior.defense_enabled = defended;
            st.add(std::move(r));
        }

        st.world.run_until(run_ms);
        std::vector<std::uint64_t> samples;
        json per_receiver = json::array();
        for (auto& p : st.peers) {
            if (p->setup().node_id.rfind("receiver", 0) != 0) continue;
            std::vector<std::uint64_t> s = p->stats().p2p_latency_samples_ms;
            const auto& c = p->stats().cdn_latency_samples_ms;
            s.insert(s.end(), c.begin(), c.end());
            samples.insert(samples.end(), s.begin(), s.end());
            per_receiver.push_back(json{{"node", p->setup().node_id},
                                        {"count", s.size()},
                                        {"mean_ms", mean_of(s)}});
        }
        json extras;
        extras["receiver_latency"] = {{"count", samples.size()},
                                      {"mean_ms", mean_of(samples)},
                                      {"per_receiver", per_receiver}};
        runs[label] = st.finish(run_ms, extras);
    }

    double off = runs.at("im_off").at("receiver_latency").at("mean_ms").get<double>();
    double on = runs.at("im_on").at("receiver_latency").at("mean_ms").get<double>();
    json summary;
    summary["mean_latency_ms"] = {{"im_off", off}, {"im_on", on}};
    summary["added_latency_ms"] = on - off;
    summary["samples"] = {
        {"im_off", runs.at("im_off").at("receiver_latency").at("count")},
        {"im_on", runs.at("im_on").at("receiver_latency").at("count")}};
    summary["im_messages"] = {
        {"intents", runs.at("im_on").at("tracker").at("im").at("intents")},
        {"reports", runs.at("im_on").at("tracker").at("im").at("reports")},
        {"sims_served", runs.at("im_on").at("tracker").at("im").at("sims_served")}};
    return json{{"runs", runs}, {"summary", summary}};
}

// ----------------------------------------------------------------------------
// token_auth: the disposable-token flow end to end in one world: accept,
// replay, expiry, video binding, tampering, unknown customer.
// ----------------------------------------------------------------------------

inline json run_token_auth(const Config& cfg, std::uint64_t seed) {
    std::uint64_t run_ms = cfg.u64("run", "duration_ms");
    TrackerConfig tcfg;
    tcfg.auth_mode = AuthMode::token;
    Stage st(run_seed(seed, "token_mode"), tcfg, scenario_video(cfg));

    AccessToken base;
    base.customer_id = kCustomer;
    base.video_ids = {st.asset.video_id};
    base.timestamp = 0;
    base.ttl = 3600;
    base.usage_limit = 1;

    auto with = [&](const std::string& session) {
        AccessToken t = base;
        t.pdn_peer_id = session;
        return t;
    };
    auto tokenized = [&](const std::string& id, std::uint64_t at, const std::string& compact) {
        PeerSetup s = st.setup(id, at);
        s.auth_mode = AuthMode::token;
        s.api_key.clear();
        s.token_compact = compact;
        return s;
    };

    std::string alice_token = encode_token(issue_token(kTokenSecret, with("alice")));
    st.add(tokenized("alice", 0, alice_token));
    st.add(tokenized("mallory_replay", 2000, alice_token));
    st.add(tokenized("bob", 4000, encode_token(issue_token(kTokenSecret, with("bob")))));

    AccessToken expired = with("carol");
    expired.ttl = 1;
    st.add(tokenized("carol_expired", 8000, encode_token(issue_token(kTokenSecret, expired))));

    AccessToken wrong_video = with("dave");
    wrong_video.video_ids = {"vid://some-other-stream"};
    st.add(
        tokenized("dave_wrong_video", 10000, encode_token(issue_token(kTokenSecret, wrong_video))));

    st.add(tokenized("eve_tampered", 12000,
                     encode_token(issue_token("not-the-real-secret", with("eve")))));

    AccessToken foreign = with("frank");
    foreign.customer_id = "nobody.example";
    st.add(tokenized("frank_unknown_customer", 14000,
                     encode_token(issue_token(kTokenSecret, foreign))));

    json run = st.finish(run_ms);
    json rejects = json::object();
    for (const auto& ev : run.at("tracker").at("auth_events")) {
        if (ev.at("accepted").get<bool>()) continue;
        std::string reason = ev.at("reason").get<std::string>();
        rejects[reason] = rejects.value(reason, 0) + 1;
    }
    json summary;
    summary["accepted_sessions"] = run.at("tracker").at("registrations_accepted");
    summary["rejects_by_reason"] = rejects;
    json runs;
    runs["token_mode"] = run;
    return json{{"runs", runs}, {"summary", summary}};
}

}  // namespace scen

// ----------------------------------------------------------------------------
// Registry
// ----------------------------------------------------------------------------

struct ScenarioDef {
    std::string name;
    std::string description;
    json defaults;
    json (*run)(const Config&, std::uint64_t seed);
};

inline json video_defaults(std::uint64_t duration_ms, std::uint64_t bytes_per_second) {
    return json{{"duration_ms", duration_ms},
                {"segment_ms", 10000},
                {"bytes_per_second", bytes_per_second},
                {"generation_seed", 5}};
}

inline const std::vector<ScenarioDef>& scenarios() {
    static const std::vector<ScenarioDef> defs = {
        {"free_riding",
         "unentitled swarm rides a stolen publisher credential; origin whitelist vs tokens",
         json{{"video", video_defaults(60000, 300000)},
              {"run", {{"duration_ms", 90000}}},
              {"attack", {{"audience", 3}}}},
         scen::run_free_riding},
        {"naive_pollution",
         "playlist rewrite changes the stream identity and strands the attacker alone",
         json{{"video", video_defaults(60000, 10000)},
              {"run", {{"duration_ms", 60000}}},
              {"audience", {{"honest", 3}}}},
         scen::run_naive_pollution},
        {"segment_pollution",
         "payload tampering with an intact playlist, with and without verification",
         json{{"video", video_defaults(120000, 300000)},
              {"run", {{"duration_ms", 150000}}},
              {"attack", {{"targets", {2, 5}}, {"pollution_seed", 77}}},
              {"audience", {{"viewers", 3}}},
              {"defense", {{"reporters", 3}, {"selection_delay_ms", 2000}}}},
         scen::run_segment_pollution},
        {"pollution_propagation",
         "how far tampered segments travel through honest caches over time",
         json{{"video", video_defaults(60000, 50000)},
              {"run", {{"duration_ms", 120000}, {"sample_ms", 5000}}},
              {"attack", {{"targets", {1, 3}}, {"pollution_seed", 77}}},
              {"audience", {{"viewers", 8}}},
              {"defense", {{"reporters", 3}, {"selection_delay_ms", 2000}}}},
         scen::run_pollution_propagation},
        {"ip_leak",
         "idle client counts the peer addresses each candidate policy discloses",
         json{{"video", video_defaults(30000, 10000)},
              {"run", {{"duration_ms", 90000}}},
              {"swarm", {{"peers", 100}, {"same_country_as_harvester", 35}}},
              {"policy", {{"max_candidates", 200}}}},
         scen::run_ip_leak},
        {"resource_accounting",
         "seeder upload vs audience size, cellular upload policy, deployment dial",
         json{{"video", video_defaults(120000, 300000)},
              {"run", {{"duration_ms", 180000}}},
              {"audience", {{"deployment_crowd", 25}, {"deployment_pct", 40.0}}}},
         scen::run_resource_accounting},
        {"im_overhead",
         "delivery latency and message cost of the verification machinery",
         json{{"video", video_defaults(600000, 100000)},
              {"run", {{"duration_ms", 700000}}},
              {"audience", {{"senders", 3}, {"receivers", 3}, {"receivers_join_ms", 30000}}},
              {"defense", {{"reporters", 3}, {"selection_delay_ms", 2000}}}},
         scen::run_im_overhead},
        {"token_auth",
         "disposable token lifecycle: accept, replay, expiry, binding, tampering",
         json{{"video", video_defaults(60000, 300000)}, {"run", {{"duration_ms", 90000}}}},
         scen::run_token_auth},
    };
    return defs;
}

inline const ScenarioDef* find_scenario(const std::string& name) {
    for (const ScenarioDef& def : scenarios())
        if (def.name == name) return &def;
    return nullptr;
}

inline json run_scenario(const ScenarioDef& def, const Config& cfg, std::uint64_t seed) {
    json body = def.run(cfg, seed);
    json report;
    report["scenario"] = def.name;
    report["seed"] = seed;
    report["config"] = cfg.values();
    report["runs"] = body.at("runs");
    report["summary"] = body.at("summary");
    return report;
}

}  // namespace pdnsim
