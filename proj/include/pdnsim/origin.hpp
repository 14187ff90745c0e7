#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "pdnsim/media.hpp"
#include "pdnsim/messages.hpp"
#include "pdnsim/simnet.hpp"

namespace pdnsim {

// ============================================================================
// Origin: the CDN edge every peer can always fall back to
//
// Serves manifests and segment payloads for registered assets and meters the
// billable bytes per account and per video. Peer-assisted delivery exists to
// shrink exactly the numbers this node accumulates.
// ============================================================================

struct TrafficCounter {
    std::uint64_t bytes = 0;
    std::uint64_t requests = 0;
};

class Origin : public Node {
  public:
    explicit Origin(std::string node_id) : id_(std::move(node_id)) {}

    void register_asset(VideoAsset asset, const std::string& owner_account) {
        owners_[asset.video_id] = owner_account;
        assets_.emplace(asset.video_id, std::move(asset));
    }

    const VideoAsset* find_asset(const std::string& video_id) const {
        auto it = assets_.find(video_id);
        return it == assets_.end() ? nullptr : &it->second;
    }

    void on_message(World& world, const std::string& from, const Message& msg) override {
        if (auto* m = msg.get_if<ManifestRequest>()) {
            ManifestResponse resp;
            if (const VideoAsset* asset = find_asset(m->video_id)) {
                resp.found = true;
                resp.manifest = asset->manifest;
                ++manifest_requests_;
            }
            world.send(id_, from, resp);
            return;
        }
        if (auto* m = msg.get_if<CdnSegmentRequest>()) {
            CdnSegmentResponse resp;
            resp.video_id = m->video_id;
            resp.index = m->index;
            const VideoAsset* asset = find_asset(m->video_id);
            if (asset && m->index < asset->segment_count()) {
                resp.found = true;
                resp.payload = buffer_for(*asset, m->index);
                std::uint64_t n = resp.payload->size();
                const std::string& account =
                    m->account.empty() ? owners_[m->video_id] : m->account;
                by_account_[account].bytes += n;
                ++by_account_[account].requests;
                by_video_[m->video_id].bytes += n;
                ++by_video_[m->video_id].requests;
                total_.bytes += n;
                ++total_.requests;
            }
            world.send(id_, from, resp);
            return;
        }
    }

    const TrafficCounter& total() const { return total_; }
    TrafficCounter for_account(const std::string& account) const {
        auto it = by_account_.find(account);
        return it == by_account_.end() ? TrafficCounter{} : it->second;
    }
    TrafficCounter for_video(const std::string& video_id) const {
        auto it = by_video_.find(video_id);
        return it == by_video_.end() ? TrafficCounter{} : it->second;
    }
    const std::map<std::string, TrafficCounter>& by_account() const { return by_account_; }
    std::uint64_t manifest_requests() const { return manifest_requests_; }

  private:
    // Payloads are generated once per segment and shared by reference; every
    // response for one segment hands out the same immutable buffer.
    SegmentBuffer buffer_for(const VideoAsset& asset, std::uint32_t index) {
        auto key = std::make_pair(asset.video_id, index);
        auto it = buffers_.find(key);
        if (it == buffers_.end())
            it = buffers_.emplace(key, make_segment_buffer(asset, index)).first;
        return it->second;
    }

    std::string id_;
    std::map<std::string, VideoAsset> assets_;
    std::map<std::string, std::string> owners_;
    std::map<std::pair<std::string, std::uint32_t>, SegmentBuffer> buffers_;
    std::map<std::string, TrafficCounter> by_account_;
    std::map<std::string, TrafficCounter> by_video_;
    TrafficCounter total_;
    std::uint64_t manifest_requests_ = 0;
};

}  // namespace pdnsim
