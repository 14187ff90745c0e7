#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdnsim/digest.hpp"
#include "pdnsim/rng.hpp"

namespace pdnsim {

// ============================================================================
// Media model
//
// A video is a fixed sequence of segments plus a manifest listing them. The
// manifest digest identifies a stream: two peers are watching "the same
// thing" exactly when their manifest digests match. Segment payloads are
// generated deterministically from (video_id, index, generation_seed), so no
// sample data ships with the repository and any byte of any segment can be
// re-derived anywhere.
// ============================================================================

struct ManifestEntry {
    std::string name;
    std::uint64_t duration_ms = 0;

    friend bool operator==(const ManifestEntry& a, const ManifestEntry& b) {
        return a.name == b.name && a.duration_ms == b.duration_ms;
    }
};

struct Manifest {
    std::string video_id;
    std::vector<ManifestEntry> entries;

    friend bool operator==(const Manifest& a, const Manifest& b) {
        return a.video_id == b.video_id && a.entries == b.entries;
    }
};

// Wire form of a manifest: one "name,duration_ms" line per segment, in index
// order. The stream identity digest is the SHA-256 of this serialization.
inline std::string serialize_manifest(const Manifest& m) {
    std::string out;
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        if (i) out.push_back('\n');
        out += m.entries[i].name;
        out.push_back(',');
        out += std::to_string(m.entries[i].duration_ms);
    }
    return out;
}

inline Digest256 manifest_digest(const Manifest& m) { return sha256(serialize_manifest(m)); }

struct SegmentMeta {
    std::string video_id;
    std::uint32_t index = 0;
    std::string name;
    std::uint64_t duration_ms = 0;
    std::uint64_t byte_len = 0;
    Digest256 content_digest;
};

struct PollutionSpec {
    std::vector<std::uint32_t> target_indices;  // sorted, unique
    std::uint64_t pollution_seed = 0;
};

struct VideoAsset {
    std::string video_id;
    std::uint64_t total_duration_ms = 0;
    std::uint64_t segment_duration_ms = 0;
    std::uint64_t bytes_per_second = 0;
    std::uint64_t generation_seed = 0;
    std::vector<SegmentMeta> segments;
    Manifest manifest;
    Digest256 stream_digest;                 // manifest digest
    std::vector<PollutionSpec> pollution;    // applied in order over base bytes

    std::uint32_t segment_count() const { return static_cast<std::uint32_t>(segments.size()); }

    bool is_polluted_index(std::uint32_t index) const {
        for (const auto& p : pollution)
            for (auto t : p.target_indices)
                if (t == index) return true;
        return false;
    }
};

inline std::string segment_name(std::string_view video_id, std::uint32_t index) {
    char suffix[24];
    std::snprintf(suffix, sizeof(suffix), "/seg%05u.ts", index);
    return std::string(video_id) + suffix;
}

namespace detail {

inline std::uint64_t segment_stream_seed(std::uint64_t generation_seed,
                                         std::string_view video_id, std::uint32_t index,
                                         std::string_view tag) {
    std::uint64_t h = fnv64_u64(generation_seed);
    h = fnv64(video_id, h);
    h = fnv64_u64(index, h);
    h = fnv64(tag, h);
    return h;
}

inline void fill_bytes(std::vector<std::uint8_t>& buf, std::uint64_t seed) {
    Rng rng(seed);
    std::size_t i = 0;
    for (; i + 8 <= buf.size(); i += 8) {
        std::uint64_t v = rng.next_u64();
        for (int k = 0; k < 8; ++k) buf[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
    }
    if (i < buf.size()) {
        std::uint64_t v = rng.next_u64();
        for (int k = 0; i < buf.size(); ++i, ++k) buf[i] = static_cast<std::uint8_t>(v >> (8 * k));
    }
}

inline void xor_bytes(std::vector<std::uint8_t>& buf, std::uint64_t seed) {
    Rng rng(seed);
    std::size_t i = 0;
    for (; i + 8 <= buf.size(); i += 8) {
        std::uint64_t v = rng.next_u64();
        for (int k = 0; k < 8; ++k) buf[i + k] ^= static_cast<std::uint8_t>(v >> (8 * k));
    }
    if (i < buf.size()) {
        std::uint64_t v = rng.next_u64();
        for (int k = 0; i < buf.size(); ++i, ++k) buf[i] ^= static_cast<std::uint8_t>(v >> (8 * k));
    }
}

}  // namespace detail

// Regenerates the payload of one segment, pollution layers included.
inline std::vector<std::uint8_t> segment_bytes(const VideoAsset& asset, std::uint32_t index) {
    if (index >= asset.segments.size()) throw std::out_of_range("segment_bytes: bad index");
    const SegmentMeta& meta = asset.segments[index];
    std::vector<std::uint8_t> buf(meta.byte_len);
    detail::fill_bytes(buf, detail::segment_stream_seed(asset.generation_seed, asset.video_id,
                                                        index, "segment"));
    for (const auto& layer : asset.pollution) {
        bool hit = false;
        for (auto t : layer.target_indices) hit = hit || (t == index);
        if (hit)
            detail::xor_bytes(buf, detail::segment_stream_seed(layer.pollution_seed,
                                                               asset.video_id, index, "pollute"));
    }
    return buf;
}

using SegmentBuffer = std::shared_ptr<const std::vector<std::uint8_t>>;

inline SegmentBuffer make_segment_buffer(const VideoAsset& asset, std::uint32_t index) {
    return std::make_shared<const std::vector<std::uint8_t>>(segment_bytes(asset, index));
}

/**
 * Builds a video asset: metadata, manifest, and per-segment content digests.
 *
 * The segment count is ceil(total / segment_duration); every segment has the
 * full duration except a shorter final remainder. Segment size scales with
 * duration at `bytes_per_second` (the default works out to 3,000,000 bytes
 * per 10 s segment).
 */
inline VideoAsset build_video(std::string video_id, std::uint64_t total_duration_ms,
                              std::uint64_t segment_duration_ms, std::uint64_t generation_seed,
                              std::uint64_t bytes_per_second = 300000) {
    if (total_duration_ms == 0 || segment_duration_ms == 0 || bytes_per_second == 0)
        throw std::invalid_argument("build_video: durations and rate must be positive");
    VideoAsset asset;
    asset.video_id = video_id;
    asset.total_duration_ms = total_duration_ms;
    asset.segment_duration_ms = segment_duration_ms;
    asset.bytes_per_second = bytes_per_second;
    asset.generation_seed = generation_seed;
    asset.manifest.video_id = video_id;

    std::uint64_t count = (total_duration_ms + segment_duration_ms - 1) / segment_duration_ms;
    for (std::uint64_t i = 0; i < count; ++i) {
        SegmentMeta meta;
        meta.video_id = video_id;
        meta.index = static_cast<std::uint32_t>(i);
        meta.name = segment_name(video_id, meta.index);
        meta.duration_ms = (i + 1 < count) ? segment_duration_ms
                                           : total_duration_ms - segment_duration_ms * (count - 1);
        meta.byte_len = bytes_per_second * meta.duration_ms / 1000;
        asset.segments.push_back(std::move(meta));
        asset.manifest.entries.push_back(
            {asset.segments.back().name, asset.segments.back().duration_ms});
    }
    for (auto& meta : asset.segments) {
        std::vector<std::uint8_t> buf(meta.byte_len);
        detail::fill_bytes(buf, detail::segment_stream_seed(generation_seed, asset.video_id,
                                                            meta.index, "segment"));
        meta.content_digest = sha256(buf);
    }
    asset.stream_digest = manifest_digest(asset.manifest);
    return asset;
}

/**
 * Returns a copy of `asset` with one more pollution layer applied: payloads
 * at the target indices change (and their content digests with them) while
 * the manifest, and therefore the stream identity, stays identical.
 */
inline VideoAsset pollute(const VideoAsset& asset, PollutionSpec spec) {
    std::sort(spec.target_indices.begin(), spec.target_indices.end());
    for (std::size_t i = 0; i + 1 < spec.target_indices.size(); ++i)
        if (spec.target_indices[i] == spec.target_indices[i + 1])
            throw std::invalid_argument("pollute: duplicate target index");
    for (auto t : spec.target_indices)
        if (t >= asset.segments.size()) throw std::invalid_argument("pollute: index out of range");

    VideoAsset out = asset;
    out.pollution.push_back(std::move(spec));
    for (auto t : out.pollution.back().target_indices)
        out.segments[t].content_digest = sha256(segment_bytes(out, t));
    return out;
}

}  // namespace pdnsim
