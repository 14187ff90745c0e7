#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

#include "pdnsim/im.hpp"
#include "pdnsim/rng.hpp"

namespace pdnsim {

// Wall-clock cost of the per-segment verification work a client does: hashing
// the payload into integrity metadata, then MAC issue and check. Wall time
// never feeds the simulation; reports stay deterministic without it.
struct ImBench {
    std::size_t payload_bytes = 0;
    double hash_ms = 0.0;  // compute_im over the payload
    double mac_ms = 0.0;   // sign_im + verify_sim
    double total_ms = 0.0;
};

inline ImBench bench_im(std::size_t payload_bytes = 3000000, int trials = 5,
                        std::uint64_t seed = 1) {
    std::vector<std::uint8_t> payload(payload_bytes);
    Rng rng(seed);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_u64() & 0xff);

    auto ms_since = [](std::chrono::steady_clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    std::vector<double> hash_runs, mac_runs;
    bool ok = true;
    for (int t = 0; t < trials; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        IntegrityMetadata im = compute_im(payload, "vid://bench", 0);
        hash_runs.push_back(ms_since(t0));

        auto t1 = std::chrono::steady_clock::now();
        SignedIM sim = sign_im("bench-key", im);
        ok = ok && verify_sim("bench-key", sim);
        mac_runs.push_back(ms_since(t1));
    }
    std::sort(hash_runs.begin(), hash_runs.end());
    std::sort(mac_runs.begin(), mac_runs.end());

    ImBench r;
    r.payload_bytes = payload_bytes;
    r.hash_ms = hash_runs[hash_runs.size() / 2];
    r.mac_ms = ok ? mac_runs[mac_runs.size() / 2] : -1.0;
    r.total_ms = r.hash_ms + r.mac_ms;
    return r;
}

}  // namespace pdnsim
