#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pdnsim/digest.hpp"

namespace pdnsim {

// ============================================================================
// Deterministic RNG
//
// SplitMix64 with hand-rolled draw helpers. The standard <random>
// distributions and std::shuffle are implementation-defined, so every draw
// that can influence simulation output goes through this class to keep runs
// reproducible across compilers and standard libraries.
// ============================================================================

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, n) without modulo bias.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t v = next_u64();
            if (v >= threshold) return v % n;
        }
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double d01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return d01() < p; }

    // Fisher-Yates, high-to-low, so the result depends only on this stream.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), selection order preserved.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        if (k > n) throw std::invalid_argument("Rng::sample_indices: k > n");
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

    // Weighted pick: returns an index into `weights` (all must be >= 0, sum > 0).
    std::size_t weighted(const std::vector<double>& weights) {
        double total = 0;
        for (double w : weights) {
            if (w < 0) throw std::invalid_argument("Rng::weighted: negative weight");
            total += w;
        }
        if (total <= 0) throw std::invalid_argument("Rng::weighted: zero total weight");
        double x = d01() * total;
        double acc = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (x < acc) return i;
        }
        return weights.size() - 1;
    }

  private:
    std::uint64_t state_;
};

// Derives an independent substream seed from a root seed and a label. Streams
// keyed by stable labels stay decoupled from event timing: adding a draw in
// one stream never perturbs another.
inline std::uint64_t substream_seed(std::uint64_t root, std::string_view label) {
    std::uint64_t h = fnv64_u64(root);
    h = fnv64(label, h);
    // One scramble round so that related labels do not yield related states.
    std::uint64_t z = h + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline Rng substream(std::uint64_t root, std::string_view label) {
    return Rng(substream_seed(root, label));
}

}  // namespace pdnsim
