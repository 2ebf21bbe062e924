#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dnstun {

// Deterministic RNG helpers. std::mt19937_64 output is fixed by the
// standard, but the stdlib *distributions* are not, so every mapping from
// raw engine output to a bounded value is implemented here. Identical
// seeds produce identical streams on every platform and at every
// parallelism degree.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) { return engine_() % n; }

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint8_t next_byte() { return static_cast<std::uint8_t>(engine_() & 0xff); }

    std::vector<std::uint8_t> bytes(std::size_t n) {
        std::vector<std::uint8_t> out(n);
        for (auto& b : out) b = next_byte();
        return out;
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct values from [0, n), ascending. k <= n.
    std::vector<std::size_t> sample_indices(std::size_t k, std::size_t n);

private:
    std::mt19937_64 engine_;
};

/// Per-stream seed derivation: stream i of a run seeded with s uses s + i,
/// so parallel and serial execution draw identical streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return seed + stream;
}

}  // namespace dnstun
