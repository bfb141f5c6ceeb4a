#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace authlabel {

/// Derives independent RNG streams from one master seed so that every
/// generated artifact is reproducible and trials can run in any order.
/// Streams are identified by a label plus integer indices; the derivation is
/// a splitmix64 chain over the mixed inputs.
class SeedSequence {
public:
    explicit SeedSequence(std::uint64_t master) : state_(mix(master)) {}

    /// Child sequence for a named substream.
    SeedSequence child(std::string_view label) const {
        std::uint64_t h = state_;
        for (char c : label) h = mix(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
        return SeedSequence(Raw{}, h);
    }

    SeedSequence child(std::uint64_t index) const {
        return SeedSequence(Raw{}, mix(state_ ^ mix(index + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t value() const { return state_; }

    /// Engine seeded from this stream; drawing from it does not affect the
    /// sequence object.
    std::mt19937_64 engine() const { return std::mt19937_64(state_); }

private:
    struct Raw {};
    SeedSequence(Raw, std::uint64_t s) : state_(s) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace authlabel
