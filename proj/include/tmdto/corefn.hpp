#ifndef TMDTO_COREFN_HPP
#define TMDTO_COREFN_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace tmdto {

/// Bit width of keys and states. Everything lives in one 64-bit word.
struct StateWidth {
    int bits;

    explicit StateWidth(int n) : bits(n) {
        if (n < 1 || n > 64)
            throw std::invalid_argument("state width must be in [1, 64], got " + std::to_string(n));
    }

    /// The n-bit all-ones mask, 2^n - 1.
    std::uint64_t mask() const {
        return bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    }

    bool operator==(const StateWidth&) const = default;
};

/// Fixed 64-bit avalanche finalizer (splitmix64 step). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Keyed one-way step: the n-bit image of key K under encryption of the
/// all-ones message. Computed as the low n bits of mix64(mix64(K) ^ (2^n - 1)).
inline std::uint64_t oneway_step(std::uint64_t key, StateWidth n) {
    const std::uint64_t mask = n.mask();
    if (key > mask)
        throw std::invalid_argument("oneway_step: key exceeds state width");
    return mix64(mix64(key) ^ mask) & mask;
}

/// Preset the top n-ell bits of an n-bit state to all ones; the low ell bits pass through.
inline std::uint64_t constrain(std::uint64_t x, StateWidth n, int ell) {
    if (ell < 1 || ell > n.bits)
        throw std::invalid_argument("constrain: ell must be in [1, n]");
    const std::uint64_t low = ell == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ell) - 1;
    return (x & low) | (n.mask() & ~low);
}

/// Digest of a byte sequence: fold mix64 over the 8-byte little-endian words
/// (final word zero-padded) plus one trailing word holding the byte length.
inline std::uint64_t block_digest(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0;
    std::size_t i = 0;
    for (; i + 8 <= bytes.size(); i += 8) {
        std::uint64_t w = 0;
        for (int b = 0; b < 8; ++b)
            w |= std::uint64_t{bytes[i + b]} << (8 * b);
        h = mix64(h ^ w);
    }
    if (i < bytes.size()) {
        std::uint64_t w = 0;
        for (int b = 0; i + b < bytes.size(); ++b)
            w |= std::uint64_t{bytes[i + b]} << (8 * b);
        h = mix64(h ^ w);
    }
    return mix64(h ^ std::uint64_t{bytes.size()});
}

/// True iff the d most-significant bits of h are all zero.
inline bool has_zero_prefix(std::uint64_t h, int d) {
    if (d < 0 || d > 64)
        throw std::invalid_argument("has_zero_prefix: d must be in [0, 64]");
    if (d == 0)
        return true;
    return (h >> (64 - d)) == 0;
}

/// The low ell bits of a digest, used as the inversion challenge.
inline std::uint64_t extract_challenge(std::uint64_t h, int ell) {
    if (ell < 1 || ell > 64)
        throw std::invalid_argument("extract_challenge: ell must be in [1, 64]");
    return ell == 64 ? h : h & ((std::uint64_t{1} << ell) - 1);
}

/// Deterministic seeded stream of 64-bit words (splitmix64).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        const std::uint64_t out = mix64(state_);
        state_ += 0x9E3779B97F4A7C15ULL;
        return out;
    }

    /// Uniform value in [0, bound) via 128-bit multiply; bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

/// Derive an independent sub-seed from a parent seed and a tag.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag));
}

}  // namespace tmdto

#endif
