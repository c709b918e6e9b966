#ifndef TMDTO_PUZZLE_HPP
#define TMDTO_PUZZLE_HPP

#include <cstdint>
#include <span>

#include "tmdto/params.hpp"

namespace tmdto {

/// An inversion target produced by the mini proof-of-work: the digest of
/// block bytes plus nonce carries a d-zero prefix, and the challenge value
/// is its low-ell suffix.
struct Challenge {
    std::uint64_t nonce = 0;
    std::uint64_t digest = 0;
    std::uint64_t value = 0;   // low ell^j bits of the digest
    int difficulty = 0;        // j
    int zero_prefix_bits = 0;  // d

    bool operator==(const Challenge&) const = default;
};

/// A key that inverts a challenge.
struct PuzzleSolution {
    std::uint64_t key = 0;
    Challenge challenge;
};

/// Try nonces nonce_seed, nonce_seed+1, ... until the digest of
/// block_bytes || nonce starts with d zero bits; expected 2^d trials.
/// trial_cap of 0 means the default cap 2^(d+8); exhausting the cap throws.
Challenge make_challenge(std::span<const std::uint8_t> block_bytes, const SystemParams& params,
                         int difficulty, std::uint64_t nonce_seed, std::uint64_t trial_cap = 0);

/// Cheap full check of a solution: digest recomputation with zero-prefix and
/// suffix match, one one-way evaluation of the key, and in constrained mode
/// the all-ones key prefix. Returns false on any mismatch.
bool verify_solution(const PuzzleSolution& sol, std::span<const std::uint8_t> block_bytes,
                     const SystemParams& params);

}  // namespace tmdto

#endif
