#include "tmdto/puzzle.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "tmdto/corefn.hpp"

namespace tmdto {

namespace {

void store_nonce(std::vector<std::uint8_t>& buf, std::uint64_t nonce) {
    const std::size_t off = buf.size() - 8;
    for (int i = 0; i < 8; ++i)
        buf[off + i] = static_cast<std::uint8_t>(nonce >> (8 * i));
}

}  // namespace

Challenge make_challenge(std::span<const std::uint8_t> block_bytes, const SystemParams& params,
                         int difficulty, std::uint64_t nonce_seed, std::uint64_t trial_cap) {
    const int ell = params.ell_for(difficulty);
    const int d = params.zero_prefix_bits;
    if (trial_cap == 0)
        trial_cap = d + 8 >= 64 ? ~std::uint64_t{0} : std::uint64_t{1} << (d + 8);

    std::vector<std::uint8_t> buf(block_bytes.begin(), block_bytes.end());
    buf.resize(buf.size() + 8);
    for (std::uint64_t trial = 0; trial < trial_cap; ++trial) {
        const std::uint64_t nonce = nonce_seed + trial;
        store_nonce(buf, nonce);
        const std::uint64_t digest = block_digest(buf);
        if (has_zero_prefix(digest, d)) {
            Challenge out;
            out.nonce = nonce;
            out.digest = digest;
            out.value = extract_challenge(digest, ell);
            out.difficulty = difficulty;
            out.zero_prefix_bits = d;
            return out;
        }
    }
    throw std::runtime_error("make_challenge: no nonce with a " + std::to_string(d) +
                             "-zero-bit digest prefix within " + std::to_string(trial_cap) +
                             " trials (check d against the trial cap)");
}

bool verify_solution(const PuzzleSolution& sol, std::span<const std::uint8_t> block_bytes,
                     const SystemParams& params) {
    if (!params.has_difficulty(sol.challenge.difficulty))
        return false;
    if (sol.challenge.zero_prefix_bits != params.zero_prefix_bits)
        return false;
    const int ell = params.ell_for(sol.challenge.difficulty);

    std::vector<std::uint8_t> buf(block_bytes.begin(), block_bytes.end());
    buf.resize(buf.size() + 8);
    store_nonce(buf, sol.challenge.nonce);
    const std::uint64_t digest = block_digest(buf);
    if (digest != sol.challenge.digest)
        return false;
    if (!has_zero_prefix(digest, params.zero_prefix_bits))
        return false;
    if (extract_challenge(digest, ell) != sol.challenge.value)
        return false;

    if (sol.key > params.n.mask())
        return false;
    if (extract_challenge(oneway_step(sol.key, params.n), ell) != sol.challenge.value)
        return false;
    if (params.mode == Mode::constrained && constrain(sol.key, params.n, ell) != sol.key)
        return false;
    return true;
}

}  // namespace tmdto
