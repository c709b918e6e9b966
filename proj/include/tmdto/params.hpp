#ifndef TMDTO_PARAMS_HPP
#define TMDTO_PARAMS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmdto/corefn.hpp"

namespace tmdto {

/// Which inversion variant the whole system runs.
enum class Mode : std::uint32_t { unconstrained = 0, constrained = 1 };

inline const char* to_string(Mode m) {
    return m == Mode::constrained ? "constrained" : "unconstrained";
}

/// One puzzle hardness level: difficulty index j and its challenge width ell^j.
struct DifficultyLevel {
    int difficulty = 0;
    int ell = 0;
};

/// Global protocol parameters shared by every node.
struct SystemParams {
    StateWidth n{16};              // key/state width
    int zero_prefix_bits = 0;      // d, the mini-PoW leading-zero count
    std::uint64_t slot_ticks = 0;  // round duration between chain updates
    std::uint64_t challenge_ticks = 0;  // time charged per challenge construction
    Mode mode = Mode::unconstrained;
    std::vector<DifficultyLevel> difficulties;  // sorted by difficulty index

    int ell_for(int difficulty) const {
        for (const auto& lvl : difficulties)
            if (lvl.difficulty == difficulty)
                return lvl.ell;
        throw std::invalid_argument("unknown difficulty level " + std::to_string(difficulty));
    }

    bool has_difficulty(int difficulty) const {
        for (const auto& lvl : difficulties)
            if (lvl.difficulty == difficulty)
                return true;
        return false;
    }

    /// Width and prefix invariants; throws on the first violation.
    void validate() const {
        if (zero_prefix_bits < 0 || zero_prefix_bits > 64)
            throw std::invalid_argument("zero prefix bits must be in [0, 64]");
        if (difficulties.empty())
            throw std::invalid_argument("at least one difficulty level is required");
        for (const auto& lvl : difficulties) {
            if (lvl.ell < 1 || lvl.ell > n.bits)
                throw std::invalid_argument("difficulty " + std::to_string(lvl.difficulty) +
                                            ": ell must be in [1, n]");
            int seen = 0;
            for (const auto& other : difficulties)
                if (other.difficulty == lvl.difficulty)
                    ++seen;
            if (seen != 1)
                throw std::invalid_argument("duplicate difficulty level " +
                                            std::to_string(lvl.difficulty));
        }
    }
};

}  // namespace tmdto

#endif
