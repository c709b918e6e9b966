#ifndef TMDTO_NODE_HPP
#define TMDTO_NODE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "tmdto/ledger.hpp"
#include "tmdto/params.hpp"
#include "tmdto/tradeoff.hpp"

namespace tmdto {

enum class Role { honest, malicious };

inline const char* to_string(Role role) {
    return role == Role::honest ? "honest" : "malicious";
}

/// A node's memory/time budget for one difficulty; zero means it skips it.
struct DifficultyBudget {
    int difficulty = 0;
    std::uint64_t rows = 0;       // M_i^j
    std::uint64_t chain_len = 0;  // t_i^j
};

/// One elementary node: a single table per difficulty it participates in.
struct NodeConfig {
    std::uint64_t id = 0;
    Role role = Role::honest;
    std::vector<DifficultyBudget> budgets;
    std::uint64_t seed = 0;

    const DifficultyBudget* budget_for(int difficulty) const {
        for (const auto& b : budgets)
            if (b.difficulty == difficulty)
                return &b;
        return nullptr;
    }
};

struct MiningOutcome {
    std::optional<Block> block;      // set when solved
    std::uint64_t attempts_used = 0; // distinct challenges tried
    std::uint64_t ticks_used = 0;
};

/// One round of mining: up to floor(slot / (challenge_time + chain_len))
/// attempts, each building a fresh challenge over the candidate block and
/// searching the table. Every attempt is charged the full
/// challenge_ticks + chain_len regardless of early exit.
MiningOutcome mine_round(const NodeConfig& config, const TradeoffTable& table,
                         const Block& parent, const std::vector<std::uint64_t>& tx_ids,
                         const SystemParams& params, int difficulty);

/// Table seed for one (node, difficulty) pair, derived from the node seed.
std::uint64_t table_seed(const NodeConfig& node, int difficulty);

/// The table spec a node builds for one difficulty; a zero budget means the
/// node skips the difficulty and no spec exists.
std::optional<TableSpec> table_spec_for(const NodeConfig& node, const SystemParams& params,
                                        int difficulty);

}  // namespace tmdto

#endif
