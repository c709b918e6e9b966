#include "tmdto/node.hpp"

#include <stdexcept>
#include <string>

#include "tmdto/corefn.hpp"
#include "tmdto/puzzle.hpp"

namespace tmdto {

MiningOutcome mine_round(const NodeConfig& config, const TradeoffTable& table,
                         const Block& parent, const std::vector<std::uint64_t>& tx_ids,
                         const SystemParams& params, int difficulty) {
    if (!params.has_difficulty(difficulty))
        throw std::invalid_argument("mine_round: unknown difficulty " +
                                    std::to_string(difficulty));
    if (table.spec().difficulty != difficulty || table.spec().mode != params.mode ||
        table.spec().ell != params.ell_for(difficulty) || !(table.width() == params.n))
        throw std::invalid_argument("mine_round: node " + std::to_string(config.id) +
                                    " has no matching table for difficulty " +
                                    std::to_string(difficulty));
    if (tx_ids.empty())
        throw std::invalid_argument("mine_round: transaction batch is empty");

    Block candidate;
    candidate.height = parent.height + 1;
    candidate.prev_digest = parent.digest();
    candidate.miner = config.id;
    candidate.difficulty = difficulty;
    candidate.tx_ids = tx_ids;
    const auto prefix = candidate.puzzle_bytes();

    const std::uint64_t chain_len = table.spec().chain_len;
    const std::uint64_t attempt_cost = params.challenge_ticks + chain_len;
    const std::uint64_t budget = params.slot_ticks / attempt_cost;

    MiningOutcome outcome;
    for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
        ++outcome.attempts_used;
        outcome.ticks_used += attempt_cost;  // full cost even on an early solve
        const std::uint64_t nonce_seed = derive_seed(config.seed, attempt);
        const Challenge challenge = make_challenge(prefix, params, difficulty, nonce_seed);
        if (const auto key = invert(table, challenge.value)) {
            candidate.nonce = challenge.nonce;
            candidate.solution_key = *key;
            outcome.block = candidate;
            break;
        }
    }
    return outcome;
}

namespace {

constexpr std::uint64_t table_seed_tag = 0x5442'4c45;  // "TBLE"

}  // namespace

std::uint64_t table_seed(const NodeConfig& node, int difficulty) {
    return derive_seed(derive_seed(node.seed, table_seed_tag),
                       static_cast<std::uint64_t>(difficulty));
}

std::optional<TableSpec> table_spec_for(const NodeConfig& node, const SystemParams& params,
                                        int difficulty) {
    const DifficultyBudget* budget = node.budget_for(difficulty);
    if (budget == nullptr || budget->rows == 0 || budget->chain_len == 0)
        return std::nullopt;
    TableSpec spec;
    spec.difficulty = difficulty;
    spec.ell = params.ell_for(difficulty);
    spec.rows = budget->rows;
    spec.chain_len = budget->chain_len;
    spec.mode = params.mode;
    spec.seed = table_seed(node, difficulty);
    return spec;
}

}  // namespace tmdto
