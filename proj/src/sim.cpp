#include "tmdto/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "tmdto/corefn.hpp"

namespace tmdto {

namespace {

constexpr std::uint64_t mine_seed_tag = 0x4d'494e45;  // "MINE"

std::uint64_t mining_seed(std::uint64_t run_seed, std::uint64_t node_id, std::uint64_t round,
                          int difficulty) {
    std::uint64_t s = derive_seed(run_seed, mine_seed_tag);
    s = derive_seed(s, node_id);
    s = derive_seed(s, round);
    return derive_seed(s, static_cast<std::uint64_t>(difficulty));
}

std::vector<std::uint64_t> tx_batch(std::uint64_t tx_stream_seed, std::uint64_t round,
                                    std::uint64_t node_id, int difficulty,
                                    std::uint64_t txs_per_block) {
    std::uint64_t s = derive_seed(tx_stream_seed, round);
    s = derive_seed(s, node_id);
    s = derive_seed(s, static_cast<std::uint64_t>(difficulty));
    SplitMix64 rng(s);
    std::vector<std::uint64_t> txs(txs_per_block);
    for (auto& tx : txs)
        tx = rng.next();
    return txs;
}

struct MiningTask {
    std::size_t node_index = 0;
    int difficulty = 0;
    const TradeoffTable* table = nullptr;
    NodeConfig mining_config;
    Block parent;
    std::vector<std::uint64_t> txs;
};

}  // namespace

SimResult run_simulation(const SimConfig& config, Schedule schedule) {
    config.params.validate();
    if (config.rounds < 1)
        throw std::invalid_argument("simulation needs at least one round");
    if (config.txs_per_block < 1)
        throw std::invalid_argument("simulation needs at least one transaction per block");

    std::vector<NodeConfig> nodes = config.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const NodeConfig& a, const NodeConfig& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (nodes[i].id == nodes[i - 1].id)
            throw std::invalid_argument("duplicate node id " + std::to_string(nodes[i].id));
    const bool any_honest = std::any_of(nodes.begin(), nodes.end(), [](const NodeConfig& n) {
        return n.role == Role::honest;
    });
    if (!any_honest)
        throw std::invalid_argument("simulation needs at least one honest node");

    // All tables exist before round 1 so configuration errors surface here.
    std::map<std::pair<std::uint64_t, int>, TradeoffTable> tables;
    std::vector<std::vector<int>> node_difficulties(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::vector<int> lanes;
        for (const DifficultyBudget& budget : nodes[i].budgets) {
            if (!config.params.has_difficulty(budget.difficulty))
                throw std::invalid_argument("node " + std::to_string(nodes[i].id) +
                                            ": budget names unknown difficulty " +
                                            std::to_string(budget.difficulty));
            const auto spec = table_spec_for(nodes[i], config.params, budget.difficulty);
            if (!spec)
                continue;
            tables.emplace(std::make_pair(nodes[i].id, budget.difficulty),
                           build_table(*spec, config.params.n));
            lanes.push_back(budget.difficulty);
        }
        std::sort(lanes.begin(), lanes.end());
        node_difficulties[i] = std::move(lanes);
    }

    SimResult result{{}, Ledger(config.params)};
    Ledger& ledger = result.ledger;
    std::uint64_t malicious_tip = ledger.genesis_digest();

    for (std::uint64_t round = 1; round <= config.rounds; ++round) {
        const Block honest_parent = *ledger.find_block(ledger.canonical_tip());
        const Block malicious_parent = *ledger.find_block(malicious_tip);

        std::vector<MiningTask> tasks;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (int difficulty : node_difficulties[i]) {
                MiningTask task;
                task.node_index = i;
                task.difficulty = difficulty;
                task.table = &tables.at(std::make_pair(nodes[i].id, difficulty));
                task.mining_config = nodes[i];
                task.mining_config.seed =
                    mining_seed(config.seed, nodes[i].id, round, difficulty);
                task.parent = nodes[i].role == Role::honest ? honest_parent : malicious_parent;
                task.txs = tx_batch(config.tx_stream_seed, round, nodes[i].id, difficulty,
                                    config.txs_per_block);
                tasks.push_back(std::move(task));
            }
        }

        std::vector<MiningOutcome> outcomes(tasks.size());
        const auto run_task = [&](std::size_t k) {
            const MiningTask& task = tasks[k];
            return mine_round(task.mining_config, *task.table, task.parent, task.txs,
                              config.params, task.difficulty);
        };
        if (schedule == Schedule::parallel) {
            std::vector<std::future<MiningOutcome>> futures;
            futures.reserve(tasks.size());
            for (std::size_t k = 0; k < tasks.size(); ++k)
                futures.push_back(std::async(std::launch::async, run_task, k));
            for (std::size_t k = 0; k < tasks.size(); ++k)
                outcomes[k] = futures[k].get();
        } else {
            for (std::size_t k = 0; k < tasks.size(); ++k)
                outcomes[k] = run_task(k);
        }

        RoundRecord record;
        record.round = round;
        record.nodes.resize(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            record.nodes[i].node = nodes[i].id;
            record.nodes[i].role = nodes[i].role;
        }

        // Publication: solved blocks append in (node id, difficulty) order.
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            const MiningTask& task = tasks[k];
            const MiningOutcome& outcome = outcomes[k];
            NodeRoundSummary& summary = record.nodes[task.node_index];
            summary.attempts += outcome.attempts_used;
            summary.ticks += outcome.ticks_used;
            if (!outcome.block)
                continue;
            ++summary.solved;
            if (!ledger.append_block(*outcome.block).accepted)
                continue;
            const Role role = nodes[task.node_index].role;
            if (role == Role::honest) {
                ++record.honest_blocks;
            } else {
                ++record.malicious_blocks;
                const std::uint64_t digest = outcome.block->digest();
                const Block& cur = *ledger.find_block(malicious_tip);
                if (outcome.block->height > cur.height ||
                    (outcome.block->height == cur.height && digest < malicious_tip))
                    malicious_tip = digest;
            }
        }

        const Block& tip = *ledger.find_block(ledger.canonical_tip());
        record.canonical_tip_pool = Pool::honest;
        if (tip.height > 0) {
            for (const NodeConfig& node : nodes) {
                if (node.id == tip.miner) {
                    record.canonical_tip_pool =
                        node.role == Role::malicious ? Pool::malicious : Pool::honest;
                    break;
                }
            }
        }
        result.rounds.push_back(std::move(record));
    }
    return result;
}

double pool_expected_blocks(const std::vector<NodeConfig>& pool, const SystemParams& params,
                            int difficulty, PoolBound bound) {
    if (pool.empty())
        throw std::invalid_argument("pool_expected_blocks: empty pool");
    const int ell = params.ell_for(difficulty);

    long double coverage = 0.0L;
    std::uint64_t t_min = 0;
    std::uint64_t t_max = 0;
    bool any = false;
    for (const NodeConfig& node : pool) {
        const DifficultyBudget* budget = node.budget_for(difficulty);
        if (budget == nullptr || budget->rows == 0 || budget->chain_len == 0)
            continue;
        coverage += static_cast<long double>(budget->rows) *
                    static_cast<long double>(budget->chain_len);
        t_min = any ? std::min(t_min, budget->chain_len) : budget->chain_len;
        t_max = any ? std::max(t_max, budget->chain_len) : budget->chain_len;
        any = true;
    }
    if (!any)
        return 0.0;

    const std::uint64_t t_bound = bound == PoolBound::lower ? t_max : t_min;
    const std::uint64_t attempts = params.slot_ticks / (params.challenge_ticks + t_bound);
    const int space_bits = params.mode == Mode::constrained ? params.n.bits : ell;
    const long double space = std::ldexp(1.0L, space_bits);
    return static_cast<double>(static_cast<long double>(attempts) * coverage / space);
}

}  // namespace tmdto
