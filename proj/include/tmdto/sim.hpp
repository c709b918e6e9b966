#ifndef TMDTO_SIM_HPP
#define TMDTO_SIM_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "tmdto/ledger.hpp"
#include "tmdto/node.hpp"
#include "tmdto/params.hpp"

namespace tmdto {

struct SimConfig {
    SystemParams params;
    std::vector<NodeConfig> nodes;
    std::uint64_t rounds = 1;
    std::uint64_t seed = 0;
    std::uint64_t tx_stream_seed = 0;
    std::uint64_t txs_per_block = 4;
};

enum class Pool { honest, malicious };

inline const char* to_string(Pool pool) {
    return pool == Pool::honest ? "honest" : "malicious";
}

/// Per-node per-round mining summary, aggregated over the node's difficulties.
struct NodeRoundSummary {
    std::uint64_t node = 0;
    Role role = Role::honest;
    std::uint64_t attempts = 0;
    std::uint64_t solved = 0;
    std::uint64_t ticks = 0;
};

struct RoundRecord {
    std::uint64_t round = 0;
    std::vector<NodeRoundSummary> nodes;
    std::uint64_t honest_blocks = 0;
    std::uint64_t malicious_blocks = 0;
    Pool canonical_tip_pool = Pool::honest;
};

enum class Schedule { serial, parallel };

struct SimResult {
    std::vector<RoundRecord> rounds;
    Ledger ledger;
};

/// Round-synchronous run: every node mines one slot per difficulty it has a
/// budget for (honest nodes on the canonical tip, malicious nodes on their
/// own branch), then all solved blocks publish at round end. Deterministic
/// given the seeds, and independent of the schedule choice.
SimResult run_simulation(const SimConfig& config, Schedule schedule = Schedule::serial);

enum class PoolBound {
    lower,  // honest bound: slowest member paces the attempt count (t_max)
    upper,  // malicious bound: fastest member paces it (t_min)
};

/// Expected blocks per slot for a pool at one difficulty:
/// floor(slot / (challenge_time + t_bound)) * sum(M_i * t_i) / N.
double pool_expected_blocks(const std::vector<NodeConfig>& pool, const SystemParams& params,
                            int difficulty, PoolBound bound);

}  // namespace tmdto

#endif
