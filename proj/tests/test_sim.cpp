#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmdto/ledger.hpp"
#include "tmdto/sim.hpp"

using namespace tmdto;

namespace {

SystemParams sim_params() {
    SystemParams params;
    params.n = StateWidth(16);
    params.zero_prefix_bits = 2;
    params.slot_ticks = 1000;
    params.challenge_ticks = 10;
    params.mode = Mode::constrained;
    params.difficulties = {{1, 10}};
    params.validate();
    return params;
}

SimConfig mixed_config() {
    SimConfig config;
    config.params = sim_params();
    config.nodes = {
        {1, Role::honest, {{1, 32, 8}}, 101},
        {2, Role::honest, {{1, 16, 8}}, 102},
        {3, Role::malicious, {{1, 16, 8}}, 103},
    };
    config.rounds = 20;
    config.seed = 5;
    config.tx_stream_seed = 6;
    config.txs_per_block = 3;
    return config;
}

bool summaries_equal(const NodeRoundSummary& a, const NodeRoundSummary& b) {
    return a.node == b.node && a.role == b.role && a.attempts == b.attempts &&
           a.solved == b.solved && a.ticks == b.ticks;
}

bool records_equal(const std::vector<RoundRecord>& a, const std::vector<RoundRecord>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].round != b[i].round || a[i].honest_blocks != b[i].honest_blocks ||
            a[i].malicious_blocks != b[i].malicious_blocks ||
            a[i].canonical_tip_pool != b[i].canonical_tip_pool ||
            a[i].nodes.size() != b[i].nodes.size())
            return false;
        for (std::size_t k = 0; k < a[i].nodes.size(); ++k)
            if (!summaries_equal(a[i].nodes[k], b[i].nodes[k]))
                return false;
    }
    return true;
}

std::string chain_text(const SimResult& result) {
    std::string text;
    for (const Block& block : result.ledger.canonical_chain()) {
        if (block.height == 0)
            continue;
        text += format_block_line(block);
        text += '\n';
    }
    return text;
}

}  // namespace

TEST_CASE("equal configurations replay identically") {
    const auto config = mixed_config();
    const auto a = run_simulation(config);
    const auto b = run_simulation(config);

    CHECK(records_equal(a.rounds, b.rounds));
    CHECK(chain_text(a) == chain_text(b));
    CHECK(a.ledger.block_count() == b.ledger.block_count());
    CHECK(a.ledger.canonical_tip() == b.ledger.canonical_tip());

    auto reseeded = config;
    reseeded.seed = 50;
    const auto c = run_simulation(reseeded);
    CHECK_FALSE(records_equal(a.rounds, c.rounds));
}

TEST_CASE("serial and parallel schedules produce the same run") {
    const auto config = mixed_config();
    const auto serial = run_simulation(config, Schedule::serial);
    const auto parallel = run_simulation(config, Schedule::parallel);

    CHECK(records_equal(serial.rounds, parallel.rounds));
    CHECK(chain_text(serial) == chain_text(parallel));
    CHECK(serial.ledger.canonical_tip() == parallel.ledger.canonical_tip());
}

TEST_CASE("accepted blocks are conserved across round records") {
    const auto result = run_simulation(mixed_config());

    std::uint64_t credited = 0;
    std::uint64_t solved = 0;
    for (const auto& record : result.rounds) {
        credited += record.honest_blocks + record.malicious_blocks;
        for (const auto& node : record.nodes)
            solved += node.solved;
    }
    CHECK(credited == result.ledger.block_count() - 1);  // genesis excluded
    CHECK(solved >= credited);
    CHECK(credited > 0);
}

TEST_CASE("round records keep nodes in id order") {
    const auto result = run_simulation(mixed_config());
    REQUIRE(!result.rounds.empty());
    for (const auto& record : result.rounds) {
        REQUIRE(record.nodes.size() == 3);
        CHECK(record.nodes[0].node == 1);
        CHECK(record.nodes[1].node == 2);
        CHECK(record.nodes[2].node == 3);
        CHECK(record.nodes[2].role == Role::malicious);
    }
}

TEST_CASE("a run without malicious nodes never credits that pool") {
    auto config = mixed_config();
    config.nodes = {
        {1, Role::honest, {{1, 32, 8}}, 101},
        {2, Role::honest, {{1, 16, 8}}, 102},
    };
    config.rounds = 15;
    const auto result = run_simulation(config);

    for (const auto& record : result.rounds) {
        CHECK(record.malicious_blocks == 0);
        CHECK(record.canonical_tip_pool == Pool::honest);
    }
    CHECK(result.ledger.block_count() > 1);
}

TEST_CASE("all-zero budgets leave the chain at genesis") {
    auto config = mixed_config();
    config.nodes = {
        {1, Role::honest, {{1, 0, 8}}, 101},
        {2, Role::malicious, {{1, 0, 0}}, 102},
    };
    config.rounds = 10;
    const auto result = run_simulation(config);

    CHECK(result.ledger.block_count() == 1);
    REQUIRE(result.rounds.size() == 10);
    for (const auto& record : result.rounds) {
        CHECK(record.honest_blocks == 0);
        CHECK(record.malicious_blocks == 0);
        CHECK(record.canonical_tip_pool == Pool::honest);
        for (const auto& node : record.nodes) {
            CHECK(node.attempts == 0);
            CHECK(node.solved == 0);
            CHECK(node.ticks == 0);
        }
    }
}

TEST_CASE("unsolved rounds consume the exact attempt budget") {
    auto config = mixed_config();
    // A sparse table makes most rounds miss, so the budget shows through.
    config.nodes = {{1, Role::honest, {{1, 2, 2}}, 101}};
    config.rounds = 30;
    const auto result = run_simulation(config);

    const std::uint64_t budget = 1000 / (10 + 2);
    std::uint64_t missed = 0;
    for (const auto& record : result.rounds) {
        const auto& node = record.nodes.at(0);
        if (node.solved == 0) {
            ++missed;
            CHECK(node.attempts == budget);
            CHECK(node.ticks == budget * 12);
        } else {
            CHECK(node.attempts <= budget);
            CHECK(node.ticks == node.attempts * 12);
        }
    }
    CHECK(missed > 0);
}

TEST_CASE("malicious blocks extend only the malicious branch") {
    auto config = mixed_config();
    config.rounds = 25;
    const auto result = run_simulation(config);

    std::uint64_t malicious_blocks = 0;
    // Walk every block; malicious miners must never build on honest work.
    for (const auto& record : result.rounds)
        malicious_blocks += record.malicious_blocks;
    REQUIRE(malicious_blocks > 0);

    const auto check_parentage = [&](const Block& block) {
        if (block.miner != 3)
            return;
        const Block* parent = result.ledger.find_block(block.prev_digest);
        REQUIRE(parent != nullptr);
        CHECK((parent->height == 0 || parent->miner == 3));
    };
    // canonical_chain misses side branches, so walk from every tip.
    for (std::uint64_t tip : result.ledger.tips()) {
        const Block* cur = result.ledger.find_block(tip);
        while (cur != nullptr && cur->height > 0) {
            check_parentage(*cur);
            cur = result.ledger.find_block(cur->prev_digest);
        }
    }
}

TEST_CASE("run_simulation validates its configuration") {
    auto config = mixed_config();

    SUBCASE("no honest node") {
        config.nodes = {{1, Role::malicious, {{1, 8, 8}}, 9}};
        CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);
    }
    SUBCASE("duplicate node ids") {
        config.nodes.push_back(config.nodes.front());
        CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);
    }
    SUBCASE("zero rounds") {
        config.rounds = 0;
        CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);
    }
    SUBCASE("unknown difficulty in a budget") {
        config.nodes[0].budgets = {{9, 8, 8}};
        CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);
    }
    SUBCASE("zero transactions per block") {
        config.txs_per_block = 0;
        CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);
    }
}

TEST_CASE("pool_expected_blocks evaluates the slot formula") {
    SystemParams params;
    params.n = StateWidth(32);
    params.zero_prefix_bits = 0;
    params.slot_ticks = 1000;
    params.challenge_ticks = 10;
    params.mode = Mode::unconstrained;
    params.difficulties = {{1, 20}};
    params.validate();

    // floor(1000/100) attempts, coverage 2^10 * 90 over the 2^20 suffix space.
    std::vector<NodeConfig> pool{{1, Role::honest, {{1, 1ULL << 10, 90}}, 0}};
    const double expect = 10.0 * (1024.0 * 90.0) / 1048576.0;
    CHECK(pool_expected_blocks(pool, params, 1, PoolBound::lower) ==
          doctest::Approx(expect).epsilon(1e-12));

    SUBCASE("equal chain lengths collapse the two bounds") {
        CHECK(pool_expected_blocks(pool, params, 1, PoolBound::lower) ==
              pool_expected_blocks(pool, params, 1, PoolBound::upper));
    }
    SUBCASE("doubling every M doubles the estimate") {
        auto doubled = pool;
        doubled[0].budgets[0].rows *= 2;
        CHECK(pool_expected_blocks(doubled, params, 1, PoolBound::lower) ==
              doctest::Approx(2.0 * expect).epsilon(1e-12));
    }
    SUBCASE("mixed chain lengths pick t_max for lower, t_min for upper") {
        pool.push_back({2, Role::honest, {{1, 1ULL << 10, 40}}, 0});
        const double coverage = 1024.0 * 90.0 + 1024.0 * 40.0;
        const double lower = std::floor(1000.0 / 100.0) * coverage / 1048576.0;
        const double upper = std::floor(1000.0 / 50.0) * coverage / 1048576.0;
        CHECK(pool_expected_blocks(pool, params, 1, PoolBound::lower) ==
              doctest::Approx(lower).epsilon(1e-12));
        CHECK(pool_expected_blocks(pool, params, 1, PoolBound::upper) ==
              doctest::Approx(upper).epsilon(1e-12));
    }
    SUBCASE("constrained mode measures against the key space") {
        params.mode = Mode::constrained;
        params.n = StateWidth(16);
        params.difficulties = {{1, 10}};
        std::vector<NodeConfig> small{{1, Role::honest, {{1, 32, 8}}, 0}};
        const double d = std::floor(1000.0 / 18.0);
        CHECK(pool_expected_blocks(small, params, 1, PoolBound::lower) ==
              doctest::Approx(d * 256.0 / 65536.0).epsilon(1e-12));
    }
    SUBCASE("empty pool is rejected, zero budgets contribute nothing") {
        CHECK_THROWS_AS(pool_expected_blocks({}, params, 1, PoolBound::lower),
                        std::invalid_argument);
        std::vector<NodeConfig> idle{{1, Role::honest, {{1, 0, 8}}, 0}};
        CHECK(pool_expected_blocks(idle, params, 1, PoolBound::lower) == 0.0);
    }
}
