#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "tmdto/config.hpp"
#include "tmdto/corefn.hpp"

using namespace tmdto;

namespace {

const char* full_config = R"({
  "params": {
    "n": 16,
    "d": 2,
    "slot_ticks": 1000,
    "challenge_ticks": 10,
    "mode": "constrained",
    "difficulties": [{"j": 1, "ell": 10}, {"j": 2, "ell": 12}]
  },
  "nodes": [
    {"id": 1, "role": "honest", "seed": 11,
     "budgets": [{"j": 1, "rows": 32, "chain_len": 8}, {"j": 2, "rows": 0, "chain_len": 8}]},
    {"id": 2, "role": "malicious", "seed": 22,
     "budgets": [{"j": 1, "rows": 16, "chain_len": 8}]}
  ],
  "run": {
    "rounds": 42,
    "seed": 7,
    "tx_stream_seed": 99,
    "trials": 500,
    "txs_per_block": 2,
    "security_factor": 3.5,
    "out_dir": "results"
  }
})";

std::string config_with(const std::string& needle, const std::string& replacement) {
    std::string text = full_config;
    const auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, needle.size(), replacement);
    return text;
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text, "test.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    FAIL("expected a ConfigError");
    return {};
}

}  // namespace

TEST_CASE("a complete experiment file parses into its typed form") {
    const auto config = parse_config(full_config, "test.json");

    CHECK(config.params.n.bits == 16);
    CHECK(config.params.zero_prefix_bits == 2);
    CHECK(config.params.slot_ticks == 1000);
    CHECK(config.params.challenge_ticks == 10);
    CHECK(config.params.mode == Mode::constrained);
    REQUIRE(config.params.difficulties.size() == 2);
    CHECK(config.params.ell_for(1) == 10);
    CHECK(config.params.ell_for(2) == 12);

    REQUIRE(config.nodes.size() == 2);
    CHECK(config.nodes[0].id == 1);
    CHECK(config.nodes[0].role == Role::honest);
    CHECK(config.nodes[0].seed == 11);
    REQUIRE(config.nodes[0].budgets.size() == 2);
    CHECK(config.nodes[0].budgets[0].rows == 32);
    CHECK(config.nodes[0].budgets[0].chain_len == 8);
    CHECK(config.nodes[0].budgets[1].rows == 0);
    CHECK(config.nodes[1].role == Role::malicious);

    CHECK(config.run.rounds == 42);
    CHECK(config.run.seed == 7);
    CHECK(config.run.tx_stream_seed == 99);
    CHECK(config.run.tx_stream_seed_set);
    CHECK(config.run.trials == 500);
    CHECK(config.run.txs_per_block == 2);
    CHECK(config.run.security_factor == 3.5);
    CHECK(config.run.out_dir == "results");

    CHECK(config.honest_nodes().size() == 1);
    CHECK(config.malicious_nodes().size() == 1);
}

TEST_CASE("defaults fill an omitted or partial run block") {
    const char* minimal = R"({
      "params": {"n": 16, "d": 0, "slot_ticks": 100, "challenge_ticks": 1,
                 "mode": "unconstrained", "difficulties": [{"j": 1, "ell": 8}]},
      "nodes": [{"id": 1, "role": "honest", "seed": 5}]
    })";
    const auto config = parse_config(minimal, "test.json");

    CHECK(config.run.rounds == 100);
    CHECK(config.run.seed == 1);
    CHECK(config.run.trials == 10000);
    CHECK(config.run.txs_per_block == 4);
    CHECK(config.run.security_factor == 2.0);
    CHECK(config.run.out_dir.empty());
    CHECK_FALSE(config.run.tx_stream_seed_set);
    CHECK(config.run.tx_stream_seed == derive_seed(1, 0x5458));
    CHECK(config.nodes[0].budgets.empty());

    // A run block setting only the seed still derives the tx stream from it.
    const auto partial = parse_config(config_with(R"("rounds": 42,
    "seed": 7,
    "tx_stream_seed": 99,
    "trials": 500,
    "txs_per_block": 2,
    "security_factor": 3.5,
    "out_dir": "results")",
                                                  R"("seed": 31)"),
                                      "test.json");
    CHECK(partial.run.seed == 31);
    CHECK_FALSE(partial.run.tx_stream_seed_set);
    CHECK(partial.run.tx_stream_seed == derive_seed(31, 0x5458));
    CHECK(partial.run.rounds == 100);
}

TEST_CASE("syntax errors carry the origin and position") {
    const auto msg = error_of("{ \"params\": ");
    CHECK(msg.find("test.json") != std::string::npos);
    CHECK(msg.find("line") != std::string::npos);
}

TEST_CASE("unknown fields are rejected with their path") {
    CHECK(error_of(config_with(R"("run")", R"("extra": 1, "run")"))
              .find("document.extra") != std::string::npos);
    CHECK(error_of(config_with(R"("n": 16)", R"("n": 16, "nn": 1)"))
              .find("params.nn") != std::string::npos);
    CHECK(error_of(config_with(R"("id": 2)", R"("id": 2, "colour": "red")"))
              .find("nodes[1].colour") != std::string::npos);
    CHECK(error_of(config_with(R"("j": 1, "rows": 16)", R"("j": 1, "depth": 2, "rows": 16)"))
              .find("nodes[1].budgets[0].depth") != std::string::npos);
    CHECK(error_of(config_with(R"("rounds": 42)", R"("loops": 42)"))
              .find("run.loops") != std::string::npos);
}

TEST_CASE("semantic violations are rejected") {
    SUBCASE("duplicate node ids") {
        CHECK(error_of(config_with(R"("id": 2, "role": "malicious")",
                                   R"("id": 1, "role": "malicious")"))
                  .find("duplicate node id") != std::string::npos);
    }
    SUBCASE("duplicate budgets for one difficulty") {
        CHECK(error_of(config_with(R"({"j": 2, "rows": 0, "chain_len": 8})",
                                   R"({"j": 1, "rows": 4, "chain_len": 2})"))
                  .find("duplicate budget") != std::string::npos);
    }
    SUBCASE("unknown difficulty in a budget") {
        CHECK(error_of(config_with(R"("budgets": [{"j": 1, "rows": 16, "chain_len": 8}])",
                                   R"("budgets": [{"j": 9, "rows": 16, "chain_len": 8}])"))
                  .find("unknown difficulty") != std::string::npos);
    }
    SUBCASE("no honest node") {
        CHECK(error_of(config_with(R"("id": 1, "role": "honest")",
                                   R"("id": 1, "role": "malicious")"))
                  .find("honest") != std::string::npos);
    }
    SUBCASE("bad mode and role strings") {
        CHECK(error_of(config_with(R"("mode": "constrained")", R"("mode": "both")"))
                  .find("params.mode") != std::string::npos);
        CHECK(error_of(config_with(R"("role": "malicious")", R"("role": "neutral")"))
                  .find("role") != std::string::npos);
    }
    SUBCASE("missing required fields") {
        CHECK(error_of(config_with(R"("n": 16,)", "")).find("params.n") != std::string::npos);
        CHECK(error_of(config_with(R"("seed": 11,)", "")).find("seed") != std::string::npos);
    }
    SUBCASE("out-of-range widths") {
        CHECK(error_of(config_with(R"("n": 16)", R"("n": 65)"))
                  .find("params.n") != std::string::npos);
        CHECK(error_of(config_with(R"({"j": 2, "ell": 12})", R"({"j": 2, "ell": 17})"))
                  .find("ell") != std::string::npos);
    }
    SUBCASE("duplicate difficulty levels") {
        CHECK_THROWS_AS(parse_config(config_with(R"({"j": 2, "ell": 12})",
                                                 R"({"j": 1, "ell": 12})"),
                                     "test.json"),
                        ConfigError);
    }
    SUBCASE("empty required arrays") {
        CHECK_THROWS_AS(
            parse_config(config_with(R"([{"j": 1, "ell": 10}, {"j": 2, "ell": 12}])", "[]"),
                         "test.json"),
            ConfigError);
    }
    SUBCASE("zero counts and nonpositive factors") {
        CHECK_THROWS_AS(parse_config(config_with(R"("rounds": 42)", R"("rounds": 0)"),
                                     "test.json"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config(config_with(R"("trials": 500)", R"("trials": 0)"),
                                     "test.json"),
                        ConfigError);
        CHECK_THROWS_AS(
            parse_config(config_with(R"("txs_per_block": 2)", R"("txs_per_block": 0)"),
                         "test.json"),
            ConfigError);
        CHECK_THROWS_AS(
            parse_config(config_with(R"("security_factor": 3.5)", R"("security_factor": 0)"),
                         "test.json"),
            ConfigError);
    }
    SUBCASE("negative values where counts are expected") {
        CHECK_THROWS_AS(parse_config(config_with(R"("seed": 11)", R"("seed": -4)"),
                                     "test.json"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config(config_with(R"("rows": 32)", R"("rows": -1)"),
                                     "test.json"),
                        ConfigError);
    }
    SUBCASE("wrong value shapes") {
        CHECK_THROWS_AS(parse_config(config_with(R"("n": 16)", R"("n": "wide")"),
                                     "test.json"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config(config_with(R"("nodes": [)", R"("nodes": 3, "x": [)"),
                                     "test.json"),
                        ConfigError);
    }
}

TEST_CASE("override_seed refreshes derived seeds unless pinned") {
    auto pinned = parse_config(full_config, "test.json");
    override_seed(pinned, 1234);
    CHECK(pinned.run.seed == 1234);
    CHECK(pinned.run.tx_stream_seed == 99);  // explicitly set, stays

    auto derived = parse_config(config_with(R"("tx_stream_seed": 99,)", ""), "test.json");
    CHECK(derived.run.tx_stream_seed == derive_seed(7, 0x5458));
    override_seed(derived, 1234);
    CHECK(derived.run.seed == 1234);
    CHECK(derived.run.tx_stream_seed == derive_seed(1234, 0x5458));
}

TEST_CASE("to_sim_config carries the run settings over") {
    const auto config = parse_config(full_config, "test.json");
    const auto sim = to_sim_config(config);

    CHECK(sim.params.n.bits == config.params.n.bits);
    CHECK(sim.params.mode == config.params.mode);
    CHECK(sim.nodes.size() == config.nodes.size());
    CHECK(sim.rounds == 42);
    CHECK(sim.seed == 7);
    CHECK(sim.tx_stream_seed == 99);
    CHECK(sim.txs_per_block == 2);
}

TEST_CASE("load_config reads files and reports missing ones") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "tmdto_config.json";
    {
        std::ofstream out(path);
        out << full_config;
    }
    const auto config = load_config(path);
    CHECK(config.run.rounds == 42);
    fs::remove(path);

    CHECK_THROWS_AS(load_config(path), ConfigError);
}
