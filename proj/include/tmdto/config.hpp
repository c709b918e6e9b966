#ifndef TMDTO_CONFIG_HPP
#define TMDTO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmdto/node.hpp"
#include "tmdto/params.hpp"
#include "tmdto/sim.hpp"

namespace tmdto {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The `run` block of an experiment file.
struct RunConfig {
    std::uint64_t rounds = 100;
    std::uint64_t seed = 1;
    std::uint64_t tx_stream_seed = 0;  // derived from seed unless set explicitly
    bool tx_stream_seed_set = false;
    std::uint64_t trials = 10000;
    std::uint64_t txs_per_block = 4;
    double security_factor = 2.0;
    std::string out_dir;  // empty means unset
};

/// A parsed experiment file: system parameters, node roster, run settings.
struct ExperimentConfig {
    SystemParams params;
    std::vector<NodeConfig> nodes;
    RunConfig run;

    std::vector<NodeConfig> honest_nodes() const;
    std::vector<NodeConfig> malicious_nodes() const;
};

/// Parse and validate an experiment file. Syntax errors carry the line
/// number; semantic errors carry the offending field path. All width and
/// pool invariants are re-checked here.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");

/// Replace the run seed (and any seeds derived from it) with an override.
void override_seed(ExperimentConfig& config, std::uint64_t seed);

SimConfig to_sim_config(const ExperimentConfig& config);

}  // namespace tmdto

#endif
