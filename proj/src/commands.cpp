#include "tmdto/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <vector>

#include "tmdto/config.hpp"
#include "tmdto/corefn.hpp"
#include "tmdto/io.hpp"
#include "tmdto/ledger.hpp"
#include "tmdto/node.hpp"
#include "tmdto/report.hpp"
#include "tmdto/sim.hpp"
#include "tmdto/tradeoff.hpp"

namespace tmdto {

namespace {

ExperimentConfig load_with_overrides(const CliOptions& opts) {
    if (opts.config_path.empty())
        throw ConfigError("a config file is required (--config PATH)");
    ExperimentConfig config = load_config(opts.config_path);
    if (opts.seed)
        override_seed(config, *opts.seed);
    if (opts.trials)
        config.run.trials = *opts.trials;
    return config;
}

std::filesystem::path resolve_out_dir(const CliOptions& opts, const ExperimentConfig& config) {
    if (opts.out_dir)
        return *opts.out_dir;
    if (const char* env = std::getenv("TMDTO_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    if (!config.run.out_dir.empty())
        return config.run.out_dir;
    return ".";
}

std::string table_filename(std::uint64_t node_id, int difficulty) {
    return "node" + std::to_string(node_id) + "_j" + std::to_string(difficulty) + ".tmt";
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

std::vector<NodeConfig> sorted_nodes(const ExperimentConfig& config) {
    std::vector<NodeConfig> nodes = config.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const NodeConfig& a, const NodeConfig& b) { return a.id < b.id; });
    return nodes;
}

}  // namespace

int cmd_tables_build(const CliOptions& opts) {
    return run_guarded([&] {
        const ExperimentConfig config = load_with_overrides(opts);
        const auto out_dir = resolve_out_dir(opts, config);
        std::size_t built = 0;
        for (const NodeConfig& node : sorted_nodes(config)) {
            std::vector<int> lanes;
            for (const DifficultyBudget& budget : node.budgets)
                if (table_spec_for(node, config.params, budget.difficulty))
                    lanes.push_back(budget.difficulty);
            std::sort(lanes.begin(), lanes.end());
            for (int difficulty : lanes) {
                const TableSpec spec = *table_spec_for(node, config.params, difficulty);
                const TradeoffTable table = build_table(spec, config.params.n);
                const auto path = out_dir / table_filename(node.id, difficulty);
                write_table(table, path);
                std::cout << path.string() << ": " << spec.rows << " rows, chain length "
                          << spec.chain_len << '\n';
                ++built;
            }
        }
        std::cout << built << " table file(s) written\n";
        return exit_ok;
    });
}

int cmd_simulate(const CliOptions& opts) {
    return run_guarded([&] {
        const ExperimentConfig config = load_with_overrides(opts);
        const auto out_dir = resolve_out_dir(opts, config);
        const SimResult result = run_simulation(to_sim_config(config));
        const ordered_json summary = sim_summary_json(config, result);
        atomic_write_file(out_dir / "sim_rounds.csv", rounds_csv(result));
        atomic_write_file(out_dir / "sim_summary.json", summary.dump(2) + "\n");
        const auto& totals = summary.at("totals");
        std::cout << "rounds=" << totals.at("rounds").get<std::uint64_t>()
                  << " honest_blocks=" << totals.at("honest_blocks").get<std::uint64_t>()
                  << " malicious_blocks=" << totals.at("malicious_blocks").get<std::uint64_t>()
                  << " tip=" << totals.at("canonical_tip_pool").get<std::string>() << '\n';
        return exit_ok;
    });
}

int cmd_estimate(const CliOptions& opts) {
    return run_guarded([&] {
        const ExperimentConfig config = load_with_overrides(opts);
        const auto out_dir = resolve_out_dir(opts, config);
        const EstimateOutputs outputs = run_estimate(config);
        atomic_write_file(out_dir / "estimate_report.json", outputs.report.dump(2) + "\n");
        atomic_write_file(out_dir / "estimate_trials.csv", outputs.trials_csv);
        std::cout << outputs.report.at("lemma1").size() << " (node, difficulty) pair(s), "
                  << config.run.trials << " trials each\n";
        return exit_ok;
    });
}

int cmd_mine(const MineOptions& opts) {
    return run_guarded([&] {
        const ExperimentConfig config = load_with_overrides(opts.common);
        if (opts.chain_path.empty())
            throw ConfigError("mine needs a chain file path");

        const auto nodes = sorted_nodes(config);
        const NodeConfig* node = nullptr;
        for (const NodeConfig& candidate : nodes) {
            const bool wanted = opts.node_id ? candidate.id == *opts.node_id
                                             : candidate.role == Role::honest;
            if (wanted) {
                node = &candidate;
                break;
            }
        }
        if (node == nullptr)
            throw ConfigError(opts.node_id
                                  ? "config has no node with id " + std::to_string(*opts.node_id)
                                  : "config has no honest node to mine with");

        int difficulty = 0;
        bool have_difficulty = false;
        if (opts.difficulty) {
            difficulty = *opts.difficulty;
            have_difficulty = true;
        } else {
            std::vector<int> lanes;
            for (const DifficultyBudget& budget : node->budgets)
                if (table_spec_for(*node, config.params, budget.difficulty))
                    lanes.push_back(budget.difficulty);
            if (!lanes.empty()) {
                difficulty = *std::min_element(lanes.begin(), lanes.end());
                have_difficulty = true;
            }
        }
        if (!have_difficulty)
            throw ConfigError("node " + std::to_string(node->id) +
                              " has no nonzero budget to mine with");
        if (!config.params.has_difficulty(difficulty))
            throw ConfigError("unknown difficulty level " + std::to_string(difficulty));
        const auto spec = table_spec_for(*node, config.params, difficulty);
        if (!spec)
            throw ConfigError("node " + std::to_string(node->id) +
                              " has no nonzero budget for difficulty " +
                              std::to_string(difficulty));

        Ledger ledger(config.params);
        if (std::filesystem::exists(opts.chain_path)) {
            for (const Block& block : load_chain(opts.chain_path)) {
                const AppendResult applied = ledger.append_block(block);
                if (!applied.accepted)
                    throw std::runtime_error("chain file block at height " +
                                             std::to_string(block.height) + " rejected: " +
                                             to_string(applied.reason));
            }
        }
        const Block parent = *ledger.find_block(ledger.canonical_tip());

        const TradeoffTable table = build_table(*spec, config.params.n);
        const std::uint64_t round = parent.height + 1;
        std::uint64_t seed = derive_seed(config.run.seed, 0x4d'494e45);  // "MINE"
        seed = derive_seed(seed, node->id);
        seed = derive_seed(seed, round);
        seed = derive_seed(seed, static_cast<std::uint64_t>(difficulty));
        NodeConfig mining = *node;
        mining.seed = seed;

        std::uint64_t tx_seed = derive_seed(config.run.tx_stream_seed, round);
        tx_seed = derive_seed(tx_seed, node->id);
        tx_seed = derive_seed(tx_seed, static_cast<std::uint64_t>(difficulty));
        SplitMix64 tx_rng(tx_seed);
        std::vector<std::uint64_t> txs(config.run.txs_per_block);
        for (auto& tx : txs)
            tx = tx_rng.next();

        const MiningOutcome outcome =
            mine_round(mining, table, parent, txs, config.params, difficulty);
        if (!outcome.block) {
            std::cerr << "exhausted " << outcome.attempts_used << " attempt(s) without a solution\n";
            return exit_failure;
        }
        const AppendResult applied = ledger.append_block(*outcome.block);
        if (!applied.accepted)
            throw std::runtime_error("mined block failed its own append: " +
                                     std::string(to_string(applied.reason)));
        export_chain(ledger, opts.chain_path);
        std::cout << format_block_line(*outcome.block) << '\n';
        return exit_ok;
    });
}

int cmd_verify(const VerifyOptions& opts) {
    return run_guarded([&] {
        const ExperimentConfig config = load_with_overrides(opts.common);
        if (opts.chain_path.empty())
            throw ConfigError("verify needs a chain file path");

        Ledger ledger(config.params);
        std::size_t count = 0;
        for (const Block& block : load_chain(opts.chain_path)) {
            const AppendResult applied = ledger.append_block(block);
            if (!applied.accepted) {
                std::cerr << "block at height " << block.height
                          << " rejected: " << to_string(applied.reason) << '\n';
                return exit_failure;
            }
            ++count;
        }
        std::cout << "chain valid: " << count << " block(s) above genesis\n";
        return exit_ok;
    });
}

int cmd_report(const ReportOptions& opts) {
    return run_guarded([&] {
        if (opts.report_path.empty())
            throw ConfigError("report needs a JSON report path");
        ordered_json doc;
        try {
            doc = ordered_json::parse(read_file_text(opts.report_path));
        } catch (const ordered_json::parse_error& e) {
            throw ConfigError(opts.report_path + ": " + e.what());
        }
        std::cout << report_to_csv(doc);
        return exit_ok;
    });
}

}  // namespace tmdto
