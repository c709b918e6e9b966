#include "tmdto/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tmdto/analysis.hpp"
#include "tmdto/corefn.hpp"
#include "tmdto/tradeoff.hpp"

namespace tmdto {

namespace {

constexpr std::uint64_t estimate_seed_tag = 0x4553'54;  // "EST"

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

ordered_json params_json(const SystemParams& params) {
    ordered_json out;
    out["n"] = params.n.bits;
    out["d"] = params.zero_prefix_bits;
    out["slot_ticks"] = params.slot_ticks;
    out["challenge_ticks"] = params.challenge_ticks;
    out["mode"] = to_string(params.mode);
    out["difficulties"] = ordered_json::array();
    for (const DifficultyLevel& lvl : params.difficulties)
        out["difficulties"].push_back({{"j", lvl.difficulty}, {"ell", lvl.ell}});
    return out;
}

ordered_json nodes_json(const std::vector<NodeConfig>& nodes) {
    ordered_json out = ordered_json::array();
    for (const NodeConfig& node : nodes) {
        ordered_json entry;
        entry["id"] = node.id;
        entry["role"] = to_string(node.role);
        entry["budgets"] = ordered_json::array();
        for (const DifficultyBudget& budget : node.budgets)
            entry["budgets"].push_back({{"j", budget.difficulty},
                                        {"rows", budget.rows},
                                        {"chain_len", budget.chain_len}});
        out.push_back(std::move(entry));
    }
    return out;
}

ordered_json rounds_to_json(const SimResult& result) {
    ordered_json out = ordered_json::array();
    for (const RoundRecord& record : result.rounds) {
        ordered_json entry;
        entry["round"] = record.round;
        entry["honest_blocks"] = record.honest_blocks;
        entry["malicious_blocks"] = record.malicious_blocks;
        entry["canonical_tip_pool"] = to_string(record.canonical_tip_pool);
        entry["nodes"] = ordered_json::array();
        for (const NodeRoundSummary& node : record.nodes)
            entry["nodes"].push_back({{"node", node.node},
                                      {"role", to_string(node.role)},
                                      {"attempts", node.attempts},
                                      {"solved", node.solved},
                                      {"ticks", node.ticks}});
        out.push_back(std::move(entry));
    }
    return out;
}

std::string csv_from_rounds(const ordered_json& rounds) {
    std::string csv = "round,node,role,attempts,solved,ticks\n";
    for (const auto& record : rounds) {
        const std::string round = std::to_string(record.at("round").get<std::uint64_t>());
        for (const auto& node : record.at("nodes")) {
            csv += round;
            csv += ',';
            csv += std::to_string(node.at("node").get<std::uint64_t>());
            csv += ',';
            csv += node.at("role").get<std::string>();
            csv += ',';
            csv += std::to_string(node.at("attempts").get<std::uint64_t>());
            csv += ',';
            csv += std::to_string(node.at("solved").get<std::uint64_t>());
            csv += ',';
            csv += std::to_string(node.at("ticks").get<std::uint64_t>());
            csv += '\n';
        }
    }
    return csv;
}

std::vector<NodeConfig> sorted_nodes(const ExperimentConfig& config) {
    std::vector<NodeConfig> nodes = config.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const NodeConfig& a, const NodeConfig& b) { return a.id < b.id; });
    return nodes;
}

ordered_json security_json(const SecurityConditionReport& report) {
    ordered_json out;
    out["lhs"] = report.lhs;
    out["rhs"] = report.rhs;
    if (std::isfinite(report.margin))
        out["margin"] = report.margin;
    else
        out["margin"] = nullptr;
    out["factor"] = report.factor;
    out["holds"] = report.holds;
    return out;
}

}  // namespace

std::string rounds_csv(const SimResult& result) {
    return csv_from_rounds(rounds_to_json(result));
}

ordered_json sim_summary_json(const ExperimentConfig& config, const SimResult& result) {
    ordered_json out;
    out["kind"] = "sim_summary";
    out["params"] = params_json(config.params);
    out["run"] = {{"rounds", config.run.rounds},
                  {"seed", config.run.seed},
                  {"tx_stream_seed", config.run.tx_stream_seed},
                  {"txs_per_block", config.run.txs_per_block}};
    const auto nodes = sorted_nodes(config);
    out["nodes"] = nodes_json(nodes);

    const auto honest = config.honest_nodes();
    const auto malicious = config.malicious_nodes();
    out["prediction"] = ordered_json::array();
    for (const DifficultyLevel& lvl : config.params.difficulties) {
        ordered_json entry;
        entry["difficulty"] = lvl.difficulty;
        entry["honest_blocks_lower"] = pool_expected_blocks(honest, config.params,
                                                            lvl.difficulty, PoolBound::lower);
        entry["malicious_blocks_upper"] =
            malicious.empty() ? 0.0
                              : pool_expected_blocks(malicious, config.params, lvl.difficulty,
                                                     PoolBound::upper);
        if (!malicious.empty())
            entry["security"] = security_json(security_condition(
                honest, malicious, config.params, lvl.difficulty, config.run.security_factor));
        out["prediction"].push_back(std::move(entry));
    }

    out["rounds"] = rounds_to_json(result);

    std::uint64_t honest_blocks = 0;
    std::uint64_t malicious_blocks = 0;
    for (const RoundRecord& record : result.rounds) {
        honest_blocks += record.honest_blocks;
        malicious_blocks += record.malicious_blocks;
    }
    const double rounds = static_cast<double>(result.rounds.size());
    const Block& tip = *result.ledger.find_block(result.ledger.canonical_tip());
    ordered_json totals;
    totals["rounds"] = result.rounds.size();
    totals["honest_blocks"] = honest_blocks;
    totals["malicious_blocks"] = malicious_blocks;
    totals["honest_blocks_per_round"] = static_cast<double>(honest_blocks) / rounds;
    totals["malicious_blocks_per_round"] = static_cast<double>(malicious_blocks) / rounds;
    totals["canonical_height"] = tip.height;
    totals["canonical_tip_digest"] = hex16(result.ledger.canonical_tip());
    totals["canonical_tip_pool"] =
        to_string(result.rounds.empty() ? Pool::honest : result.rounds.back().canonical_tip_pool);
    out["totals"] = std::move(totals);
    return out;
}

EstimateOutputs run_estimate(const ExperimentConfig& config) {
    const SystemParams& params = config.params;
    const auto nodes = sorted_nodes(config);

    EstimateOutputs out;
    out.report["kind"] = "estimate_report";
    out.report["params"] = params_json(params);
    out.report["run"] = {{"seed", config.run.seed},
                         {"trials", config.run.trials},
                         {"security_factor", config.run.security_factor}};
    out.trials_csv = "node,difficulty,trial,challenge,hit\n";

    ordered_json lemma1 = ordered_json::array();
    for (const NodeConfig& node : nodes) {
        std::vector<int> lanes;
        for (const DifficultyBudget& budget : node.budgets)
            if (table_spec_for(node, params, budget.difficulty))
                lanes.push_back(budget.difficulty);
        std::sort(lanes.begin(), lanes.end());

        for (int difficulty : lanes) {
            const TableSpec spec = *table_spec_for(node, params, difficulty);
            const TradeoffTable table = build_table(spec, params.n);
            const std::uint64_t attempts =
                params.slot_ticks / (params.challenge_ticks + spec.chain_len);

            ordered_json row;
            row["node"] = node.id;
            row["difficulty"] = difficulty;
            row["mode"] = to_string(spec.mode);
            row["rows"] = spec.rows;
            row["chain_len"] = spec.chain_len;
            row["attempts_per_slot"] = attempts;

            const auto p_suffix = predict_success(1, spec.rows, spec.chain_len,
                                                  Mode::unconstrained, params.n, spec.ell);
            const auto p_key = predict_success(1, spec.rows, spec.chain_len, Mode::constrained,
                                               params.n, spec.ell);
            row["predicted_single"] = {{"suffix_space", p_suffix.probability},
                                       {"suffix_space_clamped", p_suffix.clamped},
                                       {"key_space", p_key.probability},
                                       {"key_space_clamped", p_key.clamped}};
            if (attempts >= 1) {
                const auto p_slot = predict_success(attempts, spec.rows, spec.chain_len,
                                                    params.mode, params.n, spec.ell);
                row["predicted_slot"] = {{"probability", p_slot.probability},
                                         {"clamped", p_slot.clamped},
                                         {"space_log2", p_slot.space_log2}};
            } else {
                row["predicted_slot"] = {{"probability", 0.0},
                                         {"clamped", false},
                                         {"space_log2",
                                          params.mode == Mode::constrained ? params.n.bits
                                                                           : spec.ell}};
            }

            const double suffix_space = std::ldexp(1.0, spec.ell);
            std::vector<std::uint64_t> suffixes;
            suffixes.reserve(table.rows().size());
            const std::uint64_t ell_mask =
                spec.ell == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << spec.ell) - 1;
            for (const TableRow& r : table.rows())
                suffixes.push_back(r.end & ell_mask);
            std::sort(suffixes.begin(), suffixes.end());
            suffixes.erase(std::unique(suffixes.begin(), suffixes.end()), suffixes.end());
            row["endpoint_floor"] = static_cast<double>(suffixes.size()) / suffix_space;

            const auto entries =
                static_cast<unsigned __int128>(spec.rows) * spec.chain_len;
            if (entries <= (static_cast<unsigned __int128>(1) << 24)) {
                const auto covered = covered_set(table);
                const double oracle = static_cast<double>(covered.size()) / suffix_space;
                row["oracle"] = oracle;
                row["oracle_entries"] = covered.size();
                row["closer_prediction"] =
                    std::fabs(p_suffix.probability - oracle) <=
                            std::fabs(p_key.probability - oracle)
                        ? "suffix_space"
                        : "key_space";
            } else {
                row["oracle"] = nullptr;
                row["oracle_entries"] = nullptr;
                row["closer_prediction"] = nullptr;
            }

            std::uint64_t trial_seed = derive_seed(config.run.seed, estimate_seed_tag);
            trial_seed = derive_seed(trial_seed, node.id);
            trial_seed = derive_seed(trial_seed, static_cast<std::uint64_t>(difficulty));
            const auto records = run_trials(table, config.run.trials, trial_seed);
            std::uint64_t hits = 0;
            for (std::size_t i = 0; i < records.size(); ++i) {
                hits += records[i].hit ? 1 : 0;
                out.trials_csv += std::to_string(node.id);
                out.trials_csv += ',';
                out.trials_csv += std::to_string(difficulty);
                out.trials_csv += ',';
                out.trials_csv += std::to_string(i);
                out.trials_csv += ',';
                out.trials_csv += hex16(records[i].challenge);
                out.trials_csv += ',';
                out.trials_csv += records[i].hit ? '1' : '0';
                out.trials_csv += '\n';
            }
            const WilsonInterval interval = wilson95(hits, config.run.trials);
            row["empirical"] = {
                {"trials", config.run.trials},
                {"hits", hits},
                {"probability",
                 static_cast<double>(hits) / static_cast<double>(config.run.trials)},
                {"wilson_low", interval.low},
                {"wilson_high", interval.high}};
            lemma1.push_back(std::move(row));
        }
    }
    out.report["lemma1"] = std::move(lemma1);

    const auto honest = config.honest_nodes();
    const auto malicious = config.malicious_nodes();
    ordered_json theorem1 = ordered_json::array();
    if (!honest.empty() && !malicious.empty()) {
        for (const DifficultyLevel& lvl : params.difficulties) {
            ordered_json entry;
            entry["difficulty"] = lvl.difficulty;
            entry.update(security_json(security_condition(
                honest, malicious, params, lvl.difficulty, config.run.security_factor)));
            theorem1.push_back(std::move(entry));
        }
    }
    out.report["theorem1"] = std::move(theorem1);

    // Representative table size for the scheme comparison: the largest
    // honest table, falling back to the largest table of any node.
    std::uint64_t rep_rows = 0;
    std::uint64_t rep_chain = 0;
    for (const NodeConfig& node : nodes) {
        for (const DifficultyBudget& budget : node.budgets) {
            if (budget.rows == 0 || budget.chain_len == 0)
                continue;
            const bool better = node.role == Role::honest
                                    ? budget.rows > rep_rows
                                    : rep_rows == 0;
            if (better) {
                rep_rows = budget.rows;
                rep_chain = budget.chain_len;
            }
        }
    }
    double rep_probability = 0.0;
    if (rep_rows >= 1) {
        const std::uint64_t attempts = params.slot_ticks / (params.challenge_ticks + rep_chain);
        if (attempts >= 1)
            rep_probability = predict_success(attempts, rep_rows, rep_chain, params.mode,
                                              params.n, params.difficulties.front().ell)
                                  .probability;
    }
    const ComplexityReport complexity =
        comparison_table(params, rep_rows >= 1 ? rep_rows : 1, rep_probability, nodes);
    ordered_json cj;
    cj["rows_param"] = complexity.rows_param;
    cj["space_log2"] = complexity.space_log2;
    cj["probability"] = complexity.probability;
    cj["comparison"] = ordered_json::array();
    for (const ComparisonRow& row : complexity.comparison)
        cj["comparison"].push_back({{"scheme", row.scheme},
                                    {"time_expr", row.time_expr},
                                    {"space_expr", row.space_expr},
                                    {"time_units", row.time_units},
                                    {"space_units", row.space_units}});
    cj["time_reduction_vs_pow"] = complexity.time_reduction_vs_pow;
    cj["space_factor_vs_pos"] = complexity.space_factor_vs_pos;
    cj["per_node"] = ordered_json::array();
    for (const NodeComplexity& row : complexity.per_node)
        cj["per_node"].push_back({{"node", row.node},
                                  {"difficulty", row.difficulty},
                                  {"preprocessing_time", row.preprocessing_time},
                                  {"table_space", row.table_space},
                                  {"processing_time", row.processing_time}});
    cj["system_energy_per_block"] = complexity.system_energy_per_block;
    cj["system_space"] = complexity.system_space;
    out.report["complexity"] = std::move(cj);
    return out;
}

std::string report_to_csv(const ordered_json& report) {
    const auto kind_it = report.find("kind");
    if (kind_it == report.end() || !kind_it->is_string())
        throw ConfigError("report document carries no kind field");
    const std::string kind = kind_it->get<std::string>();
    if (kind == "sim_summary")
        return csv_from_rounds(report.at("rounds"));
    if (kind == "estimate_report") {
        std::string csv =
            "node,difficulty,rows,chain_len,predicted_suffix_space,predicted_key_space,"
            "oracle,empirical,wilson_low,wilson_high\n";
        for (const auto& row : report.at("lemma1")) {
            csv += std::to_string(row.at("node").get<std::uint64_t>());
            csv += ',';
            csv += std::to_string(row.at("difficulty").get<std::int64_t>());
            csv += ',';
            csv += std::to_string(row.at("rows").get<std::uint64_t>());
            csv += ',';
            csv += std::to_string(row.at("chain_len").get<std::uint64_t>());
            csv += ',';
            csv += fmt_real(row.at("predicted_single").at("suffix_space").get<double>());
            csv += ',';
            csv += fmt_real(row.at("predicted_single").at("key_space").get<double>());
            csv += ',';
            const auto& oracle = row.at("oracle");
            csv += oracle.is_null() ? "" : fmt_real(oracle.get<double>());
            csv += ',';
            csv += fmt_real(row.at("empirical").at("probability").get<double>());
            csv += ',';
            csv += fmt_real(row.at("empirical").at("wilson_low").get<double>());
            csv += ',';
            csv += fmt_real(row.at("empirical").at("wilson_high").get<double>());
            csv += '\n';
        }
        return csv;
    }
    throw ConfigError("report document kind '" + kind + "' has no CSV rendering");
}

}  // namespace tmdto
