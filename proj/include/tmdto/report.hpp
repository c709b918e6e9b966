#ifndef TMDTO_REPORT_HPP
#define TMDTO_REPORT_HPP

#include <string>

#include "tmdto/config.hpp"
#include "tmdto/sim.hpp"

#include "json.hpp"

namespace tmdto {

using ordered_json = nlohmann::ordered_json;

/// Per-round CSV (`round,node,role,attempts,solved,ticks`).
std::string rounds_csv(const SimResult& result);

/// Structured run summary: pool totals, canonical tip ownership, expected
/// vs measured block rates, and the per-round records (so the CSV can be
/// re-rendered from the document alone).
ordered_json sim_summary_json(const ExperimentConfig& config, const SimResult& result);

/// Analysis outputs: the report juxtaposes predicted, exact-coverage and
/// measured success per (node, difficulty), the security condition per
/// difficulty, and the complexity accounting; the CSV carries the raw
/// per-trial outcomes (`node,difficulty,trial,challenge,hit`).
struct EstimateOutputs {
    ordered_json report;
    std::string trials_csv;
};

EstimateOutputs run_estimate(const ExperimentConfig& config);

/// Re-render a known report document to its CSV form: a sim summary yields
/// the rounds CSV byte-identically, an estimate report yields one summary
/// row per (node, difficulty). Unknown documents raise ConfigError.
std::string report_to_csv(const ordered_json& report);

}  // namespace tmdto

#endif
