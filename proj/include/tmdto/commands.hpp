#ifndef TMDTO_COMMANDS_HPP
#define TMDTO_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace tmdto {

/// Shared options parsed from the command line. `out_dir` resolution order:
/// --out flag, then TMDTO_OUT_DIR, then the config's run.out_dir, then ".".
struct CliOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
};

/// Exit codes shared by all subcommands.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

int cmd_tables_build(const CliOptions& opts);
int cmd_simulate(const CliOptions& opts);
int cmd_estimate(const CliOptions& opts);

/// Mines one block on top of the canonical tip of a chain file and appends it.
/// Defaults: the lowest-id honest node, its lowest nonzero-budget difficulty.
struct MineOptions {
    CliOptions common;
    std::string chain_path;
    std::optional<std::uint64_t> node_id;
    std::optional<int> difficulty;
};
int cmd_mine(const MineOptions& opts);

/// Replays a chain file through full block verification.
struct VerifyOptions {
    CliOptions common;
    std::string chain_path;
};
int cmd_verify(const VerifyOptions& opts);

/// Re-renders a JSON report into CSV on stdout.
struct ReportOptions {
    std::string report_path;
};
int cmd_report(const ReportOptions& opts);

}  // namespace tmdto

#endif
