#include <string>

#include "CLI11.hpp"

#include "tmdto/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"time-memory trade-off consensus toolkit"};
    app.require_subcommand(1);

    tmdto::CliOptions common;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "experiment config file (JSON)")
            ->required();
        cmd->add_option("--out", common.out_dir, "output directory (overrides TMDTO_OUT_DIR)");
        cmd->add_option("--seed", common.seed, "override the run seed");
        cmd->add_option("--trials", common.trials, "override the trial count");
    };

    int rc = 0;

    auto* tables = app.add_subcommand("tables", "trade-off table management");
    tables->require_subcommand(1);
    auto* tables_build =
        tables->add_subcommand("build", "build one table file per (node, difficulty) budget");
    add_common(tables_build);
    tables_build->callback([&] { rc = tmdto::cmd_tables_build(common); });

    auto* simulate = app.add_subcommand("simulate", "run the multi-round mining simulation");
    add_common(simulate);
    simulate->callback([&] { rc = tmdto::cmd_simulate(common); });

    auto* estimate =
        app.add_subcommand("estimate", "predicted vs measured success rates and complexity");
    add_common(estimate);
    estimate->callback([&] { rc = tmdto::cmd_estimate(common); });

    tmdto::MineOptions mine_opts;
    auto* mine = app.add_subcommand("mine", "mine one block onto a chain file");
    mine->add_option("chain", mine_opts.chain_path, "chain file to extend")->required();
    add_common(mine);
    mine->add_option("--node", mine_opts.node_id, "mining node id (default: first honest node)");
    mine->add_option("--difficulty", mine_opts.difficulty,
                     "difficulty level (default: the node's lowest)");
    mine->callback([&] {
        mine_opts.common = common;
        rc = tmdto::cmd_mine(mine_opts);
    });

    tmdto::VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "replay a chain file through full validation");
    verify->add_option("chain", verify_opts.chain_path, "chain file to verify")->required();
    add_common(verify);
    verify->callback([&] {
        verify_opts.common = common;
        rc = tmdto::cmd_verify(verify_opts);
    });

    tmdto::ReportOptions report_opts;
    auto* report = app.add_subcommand("report", "re-render a JSON report as CSV on stdout");
    report->add_option("report", report_opts.report_path, "report JSON file")->required();
    report->callback([&] { rc = tmdto::cmd_report(report_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tmdto::exit_usage;
    }
    return rc;
}
