// fats: freshness-aware Thompson sampling recommender, synthetic
// evaluation harness and report generator.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fats/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Freshness-aware Thompson sampling recommender harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string variant = "fats";
    std::string metrics_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;

    CLI::App* run = app.add_subcommand("run", "Run one algorithm arm end to end");
    run->add_option("--config", config_path, "Path to the JSON config")->required();
    run->add_option("--variant", variant, "Arm to run: ts|fats0|fats05|fats1|fats");
    run->add_option("--seed", seed, "Override the plan seed");
    run->add_option("--out", out_dir, "Override the output directory");

    CLI::App* compare = app.add_subcommand("compare", "Run every configured arm");
    compare->add_option("--config", config_path, "Path to the JSON config")->required();
    compare->add_option("--seed", seed, "Override the plan seed");
    compare->add_option("--out", out_dir, "Override the output directory");

    CLI::App* report = app.add_subcommand("report", "Summarize a metrics CSV");
    report->add_option("metrics", metrics_path, "Path to a metrics.csv")->required();
    report->add_option("--out", out_dir, "Directory for series.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    const fats::CommandOverrides overrides{seed, out_dir};
    if (run->parsed())
        return fats::cmd_run(config_path, variant, overrides, std::cout, std::cerr);
    if (compare->parsed())
        return fats::cmd_compare(config_path, overrides, std::cout, std::cerr);
    return fats::cmd_report(metrics_path, out_dir, std::cout, std::cerr);
}
