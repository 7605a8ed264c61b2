#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lspsim/commands.hpp"
#include "lspsim/config.hpp"

namespace {

struct CliValues {
    std::string config_path;
    std::string out_dir;
    std::string scenario;
    std::uint64_t seed = 0;
    int stages = 0;
    int snapshots = 0;
    int pool_size = 0;
};

void add_common_options(CLI::App* sub, CliValues& v) {
    sub->add_option("--config", v.config_path, "configuration file (sections of key = value)");
    sub->add_option("--seed", v.seed, "master seed override");
    sub->add_option("--out", v.out_dir, "output directory override");
    sub->add_option("--stages", v.stages, "stage-game count override");
    sub->add_option("--snapshots", v.snapshots, "initialization snapshot count override");
    sub->add_option("--pool-size", v.pool_size, "shared pool size K override");
    sub->add_option("--scenario", v.scenario,
                    "load scenario: asymmetric-swap | equal | custom");
}

lsp::ExperimentConfig assemble_config(const CLI::App* sub, const CliValues& v) {
    lsp::ExperimentConfig config;
    if (!v.config_path.empty()) config = lsp::load_config(v.config_path);
    if (sub->count("--seed") > 0) config.seed = v.seed;
    if (sub->count("--out") > 0) config.out_dir = v.out_dir;
    if (sub->count("--stages") > 0) config.stages = v.stages;
    if (sub->count("--snapshots") > 0) config.snapshots = v.snapshots;
    if (sub->count("--pool-size") > 0) config.radio.pool_size = v.pool_size;
    if (sub->count("--scenario") > 0) config.scenario = lsp::scenario_from_string(v.scenario);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-primary spectrum sharing simulator over a limited spectrum pool"};
    app.require_subcommand(1);

    CliValues values;
    CLI::App* init =
        app.add_subcommand("init", "sample and persist the gain/loss stores");
    CLI::App* run = app.add_subcommand(
        "run", "play the favor-exchange game plus the identically-seeded baseline");
    CLI::App* baseline =
        app.add_subcommand("baseline", "run only the static-allocation baseline");
    CLI::App* report =
        app.add_subcommand("report", "recompute the summary from stored CSVs");
    for (CLI::App* sub : {init, run, baseline, report}) add_common_options(sub, values);

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    try {
        const lsp::ExperimentConfig config = assemble_config(sub, values);
        if (sub == init) return lsp::cmd_init(config, std::cout);
        if (sub == run) return lsp::cmd_run(config, std::cout);
        if (sub == baseline) return lsp::cmd_baseline(config, std::cout);
        return lsp::cmd_report(config, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
