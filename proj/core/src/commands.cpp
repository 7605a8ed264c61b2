#include "lspsim/commands.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace lsp {

namespace fs = std::filesystem;

std::string stores_dir(const ExperimentConfig& config) {
    return (fs::path(config.out_dir) / "stores").string();
}

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

std::array<StoreSet, 2> load_stores(const ExperimentConfig& config) {
    try {
        return {StoreSet::load(stores_dir(config), Operator::A, config.radio.pool_size),
                StoreSet::load(stores_dir(config), Operator::B, config.radio.pool_size)};
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) +
                                 " (run the init command for this output directory first)");
    }
}

void print_store_summary(const SampleStore& store, std::ostream& out) {
    out << "  " << std::left << std::setw(24) << store.file_name() << std::right
        << " n=" << store.size();
    if (!store.empty())
        out << " mean=" << format_double(store.mean())
            << " p10=" << format_double(store.percentile(10))
            << " p50=" << format_double(store.percentile(50))
            << " p90=" << format_double(store.percentile(90));
    out << "\n";
}

}  // namespace

int cmd_init(const ExperimentConfig& config, std::ostream& out) {
    config.validate();
    out << "sampling " << config.snapshots << " snapshots (pool size "
        << config.radio.pool_size << ", seed " << config.seed << ")\n";
    const auto stores =
        run_initialization(config.snapshots, config.init_loads, config.game_params(),
                           config.seed);
    fs::create_directories(stores_dir(config));
    for (const StoreSet& set : stores) set.save(stores_dir(config));
    save_config(config, (fs::path(config.out_dir) / "config.ini").string());
    out << "stores written to " << stores_dir(config) << "\n";
    for (const StoreSet& set : stores) {
        for (const SampleStore& s : set.gains) print_store_summary(s, out);
        for (const SampleStore& s : set.losses) print_store_summary(s, out);
    }
    return 0;
}

int cmd_run(const ExperimentConfig& config, std::ostream& out) {
    config.validate();
    const auto stores = load_stores(config);
    const ScenarioSchedule schedule = config.schedule();
    const GameParams params = config.game_params();

    out << "running " << schedule.stages() << " stages, scenario "
        << to_string(config.scenario) << ", seed " << config.seed << "\n";
    const GameResult game = run_game(schedule, stores, params);
    const RateLog baseline = run_baseline(schedule, params);

    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    {
        auto os = open_out(dir / "rates_favor.csv");
        write_rate_log(game.rates, os);
    }
    {
        auto os = open_out(dir / "rates_baseline.csv");
        write_rate_log(baseline, os);
    }
    {
        auto os = open_out(dir / "outcomes.csv");
        write_outcomes(game.outcomes, os);
    }
    {
        auto os = open_out(dir / "thresholds_trajectory.csv");
        write_trajectory(game.epochs, os);
    }
    {
        auto os = open_out(dir / "ledger_totals.csv");
        write_ledger_totals(game.ledger, os);
    }
    {
        auto os = open_out(dir / "ledger_counts.csv");
        write_ledger_counts(game.ledger, os);
    }
    {
        auto os = open_out(dir / "solver_reports.txt");
        for (const EpochRecord& e : game.epochs)
            for (Operator op : kOperators)
                os << "stage " << e.stage << ", operator " << label(op) << "\n"
                   << e.reports[index_of(op)].to_text() << "\n";
    }
    save_config(config, (dir / "config.ini").string());
    out << "wrote rate, outcome, ledger and trajectory CSVs to " << dir.string() << "\n";

    const ReportSummary summary = summarize(game.rates, baseline, &game.ledger);
    {
        auto os = open_out(dir / "summary.txt");
        os << summary.to_text();
    }
    for (Operator op : kOperators) {
        auto os = open_out(dir / (std::string("rate_cdf_") + label(op) + ".svg"));
        write_rate_cdf_svg(game.rates, baseline, op, os);
    }
    out << summary.to_text();
    return 0;
}

int cmd_baseline(const ExperimentConfig& config, std::ostream& out) {
    config.validate();
    const ScenarioSchedule schedule = config.schedule();
    out << "running baseline over " << schedule.stages() << " stages, scenario "
        << to_string(config.scenario) << ", seed " << config.seed << "\n";
    const RateLog baseline = run_baseline(schedule, config.game_params());
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    {
        auto os = open_out(dir / "rates_baseline.csv");
        write_rate_log(baseline, os);
    }
    out << "wrote " << (dir / "rates_baseline.csv").string() << "\n";
    for (Operator op : kOperators) {
        const OperatorSummary s = summarize_rates(baseline, op);
        out << "  " << label(op) << " mean rate "
            << (s.samples > 0 ? format_double(s.mean) : std::string("n/a")) << " over "
            << s.samples << " samples\n";
    }
    return 0;
}

int cmd_report(const ExperimentConfig& config, std::ostream& out) {
    const fs::path dir(config.out_dir);
    const auto read_log = [&](const char* name) {
        std::ifstream is(dir / name);
        if (!is) throw std::runtime_error("cannot open " + (dir / name).string());
        return read_rate_log(is);
    };
    const RateLog favor = read_log("rates_favor.csv");
    const RateLog baseline = read_log("rates_baseline.csv");
    ReportSummary summary = summarize(favor, baseline);

    // Ledger totals are optional; fold them in when the run left them behind.
    std::ifstream ledger_is(dir / "ledger_totals.csv");
    if (ledger_is) {
        std::string line;
        std::getline(ledger_is, line);  // header
        while (std::getline(ledger_is, line)) {
            if (line.empty()) continue;
            std::istringstream fields(line);
            std::string op, stages, taken, given;
            if (std::getline(fields, op, ',') && std::getline(fields, stages, ',') &&
                std::getline(fields, taken, ',') && std::getline(fields, given)) {
                const int i = index_of(operator_from_label(op.at(0)));
                summary.taken[i] = std::stoll(taken);
                summary.given[i] = std::stoll(given);
                summary.has_ledger = true;
            }
        }
    }
    out << summary.to_text();
    return 0;
}

}  // namespace lsp
