// Experiment configuration: one flat key-value file with sections covering
// every tunable of the simulator. Defaults reproduce the reference setup;
// serialization round-trips bit-exactly.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lspsim/game.hpp"

namespace lsp {

struct ExperimentConfig {
    std::uint64_t seed = 1;
    int stages = 2000;
    int snapshots = 20000;
    int update_period = 100;
    ScenarioKind scenario = ScenarioKind::AsymmetricSwap;
    double heavy_load = 8.0;
    double light_load = 2.0;
    double equal_load = 5.0;
    std::vector<std::array<double, 2>> custom_loads;  // per stage, scenario == Custom
    LoadDistribution init_loads;
    std::string out_dir = "out";
    int threads = 0;
    Layout layout = Layout::default_layout();
    PathlossModel pathloss;
    RadioParams radio;
    SchedulerOptions sched;
    SearchConfig search;
    ThresholdSet start_thresholds;  // empty -> ThresholdSet::initial(pool size)

    GameParams game_params() const;
    ScenarioSchedule schedule() const;
    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);
void write_config(const ExperimentConfig& config, std::ostream& os);
void save_config(const ExperimentConfig& config, const std::string& path);

// Default-format double with enough digits to round-trip exactly.
std::string format_double(double value);

}  // namespace lsp
