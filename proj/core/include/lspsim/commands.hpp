// Library entry points behind the CLI subcommands; each writes its
// artifacts under the config's output directory and narrates to `out`.
#pragma once

#include <iosfwd>
#include <string>

#include "lspsim/config.hpp"
#include "lspsim/report.hpp"

namespace lsp {

// Store files live in <out_dir>/stores; all other artifacts in <out_dir>.
std::string stores_dir(const ExperimentConfig& config);

// Samples the gain/loss stores and persists them.
int cmd_init(const ExperimentConfig& config, std::ostream& out);

// Runs the favor-exchange game and the identically-seeded baseline; writes
// rate/outcome/ledger/trajectory CSVs, solver reports, summary, and one
// rate-CDF SVG per operator.
int cmd_run(const ExperimentConfig& config, std::ostream& out);

// Runs only the static baseline and writes its rate CSV.
int cmd_baseline(const ExperimentConfig& config, std::ostream& out);

// Recomputes the summary from previously written rate CSVs.
int cmd_report(const ExperimentConfig& config, std::ostream& out);

}  // namespace lsp
