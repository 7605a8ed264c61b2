// Result summaries and artifact I/O: per-operator rate statistics, the
// favor-vs-baseline comparison, CSV readers/writers, and the rate-CDF plot.
#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "lspsim/game.hpp"

namespace lsp {

struct OperatorSummary {
    long long samples = 0;  // pooled (stage, user) rate samples
    double mean = 0.0;
    double p10 = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
};

struct ReportSummary {
    std::array<OperatorSummary, 2> favor;
    std::array<OperatorSummary, 2> baseline;
    std::array<double, 2> mean_improvement{};  // favor/baseline - 1
    std::array<double, 2> p10_improvement{};
    std::array<double, 2> p50_improvement{};
    std::array<double, 2> p90_improvement{};
    bool has_ledger = false;
    std::array<long long, 2> taken{};
    std::array<long long, 2> given{};

    std::string to_text() const;
};

OperatorSummary summarize_rates(const RateLog& log, Operator op);

// Both logs must come from identical-seed runs; errors on empty logs.
ReportSummary summarize(const RateLog& favor, const RateLog& baseline,
                        const FavorLedger* ledger = nullptr);

// stage,operator,user,rate
void write_rate_log(const RateLog& log, std::ostream& os);
RateLog read_rate_log(std::istream& is);

// stage,ask_a,ask_b,outcome,grantor,k,utility_a,utility_b
void write_outcomes(const std::vector<StageRecord>& outcomes, std::ostream& os);

// stage,operator,k,theta,lambda,multiplier
void write_trajectory(const std::vector<EpochRecord>& epochs, std::ostream& os);

// operator,stages,taken,given
void write_ledger_totals(const FavorLedger& ledger, std::ostream& os);
// operator,k,asks,grants,opportunities
void write_ledger_counts(const FavorLedger& ledger, std::ostream& os);

// Self-contained SVG: empirical CDF of user rates for both schemes, one
// operator per file, log-scaled rate axis.
void write_rate_cdf_svg(const RateLog& favor, const RateLog& baseline, Operator op,
                        std::ostream& os);

}  // namespace lsp
