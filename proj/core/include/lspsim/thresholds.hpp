// Ask/grant threshold policies: probability maps, the reciprocity
// constraint, excess utility, and the scan/bisection solver that derives the
// optimal thresholds from the stationarity system with border checks.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lspsim/common.hpp"
#include "lspsim/gainloss.hpp"

namespace lsp {

// Ask threshold meaning "never ask".
inline constexpr double kNeverAsk = std::numeric_limits<double>::infinity();

// Per-size decision thresholds of one operator. An operator asks for the
// largest size k whose fresh gain exceeds theta[k]; it grants size k when it
// did not ask and its loss is at most lambda[k].
struct ThresholdSet {
    std::vector<double> theta;   // ask thresholds, theta[k-1] for size k; may be +inf
    std::vector<double> lambda;  // grant thresholds, lambda[k-1] for size k

    int pool_size() const { return static_cast<int>(theta.size()); }
    double ask(int k) const { return theta.at(static_cast<std::size_t>(k) - 1); }
    double grant(int k) const { return lambda.at(static_cast<std::size_t>(k) - 1); }

    // theta = +inf, lambda = 0: never ask, never grant.
    static ThresholdSet no_trade(int pool_size);
    // Starting policy before the first solver epoch: theta_k = 1.5k, lambda_k = k.
    static ThresholdSet initial(int pool_size);

    bool operator==(const ThresholdSet&) const = default;
};

// Observed opponent behavior, estimated by the game loop from stage
// outcomes. Counts record how many observations back each estimate.
struct OpponentStats {
    std::vector<double> p_ask;    // P(opponent asks size k) per stage
    std::vector<double> p_grant;  // P(opponent grants size k | we asked size k)
    std::vector<long long> ask_observations;    // stages behind p_ask[k]
    std::vector<long long> grant_observations;  // own asks behind p_grant[k]

    int pool_size() const { return static_cast<int>(p_ask.size()); }
    void validate() const;
};

enum class CandidateKind { NoTrade, BorderLow, BorderHigh, Interior };
const char* to_string(CandidateKind kind);

struct ThresholdCandidate {
    CandidateKind kind = CandidateKind::NoTrade;
    ThresholdSet thresholds;
    double lambda1 = 0.0;   // multiplier the candidate was derived from
    double residual = 0.0;  // reciprocity-constraint residual at the candidate
    double excess = 0.0;    // excess utility at the candidate
    bool feasible = false;  // |residual| <= residual_tolerance
    bool chosen = false;
};

struct SearchConfig {
    double lambda1_percentile = 99.9;  // of the largest loss store -> lambda1_max
    double scan_step_fraction = 1e-3;  // scan step as a fraction of lambda1_max
    double bisect_width = 1e-6;        // bisection stops at this bracket width
    double residual_tolerance = 1e-3;  // feasibility cut on |residual|

    bool operator==(const SearchConfig&) const = default;
};

struct SolverReport {
    ThresholdSet chosen;
    double multiplier = 0.0;    // mu = chosen lambda[1]
    double lambda1_max = 0.0;   // upper end of the multiplier scan
    int degenerate_from = 0;    // smallest size with opponent grant prob 0 (0 = none)
    std::vector<ThresholdCandidate> candidates;

    std::string to_text() const;  // human-readable per-epoch report
};

// p[k] = prod_{j>k} F_Gj(theta_j) * (1 - F_Gk(theta_k)): the operator asks
// the largest size whose gain clears its threshold.
std::vector<double> p_ask(const ThresholdSet& thresholds, const StoreSet& stores);

// p[k] = prod_j F_Gj(theta_j) * F_Lk(lambda_k): grants require not asking
// any size at the same stage.
std::vector<double> p_grant(const ThresholdSet& thresholds, const StoreSet& stores);

// sum_k k * own_ask[k] * opp.p_grant[k]  -  sum_k k * opp.p_ask[k] * own_grant[k]
double constraint_residual(const std::vector<double>& own_ask,
                           const std::vector<double>& own_grant, const OpponentStats& opp);

// Expected utility gained from granted asks minus expected utility ceded by
// own grants, per stage.
double excess_utility(const ThresholdSet& thresholds, const StoreSet& stores,
                      const OpponentStats& opp);

// Algebraically equivalent factorization of excess_utility, valid at
// stationary candidates with lambda[k] = k*lambda[1] and a satisfied
// reciprocity constraint; every term is nonnegative there.
double excess_utility_factored(const ThresholdSet& thresholds, const StoreSet& stores,
                               const OpponentStats& opp);

// Thresholds implied by a multiplier value: lambda[k] = k*lambda1, theta[1]
// from the closed-form stationarity equation, theta[k>1] by recursion. Sizes
// whose opponent grant probability is zero fall back to never-ask; the
// smallest such size is written to *degenerate_from (0 if none).
ThresholdSet derive_thresholds(double lambda1, const StoreSet& stores, const OpponentStats& opp,
                               int* degenerate_from = nullptr);

// Scans lambda1 over [0, lambda1_max], bisects residual sign changes, and
// returns the feasible candidate (interior roots, scan borders, no-trade)
// with maximal excess utility.
SolverReport solve_thresholds(const StoreSet& stores, const OpponentStats& opp,
                              const SearchConfig& config = {});

}  // namespace lsp
