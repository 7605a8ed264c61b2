// The repeated spectrum-sharing game: stage protocol (decide, resolve,
// account), initialization sampling, opponent-statistics estimation,
// periodic threshold refresh, and the static baseline run.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lspsim/common.hpp"
#include "lspsim/deployment.hpp"
#include "lspsim/gainloss.hpp"
#include "lspsim/radio.hpp"
#include "lspsim/rng.hpp"
#include "lspsim/scheduler.hpp"
#include "lspsim/thresholds.hpp"

namespace lsp {

enum class ScenarioKind { AsymmetricSwap, Equal, Custom };
const char* to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);

// Per-stage mean loads for both operators plus the master seed that renders
// every stage's snapshot reproducible in isolation.
struct ScenarioSchedule {
    ScenarioKind kind = ScenarioKind::AsymmetricSwap;
    std::vector<std::array<double, 2>> mean_loads;  // per stage {N_A, N_B}
    std::uint64_t seed = 1;

    int stages() const { return static_cast<int>(mean_loads.size()); }
    void validate() const;

    // Heavy/light loads on A/B for the first half, swapped from the
    // midpoint stage onward.
    static ScenarioSchedule asymmetric_swap(int n_stages, std::uint64_t seed,
                                            double heavy = 8.0, double light = 2.0);
    static ScenarioSchedule equal(int n_stages, std::uint64_t seed, double mean = 5.0);
    static ScenarioSchedule custom(std::vector<std::array<double, 2>> loads,
                                   std::uint64_t seed);

    bool operator==(const ScenarioSchedule&) const = default;
};

// Mean-load draw for initialization snapshots: uniform over {low..high},
// covering the scenario means.
struct LoadDistribution {
    int low = 2;
    int high = 8;
    void validate() const;
    bool operator==(const LoadDistribution&) const = default;
};

// Everything a stage evaluation needs besides the schedule.
struct GameParams {
    Layout layout = Layout::default_layout();
    PathlossModel pathloss;
    RadioParams radio;
    SchedulerOptions sched;
    SearchConfig search;
    int update_period = 100;      // stages between threshold refreshes
    ThresholdSet start_thresholds;  // empty -> ThresholdSet::initial(pool size)
    int threads = 0;              // initialization workers; 0 = hardware concurrency
};

// One operator's stage move. gains[k-1] holds the fresh gain(k) values
// examined by the decision rule, largest size first; entries below the
// chosen ask size are not computed (NaN).
struct StageAction {
    int ask_size = 0;  // 0 = idle
    std::vector<double> gains;
    bool asked() const { return ask_size > 0; }
};

enum class OutcomeKind { Default, Exchange };

struct StageOutcome {
    OutcomeKind kind = OutcomeKind::Default;
    Operator asker = Operator::A;    // meaningful only for Exchange
    Operator grantor = Operator::B;  // vacated its pool carriers 1..k
    int k = 0;
    std::array<double, 2> utilities{};                // realized, by operator index
    std::array<std::vector<double>, 2> user_rates;    // realized, bits/s
};

// Memoizes the at-most-2(pool+1)+2 utility evaluations one stage can need,
// shared between both operators' decisions and the outcome accounting.
class StageContext {
public:
    StageContext(const NetworkSnapshot& snap, const GameParams& params)
        : snap_(&snap), params_(&params) {}

    // Optimal utility of `op` when `vacater` has vacated pool carriers
    // 1..k; no vacater means the default allocation (k ignored).
    const UtilityValue& utility(Operator op, std::optional<Operator> vacater, int k);
    double gain(Operator op, int k);  // opponent vacates k; >= 0
    double loss(Operator op, int k);  // self vacates k; >= 0
    const NetworkSnapshot& snapshot() const { return *snap_; }

private:
    const NetworkSnapshot* snap_;
    const GameParams* params_;
    std::map<int, UtilityValue> cache_;
};

// Cumulative favor accounting. Carrier-stages weigh a size-k favor as k.
class FavorLedger {
public:
    explicit FavorLedger(int pool_size = 0);

    void record(const StageAction& action_a, const StageAction& action_b,
                const StageOutcome& outcome);

    int pool_size() const { return pool_; }
    long long stages() const { return stages_; }
    long long taken(Operator op) const { return taken_[index_of(op)]; }
    long long given(Operator op) const { return given_[index_of(op)]; }
    // Stages where op asked size k.
    long long asks(Operator op, int k) const { return at(asks_, op, k); }
    // Stages where op granted size k.
    long long grants(Operator op, int k) const { return at(grants_, op, k); }
    // Stages where op was idle while the other operator asked size k.
    long long grant_opportunities(Operator op, int k) const {
        return at(opportunities_, op, k);
    }

private:
    using Counts = std::array<std::vector<long long>, 2>;
    long long at(const Counts& c, Operator op, int k) const;

    int pool_ = 0;
    long long stages_ = 0;
    std::array<long long, 2> taken_{};
    std::array<long long, 2> given_{};
    Counts asks_;
    Counts grants_;
    Counts opportunities_;
};

struct RateLogEntry {
    int stage = 0;
    Operator op = Operator::A;
    int user = 0;
    double rate = 0.0;  // bits/s

    bool operator==(const RateLogEntry&) const = default;
};

struct RateLog {
    std::vector<RateLogEntry> entries;
    bool operator==(const RateLog&) const = default;
};

struct StageRecord {
    int stage = 0;
    std::array<int, 2> ask_size{};  // per operator; 0 = idle
    OutcomeKind kind = OutcomeKind::Default;
    Operator grantor = Operator::A;  // meaningful only for Exchange
    int k = 0;
    std::array<double, 2> utilities{};
};

// Threshold refresh: both operators' estimates and solver outputs, applied
// from `stage` onward.
struct EpochRecord {
    int stage = 0;
    std::array<OpponentStats, 2> stats;   // [op]: what op believes about its opponent
    std::array<SolverReport, 2> reports;  // [op]: op's new policy
};

struct GameResult {
    RateLog rates;
    std::vector<StageRecord> outcomes;
    std::vector<EpochRecord> epochs;
    FavorLedger ledger;
    std::array<ThresholdSet, 2> final_thresholds;
};

// Snapshot for one stage, a pure function of (schedule, stage): the game
// and the baseline see identical radio environments.
NetworkSnapshot make_stage_snapshot(const ScenarioSchedule& schedule, int stage,
                                    const GameParams& params);

// Largest k with gains[k-1] > theta[k]; 0 when no size clears its threshold.
int choose_ask_size(const std::vector<double>& gains, const ThresholdSet& thresholds);

// Evaluates gains from the largest size down and asks for the largest size
// whose gain exceeds its threshold.
StageAction decide_action(StageContext& ctx, Operator op, const ThresholdSet& thresholds);

// Exchange happens iff exactly one operator asked and the other's loss at
// the asked size is within its grant threshold; otherwise the default state
// stands. Realized utilities and rates come from the resulting allocation.
StageOutcome resolve_stage(StageContext& ctx, const StageAction& action_a,
                           const StageAction& action_b,
                           const std::array<ThresholdSet, 2>& thresholds);

// Samples gain(k)/loss(k) for both operators over n independent snapshots
// with per-snapshot mean loads drawn from `loads`. Returned stores are
// frozen. Parallelizes across snapshots; results are thread-count invariant.
std::array<StoreSet, 2> run_initialization(int n_snapshots, const LoadDistribution& loads,
                                           const GameParams& params, std::uint64_t seed);

// Opponent behavior as observable from the ledger, with add-one smoothing
// while fewer than 10 observations back an estimate.
OpponentStats estimate_opponent(const FavorLedger& ledger, Operator opponent);

// The repeated game over the schedule: every update_period stages each
// operator re-estimates its opponent and re-solves its thresholds from its
// own stores. Allocation resets to the default state every stage.
GameResult run_game(const ScenarioSchedule& schedule, const std::array<StoreSet, 2>& stores,
                    const GameParams& params);

// One-shot equilibrium reference: identical snapshots, default allocation
// at every stage.
RateLog run_baseline(const ScenarioSchedule& schedule, const GameParams& params);

}  // namespace lsp
