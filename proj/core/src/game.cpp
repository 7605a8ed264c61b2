#include "lspsim/game.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace lsp {

namespace {
// Seed streams; initialization and the stage loop never share one even
// under a common master seed.
constexpr std::uint64_t kStreamInitLoad = 1;
constexpr std::uint64_t kStreamInitUsers = 2;
constexpr std::uint64_t kStreamStage = 3;
}  // namespace

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::AsymmetricSwap: return "asymmetric-swap";
        case ScenarioKind::Equal: return "equal";
        case ScenarioKind::Custom: return "custom";
    }
    return "?";
}

ScenarioKind scenario_from_string(const std::string& name) {
    if (name == "asymmetric-swap" || name == "asymmetric") return ScenarioKind::AsymmetricSwap;
    if (name == "equal") return ScenarioKind::Equal;
    if (name == "custom") return ScenarioKind::Custom;
    throw InvalidParameterError("unknown scenario: " + name);
}

void ScenarioSchedule::validate() const {
    for (const auto& loads : mean_loads)
        if (loads[0] < 0.0 || loads[1] < 0.0)
            throw InvalidParameterError("ScenarioSchedule: negative mean load");
}

ScenarioSchedule ScenarioSchedule::asymmetric_swap(int n_stages, std::uint64_t seed,
                                                   double heavy, double light) {
    if (n_stages < 0) throw InvalidParameterError("negative stage count");
    ScenarioSchedule s;
    s.kind = ScenarioKind::AsymmetricSwap;
    s.seed = seed;
    const int midpoint = n_stages / 2;
    for (int i = 0; i < n_stages; ++i)
        s.mean_loads.push_back(i < midpoint ? std::array<double, 2>{heavy, light}
                                            : std::array<double, 2>{light, heavy});
    s.validate();
    return s;
}

ScenarioSchedule ScenarioSchedule::equal(int n_stages, std::uint64_t seed, double mean) {
    if (n_stages < 0) throw InvalidParameterError("negative stage count");
    ScenarioSchedule s;
    s.kind = ScenarioKind::Equal;
    s.seed = seed;
    s.mean_loads.assign(static_cast<std::size_t>(n_stages), {mean, mean});
    s.validate();
    return s;
}

ScenarioSchedule ScenarioSchedule::custom(std::vector<std::array<double, 2>> loads,
                                          std::uint64_t seed) {
    ScenarioSchedule s;
    s.kind = ScenarioKind::Custom;
    s.seed = seed;
    s.mean_loads = std::move(loads);
    s.validate();
    return s;
}

void LoadDistribution::validate() const {
    if (low < 0 || high < low)
        throw InvalidParameterError("LoadDistribution: need 0 <= low <= high");
}

NetworkSnapshot make_stage_snapshot(const ScenarioSchedule& schedule, int stage,
                                    const GameParams& params) {
    if (stage < 0 || stage >= schedule.stages())
        throw InvalidParameterError("make_stage_snapshot: stage outside schedule");
    const auto& loads = schedule.mean_loads[static_cast<std::size_t>(stage)];
    Rng rng(derive_seed(schedule.seed, kStreamStage, static_cast<std::uint64_t>(stage)));
    return make_snapshot(params.layout, params.pathloss, loads[0], loads[1], rng);
}

const UtilityValue& StageContext::utility(Operator op, std::optional<Operator> vacater,
                                          int k) {
    const int pool = params_->radio.pool_size;
    if (vacater && (k < 1 || k > pool))
        throw InvalidParameterError("StageContext: favor size outside pool");
    const int vac = vacater ? 1 + index_of(*vacater) : 0;
    const int key = (index_of(op) * 3 + vac) * (pool + 1) + (vacater ? k : 0);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        AllocationState alloc = AllocationState::all_active(pool);
        if (vacater) alloc.vacate_lowest(*vacater, k);
        it = cache_
                 .emplace(key, evaluate_utility(*snap_, params_->layout, op, alloc,
                                                params_->radio, params_->sched))
                 .first;
    }
    return it->second;
}

double StageContext::gain(Operator op, int k) {
    const double vacated = utility(op, other(op), k).value;
    const double base = utility(op, std::nullopt, 0).value;
    return std::max(0.0, vacated - base);
}

double StageContext::loss(Operator op, int k) {
    const double base = utility(op, std::nullopt, 0).value;
    const double vacated = utility(op, op, k).value;
    return std::max(0.0, base - vacated);
}

FavorLedger::FavorLedger(int pool_size) : pool_(pool_size) {
    if (pool_size < 0) throw InvalidParameterError("FavorLedger: negative pool size");
    for (Counts* c : {&asks_, &grants_, &opportunities_})
        for (auto& v : *c) v.assign(static_cast<std::size_t>(pool_size), 0);
}

long long FavorLedger::at(const Counts& c, Operator op, int k) const {
    if (k < 1 || k > pool_) throw InvalidParameterError("FavorLedger: size outside pool");
    return c[index_of(op)][static_cast<std::size_t>(k) - 1];
}

void FavorLedger::record(const StageAction& action_a, const StageAction& action_b,
                         const StageOutcome& outcome) {
    const std::array<const StageAction*, 2> actions{&action_a, &action_b};
    for (Operator op : kOperators) {
        const int i = index_of(op);
        const StageAction& own = *actions[i];
        const StageAction& opp = *actions[index_of(other(op))];
        if (own.asked()) {
            if (own.ask_size > pool_)
                throw InvalidParameterError("FavorLedger: ask size beyond pool");
            ++asks_[i][static_cast<std::size_t>(own.ask_size) - 1];
        } else if (opp.asked()) {
            ++opportunities_[i][static_cast<std::size_t>(opp.ask_size) - 1];
        }
    }
    if (outcome.kind == OutcomeKind::Exchange) {
        given_[index_of(outcome.grantor)] += outcome.k;
        taken_[index_of(other(outcome.grantor))] += outcome.k;
        ++grants_[index_of(outcome.grantor)][static_cast<std::size_t>(outcome.k) - 1];
    }
    ++stages_;
}

int choose_ask_size(const std::vector<double>& gains, const ThresholdSet& thresholds) {
    if (static_cast<int>(gains.size()) != thresholds.pool_size())
        throw InvalidParameterError("choose_ask_size: gains/thresholds size mismatch");
    for (int k = thresholds.pool_size(); k >= 1; --k)
        if (gains[static_cast<std::size_t>(k) - 1] > thresholds.ask(k)) return k;
    return 0;
}

StageAction decide_action(StageContext& ctx, Operator op, const ThresholdSet& thresholds) {
    StageAction action;
    action.gains.assign(static_cast<std::size_t>(thresholds.pool_size()),
                        std::numeric_limits<double>::quiet_NaN());
    for (int k = thresholds.pool_size(); k >= 1; --k) {
        const double g = ctx.gain(op, k);
        action.gains[static_cast<std::size_t>(k) - 1] = g;
        if (g > thresholds.ask(k)) {
            action.ask_size = k;
            break;
        }
    }
    return action;
}

StageOutcome resolve_stage(StageContext& ctx, const StageAction& action_a,
                           const StageAction& action_b,
                           const std::array<ThresholdSet, 2>& thresholds) {
    StageOutcome out;
    if (action_a.asked() != action_b.asked()) {
        const Operator asker = action_a.asked() ? Operator::A : Operator::B;
        const Operator grantor = other(asker);
        const int k = action_a.asked() ? action_a.ask_size : action_b.ask_size;
        if (ctx.loss(grantor, k) <= thresholds[index_of(grantor)].grant(k)) {
            out.kind = OutcomeKind::Exchange;
            out.asker = asker;
            out.grantor = grantor;
            out.k = k;
        }
    }
    for (Operator op : kOperators) {
        const UtilityValue& u = out.kind == OutcomeKind::Exchange
                                    ? ctx.utility(op, out.grantor, out.k)
                                    : ctx.utility(op, std::nullopt, 0);
        out.utilities[index_of(op)] = u.value;
        out.user_rates[index_of(op)] = u.per_user_rates;
    }
    return out;
}

std::array<StoreSet, 2> run_initialization(int n_snapshots, const LoadDistribution& loads,
                                           const GameParams& params, std::uint64_t seed) {
    if (n_snapshots < 0)
        throw InvalidParameterError("run_initialization: negative snapshot count");
    loads.validate();
    params.layout.validate();
    params.radio.validate();
    const int pool = params.radio.pool_size;

    struct SnapshotSamples {
        std::array<std::vector<double>, 2> gains;
        std::array<std::vector<double>, 2> losses;
    };
    std::vector<SnapshotSamples> results(static_cast<std::size_t>(n_snapshots));

    std::exception_ptr worker_error;
    std::mutex error_mutex;
    const auto worker = [&](int begin, int end) {
        try {
            for (int i = begin; i < end; ++i) {
                Rng load_rng(derive_seed(seed, kStreamInitLoad, static_cast<std::uint64_t>(i)));
                const double mean_a = load_rng.uniform_int(loads.low, loads.high);
                const double mean_b = load_rng.uniform_int(loads.low, loads.high);
                Rng user_rng(derive_seed(seed, kStreamInitUsers, static_cast<std::uint64_t>(i)));
                const NetworkSnapshot snap =
                    make_snapshot(params.layout, params.pathloss, mean_a, mean_b, user_rng);
                StageContext ctx(snap, params);
                SnapshotSamples& r = results[static_cast<std::size_t>(i)];
                for (Operator op : kOperators) {
                    const int oi = index_of(op);
                    r.gains[oi].resize(static_cast<std::size_t>(pool));
                    r.losses[oi].resize(static_cast<std::size_t>(pool));
                    for (int k = 1; k <= pool; ++k) {
                        r.gains[oi][static_cast<std::size_t>(k) - 1] = ctx.gain(op, k);
                        r.losses[oi][static_cast<std::size_t>(k) - 1] = ctx.loss(op, k);
                    }
                }
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!worker_error) worker_error = std::current_exception();
        }
    };

    int n_threads =
        params.threads > 0 ? params.threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, std::max(1, n_snapshots));
    if (n_threads == 1) {
        worker(0, n_snapshots);
    } else {
        std::vector<std::thread> threads;
        const int chunk = (n_snapshots + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(n_snapshots, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(worker, begin, end);
        }
        for (auto& th : threads) th.join();
    }
    if (worker_error) std::rethrow_exception(worker_error);

    std::array<StoreSet, 2> stores{StoreSet::make(Operator::A, pool),
                                   StoreSet::make(Operator::B, pool)};
    for (const SnapshotSamples& r : results)
        for (Operator op : kOperators) {
            const int oi = index_of(op);
            for (int k = 1; k <= pool; ++k) {
                stores[oi].gains[static_cast<std::size_t>(k) - 1].append(
                    r.gains[oi][static_cast<std::size_t>(k) - 1]);
                stores[oi].losses[static_cast<std::size_t>(k) - 1].append(
                    r.losses[oi][static_cast<std::size_t>(k) - 1]);
            }
        }
    for (StoreSet& s : stores) s.freeze_all();
    return stores;
}

OpponentStats estimate_opponent(const FavorLedger& ledger, Operator opponent) {
    const int pool = ledger.pool_size();
    if (pool < 1) throw InvalidParameterError("estimate_opponent: ledger has no pool");
    OpponentStats stats;
    const long long stages = ledger.stages();
    for (int k = 1; k <= pool; ++k) {
        const long long asked = ledger.asks(opponent, k);
        const double p_ask =
            stages < 10
                ? static_cast<double>(asked + 1) / static_cast<double>(stages + 2LL * pool)
                : static_cast<double>(asked) / static_cast<double>(stages);
        stats.p_ask.push_back(p_ask);
        stats.ask_observations.push_back(stages);

        const long long chances = ledger.grant_opportunities(opponent, k);
        const long long granted = ledger.grants(opponent, k);
        const double p_grant =
            chances < 10 ? static_cast<double>(granted + 1) / static_cast<double>(chances + 2)
                         : static_cast<double>(granted) / static_cast<double>(chances);
        stats.p_grant.push_back(p_grant);
        stats.grant_observations.push_back(chances);
    }
    stats.validate();
    return stats;
}

GameResult run_game(const ScenarioSchedule& schedule, const std::array<StoreSet, 2>& stores,
                    const GameParams& params) {
    schedule.validate();
    params.layout.validate();
    params.radio.validate();
    const int pool = params.radio.pool_size;
    for (const StoreSet& s : stores)
        if (s.pool_size() != pool)
            throw InvalidParameterError("run_game: store pool size mismatch");
    if (params.update_period < 1)
        throw InvalidParameterError("run_game: update_period must be >= 1");
    if (!params.start_thresholds.theta.empty() &&
        params.start_thresholds.pool_size() != pool)
        throw InvalidParameterError("run_game: start thresholds pool size mismatch");

    const ThresholdSet start = params.start_thresholds.theta.empty()
                                   ? ThresholdSet::initial(pool)
                                   : params.start_thresholds;
    std::array<ThresholdSet, 2> thresholds{start, start};

    GameResult result;
    result.ledger = FavorLedger(pool);

    for (int stage = 0; stage < schedule.stages(); ++stage) {
        if (stage > 0 && stage % params.update_period == 0) {
            EpochRecord epoch;
            epoch.stage = stage;
            for (Operator op : kOperators) {
                const int i = index_of(op);
                epoch.stats[i] = estimate_opponent(result.ledger, other(op));
                epoch.reports[i] = solve_thresholds(stores[i], epoch.stats[i], params.search);
                thresholds[i] = epoch.reports[i].chosen;
            }
            result.epochs.push_back(std::move(epoch));
        }

        const NetworkSnapshot snap = make_stage_snapshot(schedule, stage, params);
        StageContext ctx(snap, params);
        const StageAction action_a = decide_action(ctx, Operator::A, thresholds[0]);
        const StageAction action_b = decide_action(ctx, Operator::B, thresholds[1]);
        const StageOutcome outcome = resolve_stage(ctx, action_a, action_b, thresholds);
        result.ledger.record(action_a, action_b, outcome);

        StageRecord record;
        record.stage = stage;
        record.ask_size = {action_a.ask_size, action_b.ask_size};
        record.kind = outcome.kind;
        record.grantor = outcome.grantor;
        record.k = outcome.k;
        record.utilities = outcome.utilities;
        result.outcomes.push_back(record);

        for (Operator op : kOperators) {
            const auto& rates = outcome.user_rates[index_of(op)];
            for (std::size_t u = 0; u < rates.size(); ++u)
                result.rates.entries.push_back(
                    {stage, op, static_cast<int>(u), rates[u]});
        }
    }
    result.final_thresholds = thresholds;
    return result;
}

RateLog run_baseline(const ScenarioSchedule& schedule, const GameParams& params) {
    schedule.validate();
    params.layout.validate();
    params.radio.validate();
    RateLog log;
    const AllocationState def = AllocationState::all_active(params.radio.pool_size);
    for (int stage = 0; stage < schedule.stages(); ++stage) {
        const NetworkSnapshot snap = make_stage_snapshot(schedule, stage, params);
        for (Operator op : kOperators) {
            const UtilityValue u =
                evaluate_utility(snap, params.layout, op, def, params.radio, params.sched);
            for (std::size_t i = 0; i < u.per_user_rates.size(); ++i)
                log.entries.push_back({stage, op, static_cast<int>(i), u.per_user_rates[i]});
        }
    }
    return log;
}

}  // namespace lsp
