#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lspsim/game.hpp"

using namespace lsp;

namespace {

GameParams small_params() {
    GameParams params;
    params.threads = 1;
    return params;
}

StageAction ask(int k) {
    StageAction a;
    a.ask_size = k;
    return a;
}

StageOutcome exchange(Operator grantor, int k) {
    StageOutcome o;
    o.kind = OutcomeKind::Exchange;
    o.asker = other(grantor);
    o.grantor = grantor;
    o.k = k;
    return o;
}

std::string store_text(const StoreSet& set) {
    std::ostringstream os;
    for (const SampleStore& s : set.gains) s.write(os);
    for (const SampleStore& s : set.losses) s.write(os);
    return os.str();
}

}  // namespace

TEST_CASE("scenario schedules cover the reference shapes") {
    const ScenarioSchedule swap = ScenarioSchedule::asymmetric_swap(10, 1);
    REQUIRE(swap.stages() == 10);
    CHECK(swap.mean_loads[0] == std::array<double, 2>{8.0, 2.0});
    CHECK(swap.mean_loads[4] == std::array<double, 2>{8.0, 2.0});
    CHECK(swap.mean_loads[5] == std::array<double, 2>{2.0, 8.0});
    CHECK(swap.mean_loads[9] == std::array<double, 2>{2.0, 8.0});

    const ScenarioSchedule eq = ScenarioSchedule::equal(4, 1);
    for (const auto& loads : eq.mean_loads) CHECK(loads == std::array<double, 2>{5.0, 5.0});

    CHECK_THROWS_AS(ScenarioSchedule::custom({{1.0, -2.0}}, 1), InvalidParameterError);
}

TEST_CASE("ask size is the largest whose gain clears its threshold") {
    ThresholdSet t{{1.5, 3.0}, {1.0, 2.0}};
    CHECK(choose_ask_size({2.0, 5.0}, t) == 2);
    CHECK(choose_ask_size({2.0, 2.5}, t) == 1);
    CHECK(choose_ask_size({1.0, 2.0}, t) == 0);
    CHECK(choose_ask_size({0.0, 0.0}, ThresholdSet{{0.0, 0.0}, {0.0, 0.0}}) == 0);
}

TEST_CASE("an operator without users stays idle") {
    GameParams params = small_params();
    const ScenarioSchedule schedule = ScenarioSchedule::custom({{0.0, 6.0}}, 21);
    const NetworkSnapshot snap = make_stage_snapshot(schedule, 0, params);
    REQUIRE(snap.user_count(Operator::A) == 0);
    StageContext ctx(snap, params);
    const StageAction action =
        decide_action(ctx, Operator::A, ThresholdSet::initial(params.radio.pool_size));
    CHECK_FALSE(action.asked());
}

TEST_CASE("stage resolution follows the ask/grant protocol") {
    GameParams params = small_params();
    const ScenarioSchedule schedule = ScenarioSchedule::custom({{5.0, 5.0}}, 33);
    const NetworkSnapshot snap = make_stage_snapshot(schedule, 0, params);
    REQUIRE(snap.user_count(Operator::A) > 0);
    REQUIRE(snap.user_count(Operator::B) > 0);
    StageContext ctx(snap, params);

    const ThresholdSet eager{{0.0, 0.0}, {1e9, 1e9}};     // asks whenever gain > 0
    const ThresholdSet passive{{kNeverAsk, kNeverAsk}, {1e9, 1e9}};  // grants anything
    const ThresholdSet stingy{{kNeverAsk, kNeverAsk}, {0.0, 0.0}};   // grants nothing

    const StageAction ask_a = decide_action(ctx, Operator::A, eager);
    REQUIRE(ask_a.asked());
    CHECK(ask_a.gains[ask_a.ask_size - 1] > 0.0);
    const StageAction ask_b = decide_action(ctx, Operator::B, eager);
    REQUIRE(ask_b.asked());
    StageAction idle;

    SUBCASE("both asking collapses to the default state") {
        const StageOutcome o = resolve_stage(ctx, ask_a, ask_b, {eager, eager});
        CHECK(o.kind == OutcomeKind::Default);
        CHECK(o.utilities[0] == doctest::Approx(ctx.utility(Operator::A, {}, 0).value));
    }

    SUBCASE("both idle is the default state") {
        const StageOutcome o = resolve_stage(ctx, idle, idle, {passive, passive});
        CHECK(o.kind == OutcomeKind::Default);
    }

    SUBCASE("a within-threshold loss is granted and vacates the carriers") {
        const int k = ask_a.ask_size;
        const StageOutcome o = resolve_stage(ctx, ask_a, idle, {eager, passive});
        CHECK(o.kind == OutcomeKind::Exchange);
        CHECK(o.asker == Operator::A);
        CHECK(o.grantor == Operator::B);
        CHECK(o.k == k);
        CHECK(o.utilities[0] ==
              doctest::Approx(ctx.utility(Operator::A, Operator::B, k).value));
        CHECK(o.utilities[1] ==
              doctest::Approx(ctx.utility(Operator::B, Operator::B, k).value));
        // Taking a favor helps the asker; granting costs the grantor.
        CHECK(o.utilities[0] >= ctx.utility(Operator::A, {}, 0).value);
        CHECK(o.utilities[1] <= ctx.utility(Operator::B, {}, 0).value + 1e-12);
        CHECK(static_cast<int>(o.user_rates[0].size()) == snap.user_count(Operator::A));
        CHECK(static_cast<int>(o.user_rates[1].size()) == snap.user_count(Operator::B));
    }

    SUBCASE("a loss beyond the threshold is refused") {
        REQUIRE(ctx.loss(Operator::B, ask_a.ask_size) > 0.0);
        const StageOutcome o = resolve_stage(ctx, ask_a, idle, {eager, stingy});
        CHECK(o.kind == OutcomeKind::Default);
    }
}

TEST_CASE("the ledger keeps both books balanced") {
    FavorLedger ledger(2);
    ledger.record(ask(2), StageAction{}, exchange(Operator::B, 2));
    ledger.record(StageAction{}, ask(1), exchange(Operator::A, 1));
    ledger.record(ask(1), StageAction{}, StageOutcome{});  // refused
    ledger.record(StageAction{}, StageAction{}, StageOutcome{});

    CHECK(ledger.stages() == 4);
    CHECK(ledger.taken(Operator::A) == 2);
    CHECK(ledger.given(Operator::B) == 2);
    CHECK(ledger.taken(Operator::B) == 1);
    CHECK(ledger.given(Operator::A) == 1);
    CHECK(ledger.asks(Operator::A, 1) == 1);
    CHECK(ledger.asks(Operator::A, 2) == 1);
    CHECK(ledger.asks(Operator::B, 1) == 1);
    CHECK(ledger.grants(Operator::B, 2) == 1);
    CHECK(ledger.grant_opportunities(Operator::B, 1) == 1);
    CHECK(ledger.grant_opportunities(Operator::B, 2) == 1);
}

TEST_CASE("opponent estimation counts the observable history") {
    FavorLedger cold(2);
    const OpponentStats prior = estimate_opponent(cold, Operator::B);
    CHECK(prior.p_ask == std::vector<double>{0.25, 0.25});
    CHECK(prior.p_grant == std::vector<double>{0.5, 0.5});

    FavorLedger ledger(2);
    for (int i = 0; i < 20; ++i)
        ledger.record(StageAction{}, ask(1), StageOutcome{});  // B asks, A refuses
    for (int i = 0; i < 10; ++i) ledger.record(ask(2), StageAction{}, exchange(Operator::B, 2));
    for (int i = 0; i < 30; ++i) ledger.record(ask(2), StageAction{}, StageOutcome{});
    for (int i = 0; i < 40; ++i) ledger.record(StageAction{}, StageAction{}, StageOutcome{});

    const OpponentStats stats = estimate_opponent(ledger, Operator::B);
    CHECK(stats.p_ask[0] == doctest::Approx(0.2));       // 20 of 100 stages
    CHECK(stats.p_ask[1] == 0.0);
    CHECK(stats.p_grant[1] == doctest::Approx(0.25));    // 10 of 40 opportunities
    CHECK(stats.p_grant[0] == doctest::Approx(0.5));     // unobserved: smoothed prior
    CHECK(stats.ask_observations[0] == 100);
    CHECK(stats.grant_observations[1] == 40);
}

TEST_CASE("initialization samples one value per store per snapshot") {
    GameParams params = small_params();
    const LoadDistribution loads;

    const auto empty = run_initialization(0, loads, params, 3);
    CHECK(empty[0].gain(1).empty());
    CHECK_THROWS_AS(empty[0].gain(1).mean(), EmptyStoreError);

    const auto stores = run_initialization(40, loads, params, 3);
    for (const StoreSet& set : stores)
        for (int k = 1; k <= 2; ++k) {
            CHECK(set.gain(k).size() == 40);
            CHECK(set.loss(k).size() == 40);
        }

    const auto again = run_initialization(40, loads, params, 3);
    CHECK(store_text(stores[0]) == store_text(again[0]));
    CHECK(store_text(stores[1]) == store_text(again[1]));

    GameParams two = params;
    two.threads = 2;
    const auto parallel = run_initialization(40, loads, two, 3);
    CHECK(store_text(stores[0]) == store_text(parallel[0]));
    CHECK(store_text(stores[1]) == store_text(parallel[1]));
}

TEST_CASE("light-load favor values are right-skewed with cheap losses") {
    GameParams params = small_params();
    LoadDistribution light;
    light.low = 2;
    light.high = 2;
    const auto stores = run_initialization(1200, light, params, 8);

    for (const StoreSet& set : stores) {
        for (int k = 1; k <= 2; ++k) {
            CHECK(set.gain(k).mean() > set.gain(k).percentile(50.0));  // right-skewed
            CHECK(set.loss(k).mean() > set.loss(k).percentile(50.0));
            CHECK(set.loss(k).mean() < set.gain(k).mean());
            CHECK(set.loss(k).percentile(50.0) < set.gain(k).percentile(50.0));
        }
        // Single-carrier losses are stochastically dominated by the gains.
        for (int q = 10; q <= 90; q += 5) {
            const double x = set.gain(1).percentile(q);
            CHECK(set.loss(1).cdf_at(x) >= set.gain(1).cdf_at(x));
        }
    }
}

TEST_CASE("thresholds persist when no update epoch is reached") {
    GameParams params = small_params();
    params.update_period = 100;
    const auto stores = run_initialization(30, LoadDistribution{}, params, 5);
    const ScenarioSchedule schedule = ScenarioSchedule::equal(12, 17);

    const GameResult result = run_game(schedule, stores, params);
    CHECK(result.epochs.empty());
    CHECK(result.final_thresholds[0] == ThresholdSet::initial(2));
    CHECK(result.final_thresholds[1] == ThresholdSet::initial(2));
}

TEST_CASE("game runs are deterministic and keep honest books") {
    GameParams params = small_params();
    params.update_period = 25;
    const auto stores = run_initialization(200, LoadDistribution{}, params, 6);
    const ScenarioSchedule schedule = ScenarioSchedule::equal(60, 19);

    const GameResult first = run_game(schedule, stores, params);
    const GameResult second = run_game(schedule, stores, params);
    CHECK(first.rates == second.rates);
    CHECK(first.ledger.taken(Operator::A) == second.ledger.taken(Operator::A));
    CHECK(first.ledger.given(Operator::B) == second.ledger.given(Operator::B));
    CHECK(first.final_thresholds[0] == second.final_thresholds[0]);
    CHECK(first.final_thresholds[1] == second.final_thresholds[1]);

    CHECK(first.epochs.size() == 2);  // stages 25 and 50
    CHECK(first.ledger.taken(Operator::A) == first.ledger.given(Operator::B));
    CHECK(first.ledger.taken(Operator::B) == first.ledger.given(Operator::A));
    CHECK(first.ledger.stages() == 60);

    for (const StageRecord& r : first.outcomes) {
        if (r.kind == OutcomeKind::Exchange) {
            const bool a_asked = r.ask_size[0] > 0;
            const bool b_asked = r.ask_size[1] > 0;
            CHECK(a_asked != b_asked);
            CHECK(r.grantor == (a_asked ? Operator::B : Operator::A));
            CHECK(r.k == (a_asked ? r.ask_size[0] : r.ask_size[1]));
        }
    }
}

TEST_CASE("the baseline replays the default state exactly") {
    GameParams params = small_params();
    const ScenarioSchedule schedule = ScenarioSchedule::equal(10, 23);
    const RateLog log = run_baseline(schedule, params);

    RateLog expected;
    const AllocationState def = AllocationState::all_active(params.radio.pool_size);
    for (int stage = 0; stage < schedule.stages(); ++stage) {
        const NetworkSnapshot snap = make_stage_snapshot(schedule, stage, params);
        for (Operator op : kOperators) {
            const UtilityValue u =
                evaluate_utility(snap, params.layout, op, def, params.radio, params.sched);
            for (std::size_t i = 0; i < u.per_user_rates.size(); ++i)
                expected.entries.push_back(
                    {stage, op, static_cast<int>(i), u.per_user_rates[i]});
        }
    }
    CHECK(log == expected);
}
