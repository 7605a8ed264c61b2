#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "lspsim/rng.hpp"
#include "lspsim/scheduler.hpp"
#include "oracles.hpp"

using namespace lsp;

namespace {

LinkRates rates_from(std::vector<std::vector<double>> rows) {
    LinkRates rates;
    rates.c = Matrix(static_cast<int>(rows.size()),
                     rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (std::size_t u = 0; u < rows.size(); ++u)
        for (std::size_t k = 0; k < rows[u].size(); ++k)
            rates.c(static_cast<int>(u), static_cast<int>(k)) = rows[u][k];
    return rates;
}

WeightMatrix equal_split(const std::vector<std::vector<int>>& groups, int users, int carriers) {
    WeightMatrix w;
    w.w = Matrix(users, carriers);
    for (const auto& g : groups)
        for (int u : g)
            for (int k = 0; k < carriers; ++k)
                w.w(u, k) = 1.0 / static_cast<double>(g.size());
    return w;
}

void check_feasible(const WeightMatrix& w, const std::vector<std::vector<int>>& groups) {
    for (int u = 0; u < w.w.rows(); ++u)
        for (int k = 0; k < w.w.cols(); ++k) REQUIRE(w.w(u, k) >= 0.0);
    for (const auto& g : groups)
        for (int k = 0; k < w.w.cols(); ++k) {
            double sum = 0.0;
            for (int u : g) sum += w.w(u, k);
            REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
}

}  // namespace

TEST_CASE("a lone user takes every carrier in full") {
    const LinkRates rates = rates_from({{1.5e6, 0.5e6, 2e6}});
    const auto result = optimize_weights(rates, {{0}});
    for (int k = 0; k < 3; ++k) CHECK(result.weights.w(0, k) == doctest::Approx(1.0));
    CHECK(result.utility.value == doctest::Approx(std::log(4e6)).epsilon(1e-12));
}

TEST_CASE("identical users split a single carrier evenly") {
    const LinkRates rates = rates_from({{1e6}, {1e6}});
    const auto result = optimize_weights(rates, {{0, 1}});
    CHECK(result.weights.w(0, 0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(result.weights.w(1, 0) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("opposed preferences resolve to the assignment optimum") {
    const LinkRates rates = rates_from({{2e6, 1e6}, {1e6, 2e6}});
    const std::vector<std::vector<int>> groups{{0, 1}};
    const auto result = optimize_weights(rates, groups);
    CHECK(result.weights.w(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(result.weights.w(1, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(result.utility.value == doctest::Approx(2.0 * std::log(2e6)).epsilon(1e-9));
    CHECK(result.utility.value ==
          doctest::Approx(lsp::test::grid_pf_utility(rates.c, groups, 1e-3)).epsilon(1e-3));
}

TEST_CASE("utility handles edge cases") {
    CHECK(utility(WeightMatrix{Matrix(0, 2)}, rates_from({})).value == 0.0);

    WeightMatrix one{Matrix(1, 1, 1.0)};
    CHECK(utility(one, rates_from({{1e6}})).value ==
          doctest::Approx(13.8155).epsilon(1e-4));

    const LinkRates base = rates_from({{1e6, 3e5}, {4e5, 2e6}});
    LinkRates scaled = base;
    const double alpha = 3.25;
    for (int u = 0; u < 2; ++u)
        for (int k = 0; k < 2; ++k) scaled.c(u, k) *= alpha;
    WeightMatrix w{Matrix(2, 2, 0.5)};
    CHECK(utility(w, scaled).value ==
          doctest::Approx(utility(w, base).value + 2.0 * std::log(alpha)).epsilon(1e-9));

    WeightMatrix starved{Matrix(2, 1)};
    starved.w(0, 0) = 1.0;  // the second user gets nothing
    CHECK_THROWS_AS(utility(starved, rates_from({{1e6}, {1e6}})), InfeasibleUtilityError);
}

TEST_CASE("a user with no usable carrier is infeasible") {
    const LinkRates rates = rates_from({{1e6, 1e6}, {0.0, 0.0}});
    CHECK_THROWS_AS(optimize_weights(rates, {{0, 1}}), InfeasibleUtilityError);
}

TEST_CASE("iteration cap returns the best iterate unconverged") {
    const LinkRates rates = rates_from({{2.3e6, 0.4e6}, {1.1e6, 1.9e6}, {0.7e6, 0.9e6}});
    SchedulerOptions opts;
    opts.max_iters = 1;
    const auto result = optimize_weights(rates, {{0, 1, 2}}, opts);
    CHECK_FALSE(result.converged);
    CHECK(std::isfinite(result.utility.value));
    check_feasible(result.weights, {{0, 1, 2}});
}

TEST_CASE("group construction follows the association or the operator") {
    const Layout layout = Layout::default_layout();
    const PathlossModel model;
    // Two users near A's first station, one near its second.
    const NetworkSnapshot snap = lsp::test::place_users(
        layout, model, {{12.0, 12.0}, {13.5, 13.0}, {37.0, 38.0}}, {{25.0, 25.0}});

    auto groups = make_groups(snap, Operator::A, GroupMode::PerBs);
    std::vector<std::vector<int>> sorted = groups;
    for (auto& g : sorted) std::sort(g.begin(), g.end());
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::vector<int>>{{0, 1}, {2}});

    auto single = make_groups(snap, Operator::A, GroupMode::PerOperator);
    REQUIRE(single.size() == 1);
    std::sort(single[0].begin(), single[0].end());
    CHECK(single[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("random instances are feasible, stationary and beat equal split") {
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const int users = rng.uniform_int(1, 4);
        const int carriers = rng.uniform_int(1, 3);
        LinkRates rates;
        rates.c = Matrix(users, carriers);
        for (int u = 0; u < users; ++u) {
            for (int k = 0; k < carriers; ++k)
                rates.c(u, k) = rng.uniform() < 0.15 ? 0.0 : rng.uniform(2e5, 5e6);
            bool any = false;
            for (int k = 0; k < carriers; ++k) any = any || rates.c(u, k) > 0.0;
            if (!any) rates.c(u, rng.uniform_int(0, carriers - 1)) = rng.uniform(2e5, 5e6);
        }
        std::vector<std::vector<int>> groups;
        if (users > 2 && rng.uniform() < 0.5) {
            groups = {{0, 1}, {}};
            for (int u = 2; u < users; ++u) groups[1].push_back(u);
        } else {
            groups = {{}};
            for (int u = 0; u < users; ++u) groups[0].push_back(u);
        }

        const auto result = optimize_weights(rates, groups);
        check_feasible(result.weights, groups);

        const auto kkt = kkt_check(result.weights, rates, groups);
        CHECK(kkt.active_spread <= 1e-3);
        CHECK(kkt.inactive_excess <= 1e-3);

        const auto equal = equal_split(groups, users, carriers);
        CHECK(result.utility.value >= utility(equal, rates).value - 1e-9);
    }
}

TEST_CASE("optimized utility matches the exhaustive grid") {
    Rng rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const int users = rng.uniform_int(1, 3);
        const int carriers = rng.uniform_int(1, 2);
        LinkRates rates;
        rates.c = Matrix(users, carriers);
        for (int u = 0; u < users; ++u)
            for (int k = 0; k < carriers; ++k) rates.c(u, k) = rng.uniform(2e5, 5e6);
        std::vector<std::vector<int>> groups{{}};
        for (int u = 0; u < users; ++u) groups[0].push_back(u);

        const auto result = optimize_weights(rates, groups);
        const double grid = lsp::test::grid_pf_utility(rates.c, groups, 1e-3);
        CHECK(std::abs(result.utility.value - grid) <= 1e-3);
        CHECK(result.utility.value >= grid - 1e-9);
    }
}
