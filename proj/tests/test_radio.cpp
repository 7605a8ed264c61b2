#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "lspsim/radio.hpp"

using namespace lsp;
using lsp::test::place_users;
using lsp::test::two_station_layout;

namespace {

// One user of A with a hand-set gain row; single BS per operator.
NetworkSnapshot single_user_snapshot(double gain_own, double gain_cross) {
    NetworkSnapshot snap;
    snap.drops[0].op = Operator::A;
    snap.drops[0].positions = {{15.0, 25.0}};
    snap.drops[0].realized_count = 1;
    snap.association[0] = {0};
    snap.gains[0] = Matrix(1, 2);
    snap.gains[0](0, 0) = gain_own;
    snap.gains[0](0, 1) = gain_cross;
    snap.drops[1].op = Operator::B;
    snap.gains[1] = Matrix(0, 2);
    return snap;
}

}  // namespace

TEST_CASE("noise_power_per_cc matches the dB arithmetic") {
    RadioParams params;
    CHECK(noise_power_per_cc(params) == doctest::Approx(7.96e-13).epsilon(1e-3));
    const double dbm = 10.0 * std::log10(noise_power_per_cc(params) * 1000.0);
    CHECK(dbm == doctest::Approx(-174.0 + 10.0 * std::log10(2e7) + 10.0).epsilon(1e-9));

    RadioParams narrow;
    narrow.noise_figure_db = 0.0;
    narrow.cc_bandwidth_hz = 1.0;
    CHECK(noise_power_per_cc(narrow) == doctest::Approx(std::pow(10.0, -20.4)).epsilon(1e-9));

    RadioParams wide = params;
    wide.cc_bandwidth_hz = 2.0 * params.cc_bandwidth_hz;
    CHECK(noise_power_per_cc(wide) / noise_power_per_cc(params) == doctest::Approx(2.0));
}

TEST_CASE("sinr of a lone user") {
    RadioParams params;
    params.pool_size = 1;
    const Layout layout = two_station_layout();
    const double noise = noise_power_per_cc(params);
    const AllocationState all = AllocationState::all_active(1);

    SUBCASE("dedicated carrier sees no interference") {
        const NetworkSnapshot snap = single_user_snapshot(2e-9, 5e-10);
        const double expected = params.tx_power_w * 2e-9 / noise;
        CHECK(sinr(snap, layout, Operator::A, 0, params.dedicated_carrier(), all, params) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("signal equal to noise gives unit SINR") {
        const NetworkSnapshot snap = single_user_snapshot(noise / params.tx_power_w, 1e-12);
        CHECK(sinr(snap, layout, Operator::A, 0, params.dedicated_carrier(), all, params) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("pool carrier with the opponent vacated equals the dedicated carrier") {
        const NetworkSnapshot snap = single_user_snapshot(3e-9, 8e-10);
        AllocationState vacated = all;
        vacated.vacate_lowest(Operator::B, 1);
        CHECK(sinr(snap, layout, Operator::A, 0, 0, vacated, params) ==
              doctest::Approx(sinr(snap, layout, Operator::A, 0,
                                   params.dedicated_carrier(), vacated, params))
                  .epsilon(1e-12));
    }

    SUBCASE("querying a vacated carrier is an error") {
        const NetworkSnapshot snap = single_user_snapshot(3e-9, 8e-10);
        AllocationState vacated = all;
        vacated.vacate_lowest(Operator::A, 1);
        CHECK_THROWS_AS(sinr(snap, layout, Operator::A, 0, 0, vacated, params),
                        InvalidQueryError);
    }
}

TEST_CASE("own-network interference counts every other active own station") {
    RadioParams params;
    params.pool_size = 1;
    Layout layout;
    layout.bs_positions[0] = {{10.0, 25.0}, {40.0, 25.0}};
    layout.bs_positions[1] = {{25.0, 10.0}};

    NetworkSnapshot snap;
    snap.drops[0].op = Operator::A;
    snap.drops[0].positions = {{12.0, 25.0}};
    snap.drops[0].realized_count = 1;
    snap.association[0] = {0};
    snap.gains[0] = Matrix(1, 3);
    snap.gains[0](0, 0) = 4e-9;   // serving
    snap.gains[0](0, 1) = 1e-9;   // own interferer
    snap.gains[0](0, 2) = 2e-10;  // opponent
    snap.gains[1] = Matrix(0, 3);

    const double p = params.tx_power_w;
    const double noise = noise_power_per_cc(params);
    const AllocationState all = AllocationState::all_active(1);

    const double pool = sinr(snap, layout, Operator::A, 0, 0, all, params);
    CHECK(pool == doctest::Approx(p * 4e-9 / (noise + p * 1e-9 + p * 2e-10)).epsilon(1e-12));

    const double dedicated = sinr(snap, layout, Operator::A, 0, 1, all, params);
    CHECK(dedicated == doctest::Approx(p * 4e-9 / (noise + p * 1e-9)).epsilon(1e-12));

    AllocationState vacated = all;
    vacated.vacate_lowest(Operator::B, 1);
    CHECK(sinr(snap, layout, Operator::A, 0, 0, vacated, params) ==
          doctest::Approx(dedicated).epsilon(1e-12));
}

TEST_CASE("full_rate evaluates the scaled Shannon formula") {
    RadioParams params;
    CHECK(full_rate(2.0, params) == doctest::Approx(20e6).epsilon(1e-12));
    CHECK(full_rate(0.0, params) == 0.0);
    CHECK(full_rate(6.0, params) == doctest::Approx(40e6).epsilon(1e-12));
}

TEST_CASE("sinr is invariant under a common power scaling") {
    const Layout layout = Layout::default_layout();
    const PathlossModel model;
    Rng rng(23);
    const NetworkSnapshot snap = make_snapshot(layout, model, 5.0, 5.0, rng);

    RadioParams params;
    const double alpha = 7.5;
    NetworkSnapshot scaled = snap;
    for (int i = 0; i < 2; ++i)
        for (int u = 0; u < scaled.gains[i].rows(); ++u)
            for (int b = 0; b < scaled.gains[i].cols(); ++b) scaled.gains[i](u, b) *= alpha;
    RadioParams noisier = params;
    noisier.noise_figure_db += 10.0 * std::log10(alpha);

    const AllocationState all = AllocationState::all_active(params.pool_size);
    for (Operator op : kOperators)
        for (int u = 0; u < snap.user_count(op); ++u)
            for (int k = 0; k <= params.pool_size; ++k)
                CHECK(sinr(snap, layout, op, u, k, all, params) ==
                      doctest::Approx(sinr(scaled, layout, op, u, k, all, noisier))
                          .epsilon(1e-9));
}

TEST_CASE("vacating the opponent never lowers link rates") {
    const Layout layout = Layout::default_layout();
    const PathlossModel model;
    RadioParams params;  // pool_size 2
    Rng rng(29);

    for (int trial = 0; trial < 10; ++trial) {
        const NetworkSnapshot snap = make_snapshot(layout, model, 6.0, 4.0, rng);
        const AllocationState all = AllocationState::all_active(params.pool_size);
        AllocationState vac1 = all;
        vac1.vacate_lowest(Operator::B, 1);
        AllocationState vac2 = all;
        vac2.vacate_lowest(Operator::B, 2);

        const Matrix base = compute_link_rates(snap, layout, Operator::A, all, params).c;
        const Matrix one = compute_link_rates(snap, layout, Operator::A, vac1, params).c;
        const Matrix two = compute_link_rates(snap, layout, Operator::A, vac2, params).c;
        for (int u = 0; u < base.rows(); ++u) {
            for (int k = 0; k < params.pool_size; ++k) {
                CHECK(one(u, k) >= base(u, k));
                CHECK(two(u, k) >= one(u, k));
            }
            // The dedicated carrier is untouched by the opponent's allocation.
            const int d = params.dedicated_carrier();
            CHECK(one(u, d) == base(u, d));
            CHECK(two(u, d) == base(u, d));
        }
    }
}
