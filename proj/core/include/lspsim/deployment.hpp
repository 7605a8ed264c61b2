// Indoor two-operator geometry: Poisson user drops over a square hall,
// power-law pathloss gains and strongest-signal association.
#pragma once

#include <array>
#include <vector>

#include "lspsim/common.hpp"
#include "lspsim/rng.hpp"

namespace lsp {

struct Layout {
    double hall_side = 50.0;   // meters
    double min_distance = 1.0; // pathloss clamp, meters
    std::array<std::vector<Point>, 2> bs_positions;

    // Two base stations per operator on interleaved diagonals, so the two
    // service areas fully overlap.
    static Layout default_layout();

    int bs_count(Operator op) const { return static_cast<int>(bs_positions[index_of(op)].size()); }
    int total_bs() const { return bs_count(Operator::A) + bs_count(Operator::B); }
    // Base stations are indexed globally, operator A's first.
    int global_bs_index(Operator op, int local) const {
        return op == Operator::A ? local : bs_count(Operator::A) + local;
    }
    void validate() const;

    bool operator==(const Layout&) const = default;
};

struct PathlossModel {
    double attenuation_constant = 1e-4;
    double exponent = 3.7;

    bool operator==(const PathlossModel&) const = default;
};

struct UserDrop {
    Operator op = Operator::A;
    std::vector<Point> positions;
    int realized_count = 0;
};

// One stage's user drop, channel gains and association for both operators.
// gains[op] has one row per user of `op` and one column per base station of
// either operator (global index); entries are linear power gains.
struct NetworkSnapshot {
    std::array<UserDrop, 2> drops;
    std::array<std::vector<int>, 2> association; // user -> own-operator BS index
    std::array<Matrix, 2> gains;

    int user_count(Operator op) const { return drops[index_of(op)].realized_count; }
};

// Poisson(mean) users placed i.i.d. uniformly over the hall.
UserDrop generate_users(Operator op, double mean, const Layout& layout, Rng& rng);

// attenuation * max(distance, min_distance)^-exponent
double pathloss_gain(double dist, const PathlossModel& model, double min_distance = 1.0);

// Index of the own-operator BS with the highest received power; ties break
// to the lowest index.
int associate(const Point& user, const std::vector<Point>& own_bs,
              const PathlossModel& model, double min_distance = 1.0);

NetworkSnapshot make_snapshot(const Layout& layout, const PathlossModel& model,
                              double mean_a, double mean_b, Rng& rng);

}  // namespace lsp
