// Proportional-fair time-share optimization: maximize the sum of log user
// rates subject to per-group, per-carrier simplex constraints on the
// scheduling weights. Solved by conditional-gradient iteration whose linear
// subproblem is the classic PF pick (highest marginal rate / current rate).
#pragma once

#include <vector>

#include "lspsim/common.hpp"
#include "lspsim/deployment.hpp"
#include "lspsim/radio.hpp"

namespace lsp {

enum class GroupMode {
    PerBs,       // weights sum to 1 per carrier over each BS's attached users
    PerOperator  // literal formulation: one group of all the operator's users
};

struct SchedulerOptions {
    GroupMode group = GroupMode::PerBs;
    double tolerance = 1e-8; // relative utility change between iterates
    int max_iters = 2000;

    bool operator==(const SchedulerOptions&) const = default;
};

struct WeightMatrix {
    Matrix w; // users x carriers, entries in [0,1]
};

struct UtilityValue {
    double value = 0.0;                 // sum of ln(user sum-rate); 0 when no users
    std::vector<double> per_user_rates; // bits/s
};

struct ScheduleResult {
    WeightMatrix weights;
    UtilityValue utility;
    int iterations = 0;
    bool converged = true; // false: iteration cap hit, best iterate returned
};

// Partition of user indices into scheduling groups.
std::vector<std::vector<int>> make_groups(const NetworkSnapshot& snap, Operator op,
                                          GroupMode mode);

ScheduleResult optimize_weights(const LinkRates& rates,
                                const std::vector<std::vector<int>>& groups,
                                const SchedulerOptions& opts = {});

// Exact utility of a feasible weight matrix.
UtilityValue utility(const WeightMatrix& weights, const LinkRates& rates);

// Largest KKT defect of a candidate point, for verification: relative spread
// of the marginals c/R among carried users, and the worst relative margin by
// which an uncarried user beats the carried ones.
struct KktCheck {
    double active_spread = 0.0;
    double inactive_excess = 0.0;
};
KktCheck kkt_check(const WeightMatrix& weights, const LinkRates& rates,
                   const std::vector<std::vector<int>>& groups,
                   double active_weight_floor = 1e-6);

}  // namespace lsp
