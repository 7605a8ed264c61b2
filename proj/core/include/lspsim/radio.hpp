// Per-user, per-carrier SINR and full-occupancy Shannon rates under a given
// carrier allocation. Carriers of an operator are indexed 0..K-1 for the
// shared pool and K for the dedicated carrier. All arithmetic is linear;
// decibels appear only at I/O boundaries.
#pragma once

#include <array>
#include <vector>

#include "lspsim/common.hpp"
#include "lspsim/deployment.hpp"

namespace lsp {

struct RadioParams {
    double tx_power_w = 0.1;             // per CC; 20 dBm
    double noise_density_dbm_hz = -174.0;
    double noise_figure_db = 10.0;
    double cc_bandwidth_hz = 20e6;
    double sinr_efficiency = 2.0;        // gamma_eff
    int pool_size = 2;                   // K

    int carriers() const { return pool_size + 1; }
    int dedicated_carrier() const { return pool_size; }
    void validate() const;

    bool operator==(const RadioParams&) const = default;
};

// Which pool carriers each operator transmits on this stage. The dedicated
// carrier is always active for its owner and is not part of this state.
class AllocationState {
public:
    AllocationState() = default;
    static AllocationState all_active(int pool_size);

    bool pool_active(Operator op, int carrier) const {
        return active_[index_of(op)][carrier];
    }
    // Vacate the lowest-indexed k pool carriers (favors always cover these;
    // pool carriers are statistically exchangeable).
    void vacate_lowest(Operator op, int k);
    void set_pool_active(Operator op, int carrier, bool on) {
        active_[index_of(op)][carrier] = on;
    }
    int pool_size() const { return static_cast<int>(active_[0].size()); }
    int active_count(Operator op) const;
    bool is_default() const;

    bool operator==(const AllocationState&) const = default;

private:
    std::array<std::vector<char>, 2> active_;
};

// Rates at full time share (w = 1) for every carrier of one operator.
// Column layout matches the carrier indexing above; inactive carriers hold 0.
struct LinkRates {
    Matrix c; // users x (K+1), bits/s
};

double noise_power_per_cc(const RadioParams& params);

// SINR of `user` of `op` on `carrier`. Every base station of an operator
// transmits at full power on each carrier in that operator's active set,
// whether or not it currently serves users on it.
double sinr(const NetworkSnapshot& snap, const Layout& layout, Operator op, int user,
            int carrier, const AllocationState& alloc, const RadioParams& params);

double full_rate(double gamma, const RadioParams& params);

LinkRates compute_link_rates(const NetworkSnapshot& snap, const Layout& layout, Operator op,
                             const AllocationState& alloc, const RadioParams& params);

}  // namespace lsp
