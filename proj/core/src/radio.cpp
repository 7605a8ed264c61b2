#include "lspsim/radio.hpp"

#include <cmath>

namespace lsp {

void RadioParams::validate() const {
    if (tx_power_w <= 0.0) throw InvalidParameterError("radio: tx_power_w must be > 0");
    if (cc_bandwidth_hz <= 0.0) throw InvalidParameterError("radio: cc_bandwidth_hz must be > 0");
    if (sinr_efficiency <= 0.0) throw InvalidParameterError("radio: sinr_efficiency must be > 0");
    if (pool_size < 1) throw InvalidParameterError("radio: pool_size must be >= 1");
}

AllocationState AllocationState::all_active(int pool_size) {
    AllocationState s;
    s.active_[0].assign(pool_size, 1);
    s.active_[1].assign(pool_size, 1);
    return s;
}

void AllocationState::vacate_lowest(Operator op, int k) {
    if (k < 0 || k > pool_size())
        throw InvalidParameterError("vacate_lowest: k out of range");
    for (int c = 0; c < k; ++c) active_[index_of(op)][c] = 0;
}

int AllocationState::active_count(Operator op) const {
    int n = 0;
    for (char a : active_[index_of(op)]) n += a != 0;
    return n;
}

bool AllocationState::is_default() const {
    return active_count(Operator::A) == pool_size() && active_count(Operator::B) == pool_size();
}

double noise_power_per_cc(const RadioParams& params) {
    const double dbm = params.noise_density_dbm_hz + 10.0 * std::log10(params.cc_bandwidth_hz) +
                       params.noise_figure_db;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double sinr(const NetworkSnapshot& snap, const Layout& layout, Operator op, int user,
            int carrier, const AllocationState& alloc, const RadioParams& params) {
    const int oi = index_of(op);
    const bool dedicated = carrier == params.dedicated_carrier();
    if (!dedicated && !alloc.pool_active(op, carrier))
        throw InvalidQueryError("sinr: operator not active on carrier");

    const Matrix& g = snap.gains[oi];
    const int serving = snap.association[oi][user];
    const int serving_col = layout.global_bs_index(op, serving);
    const double signal = params.tx_power_w * g(user, serving_col);

    double interference = 0.0;
    // Own network: all BSs transmit on every carrier the operator is active on,
    // dedicated included.
    for (int b = 0; b < layout.bs_count(op); ++b) {
        if (b == serving) continue;
        interference += params.tx_power_w * g(user, layout.global_bs_index(op, b));
    }
    // Opponent network: pool carriers only, and only if active there.
    if (!dedicated && alloc.pool_active(other(op), carrier)) {
        const Operator opp = other(op);
        for (int b = 0; b < layout.bs_count(opp); ++b) {
            interference += params.tx_power_w * g(user, layout.global_bs_index(opp, b));
        }
    }
    return signal / (noise_power_per_cc(params) + interference);
}

double full_rate(double gamma, const RadioParams& params) {
    if (gamma < 0.0) throw InvalidParameterError("full_rate: negative SINR");
    return params.cc_bandwidth_hz * std::log2(1.0 + gamma / params.sinr_efficiency);
}

LinkRates compute_link_rates(const NetworkSnapshot& snap, const Layout& layout, Operator op,
                             const AllocationState& alloc, const RadioParams& params) {
    const int n = snap.user_count(op);
    LinkRates rates;
    rates.c = Matrix(n, params.carriers(), 0.0);
    if (n == 0) return rates;

    const double noise = noise_power_per_cc(params);
    const int oi = index_of(op);
    const Matrix& g = snap.gains[oi];

    // Hoist the per-user own/opponent aggregate powers; they are carrier
    // independent under full-power transmission.
    for (int u = 0; u < n; ++u) {
        const int serving = snap.association[oi][u];
        const double signal = params.tx_power_w * g(u, layout.global_bs_index(op, serving));
        double own_interf = 0.0;
        for (int b = 0; b < layout.bs_count(op); ++b) {
            if (b == serving) continue;
            own_interf += params.tx_power_w * g(u, layout.global_bs_index(op, b));
        }
        double opp_power = 0.0;
        const Operator opp = other(op);
        for (int b = 0; b < layout.bs_count(opp); ++b) {
            opp_power += params.tx_power_w * g(u, layout.global_bs_index(opp, b));
        }

        for (int k = 0; k < params.pool_size; ++k) {
            if (!alloc.pool_active(op, k)) continue;
            const double interf =
                own_interf + (alloc.pool_active(opp, k) ? opp_power : 0.0);
            rates.c(u, k) = full_rate(signal / (noise + interf), params);
        }
        rates.c(u, params.dedicated_carrier()) =
            full_rate(signal / (noise + own_interf), params);
    }
    return rates;
}

}  // namespace lsp
