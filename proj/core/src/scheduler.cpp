#include "lspsim/scheduler.hpp"

#include <algorithm>
#include <cmath>

namespace lsp {

namespace {

// Rate floor used only inside the iteration; keeps the objective finite if an
// iterate momentarily zeroes a user's rate. Final utilities are exact.
constexpr double kRateEpsilon = 1e-6; // bits/s

double padded_utility(const Matrix& w, const Matrix& c, std::vector<double>& rates) {
    const int n = c.rows(), m = c.cols();
    double total = 0.0;
    for (int u = 0; u < n; ++u) {
        double r = 0.0;
        for (int k = 0; k < m; ++k) r += w(u, k) * c(u, k);
        rates[u] = r;
        total += std::log(r + kRateEpsilon);
    }
    return total;
}

// Exact maximizer of sum_u ln(base_u + x_u * c_u) over the simplex sum x = 1:
// water-filling on the levels base_u / c_u. Users are carried in order of
// level until the common marginal no longer covers the next level.
void waterfill_slot(const std::vector<int>& users, int k, const Matrix& c, Matrix& w,
                    std::vector<double>& rates) {
    thread_local std::vector<std::pair<double, int>> levels;
    levels.clear();
    for (int u : users) {
        if (c(u, k) <= 0.0) continue;
        levels.emplace_back((rates[u] - w(u, k) * c(u, k)) / c(u, k), u);
    }
    if (levels.empty()) return;
    std::sort(levels.begin(), levels.end());
    double prefix = 0.0, nu = 0.0;
    std::size_t carried = 0;
    for (std::size_t m = 1; m <= levels.size(); ++m) {
        prefix += levels[m - 1].first;
        const double candidate = (1.0 + prefix) / static_cast<double>(m);
        if (m < levels.size() && candidate > levels[m].first) continue;
        nu = candidate;
        carried = m;
        break;
    }
    for (int u : users) {
        rates[u] -= w(u, k) * c(u, k);
        w(u, k) = 0.0;
    }
    double assigned = 0.0;
    for (std::size_t i = 0; i + 1 < carried; ++i) {
        const auto [level, u] = levels[i];
        w(u, k) = nu - level;
        assigned += w(u, k);
        rates[u] += w(u, k) * c(u, k);
    }
    // Last carried user absorbs the rounding remainder so the slot sums to 1.
    const auto [level, u] = levels[carried - 1];
    w(u, k) = std::max(0.0, 1.0 - assigned);
    rates[u] += w(u, k) * c(u, k);
}

// Cyclic exact coordinate ascent over the (group, carrier) slots. Identifies
// the active support exactly, which the conditional-gradient phase cannot do
// in finitely many diminishing steps, and equalizes the carried marginals.
void polish_weights(const Matrix& c, const std::vector<std::vector<int>>& groups, Matrix& w,
                    std::vector<double>& rates) {
    const int m = c.cols();
    const int n = c.rows();
    double value = 0.0;
    for (int u = 0; u < n; ++u) value += std::log(rates[u] + kRateEpsilon);
    constexpr int kMaxSweeps = 400;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (const auto& g : groups)
            for (int k = 0; k < m; ++k) waterfill_slot(g, k, c, w, rates);
        double next = 0.0;
        for (int u = 0; u < n; ++u) next += std::log(rates[u] + kRateEpsilon);
        if (next - value <= 1e-13 * std::max(1.0, std::abs(next))) break;
        value = next;
    }
}

}  // namespace

std::vector<std::vector<int>> make_groups(const NetworkSnapshot& snap, Operator op,
                                          GroupMode mode) {
    const int n = snap.user_count(op);
    std::vector<std::vector<int>> groups;
    if (n == 0) return groups;
    if (mode == GroupMode::PerOperator) {
        groups.emplace_back();
        groups.front().resize(n);
        for (int u = 0; u < n; ++u) groups.front()[u] = u;
        return groups;
    }
    const auto& assoc = snap.association[index_of(op)];
    const int n_bs = 1 + *std::max_element(assoc.begin(), assoc.end());
    std::vector<std::vector<int>> by_bs(n_bs);
    for (int u = 0; u < n; ++u) by_bs[assoc[u]].push_back(u);
    for (auto& g : by_bs)
        if (!g.empty()) groups.push_back(std::move(g));
    return groups;
}

ScheduleResult optimize_weights(const LinkRates& rates,
                                const std::vector<std::vector<int>>& groups,
                                const SchedulerOptions& opts) {
    const Matrix& c = rates.c;
    const int n = c.rows(), m = c.cols();

    ScheduleResult result;
    if (n == 0) {
        result.weights.w = Matrix(0, m);
        return result;
    }

    for (int u = 0; u < n; ++u) {
        bool any = false;
        for (int k = 0; k < m; ++k) any = any || c(u, k) > 0.0;
        if (!any) throw InfeasibleUtilityError("optimize_weights: user with all-zero rates");
    }

    // Equal split within each group.
    Matrix w(n, m, 0.0);
    for (const auto& g : groups) {
        const double share = 1.0 / static_cast<double>(g.size());
        for (int u : g)
            for (int k = 0; k < m; ++k) w(u, k) = share;
    }

    std::vector<double> user_rates(n);
    double value = padded_utility(w, c, user_rates);
    Matrix best_w = w;
    double best_value = value;

    int t = 0;
    for (; t < opts.max_iters; ++t) {
        const double step = 2.0 / static_cast<double>(t + 2);
        const double keep = 1.0 - step;
        // Move toward the vertex that puts each (group, carrier) slot on the
        // user with the highest marginal utility c/R; ties break low.
        for (const auto& g : groups) {
            for (int k = 0; k < m; ++k) {
                int sel = g.front();
                double sel_marginal = c(sel, k) / (user_rates[sel] + kRateEpsilon);
                for (std::size_t i = 1; i < g.size(); ++i) {
                    const int u = g[i];
                    const double marginal = c(u, k) / (user_rates[u] + kRateEpsilon);
                    if (marginal > sel_marginal) {
                        sel_marginal = marginal;
                        sel = u;
                    }
                }
                for (int u : g) w(u, k) *= keep;
                w(sel, k) += step;
            }
        }

        const double next = padded_utility(w, c, user_rates);
        if (next > best_value) {
            best_value = next;
            best_w = w;
        }
        if (std::abs(next - value) <= opts.tolerance * std::max(1.0, std::abs(next))) {
            result.converged = true;
            ++t;
            break;
        }
        value = next;
        result.converged = false;
    }

    result.iterations = t;
    padded_utility(best_w, c, user_rates);
    polish_weights(c, groups, best_w, user_rates);
    result.weights.w = std::move(best_w);
    result.utility = utility(result.weights, rates);
    return result;
}

UtilityValue utility(const WeightMatrix& weights, const LinkRates& rates) {
    const Matrix& c = rates.c;
    const Matrix& w = weights.w;
    const int n = c.rows(), m = c.cols();
    UtilityValue out;
    out.per_user_rates.resize(n);
    for (int u = 0; u < n; ++u) {
        double r = 0.0;
        for (int k = 0; k < m; ++k) r += w(u, k) * c(u, k);
        if (r <= 0.0) throw InfeasibleUtilityError("utility: user with zero sum-rate");
        out.per_user_rates[u] = r;
        out.value += std::log(r);
    }
    return out;
}

KktCheck kkt_check(const WeightMatrix& weights, const LinkRates& rates,
                   const std::vector<std::vector<int>>& groups,
                   double active_weight_floor) {
    const Matrix& c = rates.c;
    const Matrix& w = weights.w;
    const int m = c.cols();

    std::vector<double> R(c.rows(), 0.0);
    for (int u = 0; u < c.rows(); ++u)
        for (int k = 0; k < m; ++k) R[u] += w(u, k) * c(u, k);

    KktCheck check;
    for (const auto& g : groups) {
        for (int k = 0; k < m; ++k) {
            double active_min = 0.0, active_max = 0.0, inactive_max = 0.0;
            bool has_active = false;
            for (int u : g) {
                if (c(u, k) <= 0.0) continue;
                const double marginal = c(u, k) / R[u];
                if (w(u, k) > active_weight_floor) {
                    active_min = has_active ? std::min(active_min, marginal) : marginal;
                    active_max = has_active ? std::max(active_max, marginal) : marginal;
                    has_active = true;
                } else {
                    inactive_max = std::max(inactive_max, marginal);
                }
            }
            if (!has_active) continue;
            check.active_spread =
                std::max(check.active_spread, (active_max - active_min) / active_max);
            if (inactive_max > active_max)
                check.inactive_excess =
                    std::max(check.inactive_excess, (inactive_max - active_max) / active_max);
        }
    }
    return check;
}

}  // namespace lsp
