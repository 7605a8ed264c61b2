#include "lspsim/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace lsp {

ThresholdSet ThresholdSet::no_trade(int pool_size) {
    if (pool_size < 1) throw InvalidParameterError("ThresholdSet: pool_size must be positive");
    ThresholdSet t;
    t.theta.assign(static_cast<std::size_t>(pool_size), kNeverAsk);
    t.lambda.assign(static_cast<std::size_t>(pool_size), 0.0);
    return t;
}

ThresholdSet ThresholdSet::initial(int pool_size) {
    if (pool_size < 1) throw InvalidParameterError("ThresholdSet: pool_size must be positive");
    ThresholdSet t;
    for (int k = 1; k <= pool_size; ++k) {
        t.theta.push_back(1.5 * k);
        t.lambda.push_back(1.0 * k);
    }
    return t;
}

void OpponentStats::validate() const {
    if (p_ask.empty() || p_ask.size() != p_grant.size())
        throw InvalidParameterError("OpponentStats: p_ask/p_grant size mismatch");
    double ask_sum = 0.0;
    for (double p : p_ask) {
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidParameterError("OpponentStats: ask probability outside [0,1]");
        ask_sum += p;
    }
    if (ask_sum > 1.0 + 1e-9)
        throw InvalidParameterError("OpponentStats: ask probabilities sum above 1");
    for (double p : p_grant)
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidParameterError("OpponentStats: grant probability outside [0,1]");
}

const char* to_string(CandidateKind kind) {
    switch (kind) {
        case CandidateKind::NoTrade: return "no-trade";
        case CandidateKind::BorderLow: return "border-low";
        case CandidateKind::BorderHigh: return "border-high";
        case CandidateKind::Interior: return "interior";
    }
    return "?";
}

namespace {

void require_matching(const ThresholdSet& t, const StoreSet& stores) {
    if (t.pool_size() != stores.pool_size() ||
        static_cast<int>(t.lambda.size()) != t.pool_size())
        throw InvalidParameterError("thresholds: pool size mismatch with stores");
}

std::vector<double> gain_cdfs(const ThresholdSet& t, const StoreSet& stores) {
    std::vector<double> cdf(static_cast<std::size_t>(t.pool_size()));
    for (int k = 1; k <= t.pool_size(); ++k)
        cdf[static_cast<std::size_t>(k) - 1] = stores.gain(k).cdf_at(t.ask(k));
    return cdf;
}

// suffix[i] = product of cdf[j] for j >= i; suffix[K] = 1.
std::vector<double> suffix_products(const std::vector<double>& cdf) {
    std::vector<double> suffix(cdf.size() + 1, 1.0);
    for (std::size_t i = cdf.size(); i-- > 0;) suffix[i] = cdf[i] * suffix[i + 1];
    return suffix;
}

}  // namespace

std::vector<double> p_ask(const ThresholdSet& thresholds, const StoreSet& stores) {
    require_matching(thresholds, stores);
    const auto cdf = gain_cdfs(thresholds, stores);
    const auto suffix = suffix_products(cdf);
    std::vector<double> p(cdf.size());
    for (std::size_t k = 0; k < cdf.size(); ++k) p[k] = suffix[k + 1] * (1.0 - cdf[k]);
    return p;
}

std::vector<double> p_grant(const ThresholdSet& thresholds, const StoreSet& stores) {
    require_matching(thresholds, stores);
    const auto cdf = gain_cdfs(thresholds, stores);
    const auto suffix = suffix_products(cdf);
    std::vector<double> p(cdf.size());
    for (int k = 1; k <= thresholds.pool_size(); ++k)
        p[static_cast<std::size_t>(k) - 1] =
            suffix[0] * stores.loss(k).cdf_at(thresholds.grant(k));
    return p;
}

double constraint_residual(const std::vector<double>& own_ask,
                           const std::vector<double>& own_grant, const OpponentStats& opp) {
    opp.validate();
    if (own_ask.size() != opp.p_ask.size() || own_grant.size() != opp.p_grant.size())
        throw InvalidParameterError("constraint_residual: size mismatch");
    double granted_to_us = 0.0;
    double granted_by_us = 0.0;
    for (std::size_t i = 0; i < own_ask.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        granted_to_us += k * own_ask[i] * opp.p_grant[i];
        granted_by_us += k * opp.p_ask[i] * own_grant[i];
    }
    return granted_to_us - granted_by_us;
}

double excess_utility(const ThresholdSet& thresholds, const StoreSet& stores,
                      const OpponentStats& opp) {
    require_matching(thresholds, stores);
    opp.validate();
    if (opp.pool_size() != thresholds.pool_size())
        throw InvalidParameterError("excess_utility: opponent stats pool size mismatch");
    const auto cdf = gain_cdfs(thresholds, stores);
    const auto suffix = suffix_products(cdf);
    double total = 0.0;
    for (int k = 1; k <= thresholds.pool_size(); ++k) {
        const std::size_t i = static_cast<std::size_t>(k) - 1;
        const double gained = opp.p_grant[i] * suffix[i + 1] *
                              stores.gain(k).partial_mean_above(thresholds.ask(k));
        const double ceded = opp.p_ask[i] * suffix[0] *
                             stores.loss(k).partial_mean_below(thresholds.grant(k));
        total += gained - ceded;
    }
    return total;
}

double excess_utility_factored(const ThresholdSet& thresholds, const StoreSet& stores,
                               const OpponentStats& opp) {
    require_matching(thresholds, stores);
    opp.validate();
    if (opp.pool_size() != thresholds.pool_size())
        throw InvalidParameterError("excess_utility_factored: opponent stats pool size mismatch");
    for (int k = 2; k <= thresholds.pool_size(); ++k) {
        const double scaled = static_cast<double>(k) * thresholds.grant(1);
        if (std::abs(thresholds.grant(k) - scaled) > 1e-9 * std::max(1.0, std::abs(scaled)))
            throw InvalidQueryError("excess_utility_factored: lambda[k] != k*lambda[1]");
    }
    const auto cdf = gain_cdfs(thresholds, stores);
    const auto suffix = suffix_products(cdf);
    double total = 0.0;
    for (int k = 1; k <= thresholds.pool_size(); ++k) {
        const std::size_t i = static_cast<std::size_t>(k) - 1;
        const double above = stores.gain(k).partial_mean_above(thresholds.ask(k));
        total += opp.p_grant[i] * suffix[i + 1] *
                 (above - thresholds.grant(k) * (1.0 - cdf[i]));
    }
    // Marginal-ask term; a never-ask policy has no ask margin, so it
    // contributes nothing there.
    if (std::isfinite(thresholds.ask(1)))
        total += opp.p_grant[0] * (thresholds.ask(1) - thresholds.grant(1)) * suffix[0];
    return total;
}

ThresholdSet derive_thresholds(double lambda1, const StoreSet& stores, const OpponentStats& opp,
                               int* degenerate_from) {
    if (!(lambda1 >= 0.0))
        throw InvalidParameterError("derive_thresholds: multiplier must be nonnegative");
    opp.validate();
    const int pool = stores.pool_size();
    if (opp.pool_size() != pool)
        throw InvalidParameterError("derive_thresholds: opponent stats pool size mismatch");

    ThresholdSet t;
    t.theta.assign(static_cast<std::size_t>(pool), kNeverAsk);
    t.lambda.resize(static_cast<std::size_t>(pool));
    for (int k = 1; k <= pool; ++k)
        t.lambda[static_cast<std::size_t>(k) - 1] = static_cast<double>(k) * lambda1;

    int degenerate = 0;
    if (opp.p_grant[0] <= 0.0) {
        degenerate = 1;
    } else {
        double correction = 0.0;
        for (int j = 1; j <= pool; ++j) {
            const double lam = t.grant(j);
            correction += opp.p_ask[static_cast<std::size_t>(j) - 1] *
                          (lam * stores.loss(j).cdf_at(lam) -
                           stores.loss(j).partial_mean_below(lam));
        }
        t.theta[0] = lambda1 + correction / opp.p_grant[0];
        for (int k = 2; k <= pool; ++k) {
            const std::size_t i = static_cast<std::size_t>(k) - 1;
            if (opp.p_grant[i] <= 0.0) {
                degenerate = k;
                break;
            }
            const double theta_prev = t.theta[i - 1];
            const double lam_prev = t.lambda[i - 1];
            const SampleStore& gain_prev = stores.gain(k - 1);
            const double cdf_prev = gain_prev.cdf_at(theta_prev);
            // partial_mean_above - lam*(1-F) + (theta-lam)*F == E[max(G, theta)] - lam
            const double bracket = gain_prev.partial_mean_above(theta_prev) -
                                   lam_prev * (1.0 - cdf_prev) +
                                   (theta_prev - lam_prev) * cdf_prev;
            t.theta[i] = t.lambda[i] + (opp.p_grant[i - 1] / opp.p_grant[i]) * bracket;
        }
    }
    if (degenerate_from) *degenerate_from = degenerate;
    return t;
}

namespace {

struct ScanPoint {
    double lambda1 = 0.0;
    double residual = 0.0;
};

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

SolverReport solve_thresholds(const StoreSet& stores, const OpponentStats& opp,
                              const SearchConfig& config) {
    opp.validate();
    const int pool = stores.pool_size();
    if (opp.pool_size() != pool)
        throw InvalidParameterError("solve_thresholds: opponent stats pool size mismatch");
    for (int k = 1; k <= pool; ++k)
        if (stores.gain(k).empty() || stores.loss(k).empty())
            throw EmptyStoreError("solve_thresholds: empty sample store");

    SolverReport report;
    report.lambda1_max = stores.loss(pool).percentile(config.lambda1_percentile);
    for (int k = 1; k <= pool; ++k)
        if (opp.p_grant[static_cast<std::size_t>(k) - 1] <= 0.0) {
            report.degenerate_from = k;
            break;
        }

    const auto residual_at = [&](double lambda1, ThresholdSet* out = nullptr) {
        ThresholdSet t = derive_thresholds(lambda1, stores, opp);
        const double r = constraint_residual(p_ask(t, stores), p_grant(t, stores), opp);
        if (out) *out = std::move(t);
        return r;
    };

    // Interior candidates: residual roots over the multiplier scan.
    std::vector<double> interior;
    const double l1max = report.lambda1_max;
    if (l1max > 0.0 && report.degenerate_from != 1) {
        const int n_steps = static_cast<int>(std::lround(1.0 / config.scan_step_fraction));
        std::vector<ScanPoint> scan(static_cast<std::size_t>(n_steps) + 1);
        for (int i = 0; i <= n_steps; ++i) {
            const double l1 = l1max * static_cast<double>(i) / static_cast<double>(n_steps);
            scan[static_cast<std::size_t>(i)] = {l1, residual_at(l1)};
        }
        for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
            const int s_lo = sign_of(scan[i].residual);
            const int s_hi = sign_of(scan[i + 1].residual);
            if (s_lo == 0) {
                interior.push_back(scan[i].lambda1);
                continue;
            }
            if (s_hi == 0 || s_lo == s_hi) continue;
            double lo = scan[i].lambda1;
            double hi = scan[i + 1].lambda1;
            int sign_lo = s_lo;
            while (hi - lo > config.bisect_width) {
                const double mid = 0.5 * (lo + hi);
                const int s_mid = sign_of(residual_at(mid));
                if (s_mid == 0) {
                    lo = hi = mid;
                    break;
                }
                if (s_mid == sign_lo)
                    lo = mid;
                else
                    hi = mid;
            }
            interior.push_back(0.5 * (lo + hi));
        }
        if (sign_of(scan.back().residual) == 0) interior.push_back(scan.back().lambda1);
        if (interior.empty()) {
            // No sign change anywhere: fall back to the scan's best point.
            const auto best = std::min_element(
                scan.begin(), scan.end(), [](const ScanPoint& a, const ScanPoint& b) {
                    return std::abs(a.residual) < std::abs(b.residual);
                });
            interior.push_back(best->lambda1);
        }
        interior.erase(std::unique(interior.begin(), interior.end(),
                                   [&](double a, double b) {
                                       return std::abs(a - b) <= config.bisect_width;
                                   }),
                       interior.end());
    }

    const auto add_candidate = [&](CandidateKind kind, double lambda1) {
        ThresholdCandidate c;
        c.kind = kind;
        c.lambda1 = lambda1;
        if (kind == CandidateKind::NoTrade) {
            // Never ask, never grant: both constraint sums vanish by policy.
            c.thresholds = ThresholdSet::no_trade(pool);
            c.residual = 0.0;
            c.excess = 0.0;
        } else {
            c.residual = residual_at(lambda1, &c.thresholds);
            c.excess = excess_utility(c.thresholds, stores, opp);
        }
        c.feasible = std::abs(c.residual) <= config.residual_tolerance;
        report.candidates.push_back(std::move(c));
    };

    add_candidate(CandidateKind::NoTrade, 0.0);
    if (report.degenerate_from != 1) {
        add_candidate(CandidateKind::BorderLow, 0.0);
        if (l1max > 0.0) add_candidate(CandidateKind::BorderHigh, l1max);
        for (double root : interior) add_candidate(CandidateKind::Interior, root);
    }

    std::size_t best = 0;  // no-trade: always feasible, excess 0
    for (std::size_t i = 1; i < report.candidates.size(); ++i) {
        const auto& c = report.candidates[i];
        if (c.feasible && c.excess > report.candidates[best].excess) best = i;
    }
    report.candidates[best].chosen = true;
    report.chosen = report.candidates[best].thresholds;
    report.multiplier = report.chosen.lambda.front();
    return report;
}

std::string SolverReport::to_text() const {
    std::ostringstream os;
    os.precision(9);
    os << "threshold solver report\n";
    os << "  multiplier mu = " << multiplier << "\n";
    os << "  lambda1 scan upper bound = " << lambda1_max << "\n";
    if (degenerate_from > 0)
        os << "  degenerate opponent: never grants sizes >= " << degenerate_from
           << "; those asks disabled\n";
    os << "  candidates:\n";
    for (const auto& c : candidates) {
        os << "    " << std::left << std::setw(12) << to_string(c.kind) << std::right
           << " lambda1=" << std::setw(14) << c.lambda1 << " residual=" << std::setw(14)
           << c.residual << " excess=" << std::setw(14) << c.excess
           << (c.feasible ? " feasible" : " infeasible") << (c.chosen ? " chosen" : "")
           << "\n";
    }
    os << "  chosen thresholds:\n";
    for (int k = 1; k <= chosen.pool_size(); ++k)
        os << "    k=" << k << " theta=" << chosen.ask(k) << " lambda=" << chosen.grant(k)
           << "\n";
    return os.str();
}

}  // namespace lsp
