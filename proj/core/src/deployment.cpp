#include "lspsim/deployment.hpp"

#include <algorithm>
#include <cmath>

namespace lsp {

Layout Layout::default_layout() {
    Layout layout;
    layout.bs_positions[index_of(Operator::A)] = {{12.5, 12.5}, {37.5, 37.5}};
    layout.bs_positions[index_of(Operator::B)] = {{12.5, 37.5}, {37.5, 12.5}};
    return layout;
}

void Layout::validate() const {
    if (hall_side <= 0.0) throw InvalidParameterError("layout: hall_side must be > 0");
    if (min_distance <= 0.0) throw InvalidParameterError("layout: min_distance must be > 0");
    for (Operator op : kOperators) {
        const auto& bs = bs_positions[index_of(op)];
        if (bs.empty()) throw InvalidParameterError("layout: every operator needs at least one BS");
        for (const Point& p : bs) {
            if (p.x < 0.0 || p.x > hall_side || p.y < 0.0 || p.y > hall_side)
                throw InvalidParameterError("layout: BS outside the hall");
        }
    }
}

UserDrop generate_users(Operator op, double mean, const Layout& layout, Rng& rng) {
    if (mean < 0.0) throw InvalidParameterError("generate_users: mean must be >= 0");
    UserDrop drop;
    drop.op = op;
    const int n = rng.poisson(mean);
    drop.positions.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(0.0, layout.hall_side);
        const double y = rng.uniform(0.0, layout.hall_side);
        drop.positions.push_back({x, y});
    }
    drop.realized_count = n;
    return drop;
}

double pathloss_gain(double dist, const PathlossModel& model, double min_distance) {
    if (dist < 0.0) throw InvalidParameterError("pathloss_gain: negative distance");
    const double d = std::max(dist, min_distance);
    return model.attenuation_constant * std::pow(d, -model.exponent);
}

int associate(const Point& user, const std::vector<Point>& own_bs,
              const PathlossModel& model, double min_distance) {
    if (own_bs.empty()) throw InvalidParameterError("associate: no base stations");
    int best = 0;
    double best_gain = pathloss_gain(distance(user, own_bs[0]), model, min_distance);
    for (int i = 1; i < static_cast<int>(own_bs.size()); ++i) {
        const double g = pathloss_gain(distance(user, own_bs[i]), model, min_distance);
        if (g > best_gain) {
            best_gain = g;
            best = i;
        }
    }
    return best;
}

NetworkSnapshot make_snapshot(const Layout& layout, const PathlossModel& model,
                              double mean_a, double mean_b, Rng& rng) {
    layout.validate();
    NetworkSnapshot snap;
    snap.drops[index_of(Operator::A)] = generate_users(Operator::A, mean_a, layout, rng);
    snap.drops[index_of(Operator::B)] = generate_users(Operator::B, mean_b, layout, rng);

    const int total = layout.total_bs();
    for (Operator op : kOperators) {
        const int oi = index_of(op);
        const auto& users = snap.drops[oi].positions;
        Matrix g(static_cast<int>(users.size()), total);
        for (int u = 0; u < static_cast<int>(users.size()); ++u) {
            int col = 0;
            for (Operator owner : kOperators) {
                for (const Point& bs : layout.bs_positions[index_of(owner)]) {
                    g(u, col++) = pathloss_gain(distance(users[u], bs), model, layout.min_distance);
                }
            }
        }
        snap.gains[oi] = std::move(g);
        snap.association[oi].resize(users.size());
        for (int u = 0; u < static_cast<int>(users.size()); ++u) {
            snap.association[oi][u] =
                associate(users[u], layout.bs_positions[oi], model, layout.min_distance);
        }
    }
    return snap;
}

}  // namespace lsp
