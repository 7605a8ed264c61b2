// Fixture builders shared across the test files.
#pragma once

#include <vector>

#include "lspsim/deployment.hpp"

namespace lsp::test {

// Snapshot with users at fixed positions; gains and association follow the
// pathloss model, as in make_snapshot, but with deterministic placement.
inline NetworkSnapshot place_users(const Layout& layout, const PathlossModel& model,
                                   const std::vector<Point>& users_a,
                                   const std::vector<Point>& users_b) {
    NetworkSnapshot snap;
    const int total = layout.total_bs();
    const std::array<const std::vector<Point>*, 2> users{&users_a, &users_b};
    for (Operator op : kOperators) {
        const int i = index_of(op);
        snap.drops[i].op = op;
        snap.drops[i].positions = *users[i];
        snap.drops[i].realized_count = static_cast<int>(users[i]->size());
        snap.gains[i] = Matrix(snap.drops[i].realized_count, total);
        for (int u = 0; u < snap.drops[i].realized_count; ++u) {
            const Point& pos = snap.drops[i].positions[static_cast<std::size_t>(u)];
            int col = 0;
            for (Operator owner : kOperators)
                for (const Point& bs : layout.bs_positions[index_of(owner)])
                    snap.gains[i](u, col++) =
                        pathloss_gain(distance(pos, bs), model, layout.min_distance);
            snap.association[i].push_back(
                associate(pos, layout.bs_positions[i], model, layout.min_distance));
        }
    }
    return snap;
}

// One base station per operator, facing each other across the hall.
inline Layout two_station_layout() {
    Layout layout;
    layout.bs_positions[0] = {{15.0, 25.0}};
    layout.bs_positions[1] = {{35.0, 25.0}};
    return layout;
}

}  // namespace lsp::test
