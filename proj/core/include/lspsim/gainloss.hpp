// Favor valuation and the empirical distributions behind the threshold
// solver. A gain is the utility improvement when the opponent vacates the k
// lowest pool carriers; a loss is the utility cost of vacating them oneself.
#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "lspsim/common.hpp"
#include "lspsim/radio.hpp"
#include "lspsim/scheduler.hpp"

namespace lsp {

enum class Direction { Gain, Loss };

inline const char* to_string(Direction d) { return d == Direction::Gain ? "gain" : "loss"; }

struct FavorValue {
    int k = 0;
    double value = 0.0; // utility difference, >= 0
};

// Multiset of gain or loss samples for one (operator, direction, k) with
// CDF and partial-expectation queries. Appends happen during initialization;
// freeze() sorts once, after which the store is read-only.
class SampleStore {
public:
    SampleStore() = default;
    SampleStore(Operator owner, Direction dir, int k) : owner_(owner), dir_(dir), k_(k) {}

    Operator owner() const { return owner_; }
    Direction direction() const { return dir_; }
    int favor_size() const { return k_; }

    void append(double value);
    void freeze();
    bool frozen() const { return frozen_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

    // P(sample <= x)
    double cdf_at(double x) const;
    // (1/N) * sum of samples <= x
    double partial_mean_below(double x) const;
    // (1/N) * sum of samples > x; complements partial_mean_below exactly.
    double partial_mean_above(double x) const;
    double mean() const;
    double max_sample() const;
    // Nearest-rank percentile, p in [0, 100].
    double percentile(double p) const;

    void write(std::ostream& os) const;
    // Parses a file produced by write(); every line must carry the expected
    // identity. The returned store is not yet frozen.
    static SampleStore read(std::istream& is, Operator owner, Direction dir, int k);

    // store_<op>_<direction>_k<k>.csv
    std::string file_name() const;

private:
    void require_nonempty() const;
    void require_frozen() const;
    std::size_t count_below_or_equal(double x) const;

    Operator owner_ = Operator::A;
    Direction dir_ = Direction::Gain;
    int k_ = 1;
    bool frozen_ = false;
    std::vector<double> samples_;
    std::vector<double> prefix_; // prefix sums over the sorted samples
};

// All stores of one operator: gains[k-1], losses[k-1] for k = 1..K.
struct StoreSet {
    std::vector<SampleStore> gains;
    std::vector<SampleStore> losses;

    static StoreSet make(Operator owner, int pool_size);
    void freeze_all();
    const SampleStore& gain(int k) const { return gains.at(k - 1); }
    const SampleStore& loss(int k) const { return losses.at(k - 1); }
    int pool_size() const { return static_cast<int>(gains.size()); }

    void save(const std::string& dir) const;
    static StoreSet load(const std::string& dir, Operator owner, int pool_size);
};

// Optimal utility of `op` under an allocation, via the PF weight solver.
UtilityValue evaluate_utility(const NetworkSnapshot& snap, const Layout& layout, Operator op,
                              const AllocationState& alloc, const RadioParams& radio,
                              const SchedulerOptions& sched);

// U(opponent vacates pool carriers 1..k) - U(default state).
FavorValue value_gain(const NetworkSnapshot& snap, const Layout& layout, Operator op, int k,
                      const RadioParams& radio, const SchedulerOptions& sched);

// U(default state) - U(self vacates pool carriers 1..k).
FavorValue value_loss(const NetworkSnapshot& snap, const Layout& layout, Operator op, int k,
                      const RadioParams& radio, const SchedulerOptions& sched);

}  // namespace lsp
