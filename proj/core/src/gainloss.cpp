#include "lspsim/gainloss.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lsp {

void SampleStore::append(double value) {
    if (frozen_) throw InvalidQueryError("SampleStore: append after freeze");
    samples_.push_back(value);
}

void SampleStore::freeze() {
    std::sort(samples_.begin(), samples_.end());
    prefix_.resize(samples_.size());
    double running = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        running += samples_[i];
        prefix_[i] = running;
    }
    frozen_ = true;
}

void SampleStore::require_nonempty() const {
    if (samples_.empty()) throw EmptyStoreError("SampleStore: query on empty store");
}

void SampleStore::require_frozen() const {
    if (!frozen_) throw InvalidQueryError("SampleStore: query before freeze");
}

std::size_t SampleStore::count_below_or_equal(double x) const {
    return std::upper_bound(samples_.begin(), samples_.end(), x) - samples_.begin();
}

double SampleStore::cdf_at(double x) const {
    require_nonempty();
    require_frozen();
    return static_cast<double>(count_below_or_equal(x)) / static_cast<double>(samples_.size());
}

double SampleStore::partial_mean_below(double x) const {
    require_nonempty();
    require_frozen();
    const std::size_t n = count_below_or_equal(x);
    if (n == 0) return 0.0;
    return prefix_[n - 1] / static_cast<double>(samples_.size());
}

double SampleStore::partial_mean_above(double x) const {
    require_nonempty();
    require_frozen();
    const std::size_t n = count_below_or_equal(x);
    const double below = n == 0 ? 0.0 : prefix_[n - 1];
    return (prefix_.back() - below) / static_cast<double>(samples_.size());
}

double SampleStore::mean() const {
    require_nonempty();
    require_frozen();
    return prefix_.back() / static_cast<double>(samples_.size());
}

double SampleStore::max_sample() const {
    require_nonempty();
    require_frozen();
    return samples_.back();
}

double SampleStore::percentile(double p) const {
    require_nonempty();
    require_frozen();
    if (p < 0.0 || p > 100.0) throw InvalidParameterError("percentile: p outside [0,100]");
    const std::size_t n = samples_.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
    if (rank > 0) --rank;
    return samples_[std::min(rank, n - 1)];
}

void SampleStore::write(std::ostream& os) const {
    os << "operator,direction,k,value\n";
    std::ostringstream line;
    line.precision(17);
    for (double s : samples_) {
        line.str("");
        line << label(owner_) << ',' << to_string(dir_) << ',' << k_ << ',' << s << '\n';
        os << line.str();
    }
}

SampleStore SampleStore::read(std::istream& is, Operator owner, Direction dir, int k) {
    std::string header;
    if (!std::getline(is, header) || header != "operator,direction,k,value")
        throw InvalidParameterError("SampleStore: bad store file header");
    SampleStore store(owner, dir, k);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string op, d, kk, value;
        if (!std::getline(fields, op, ',') || !std::getline(fields, d, ',') ||
            !std::getline(fields, kk, ',') || !std::getline(fields, value))
            throw InvalidParameterError("SampleStore: malformed store line: " + line);
        if (op != std::string(1, label(owner)) || d != to_string(dir) || std::stoi(kk) != k)
            throw InvalidParameterError("SampleStore: line identity mismatch: " + line);
        store.samples_.push_back(std::stod(value));
    }
    return store;
}

std::string SampleStore::file_name() const {
    std::ostringstream name;
    name << "store_" << label(owner_) << '_' << to_string(dir_) << "_k" << k_ << ".csv";
    return name.str();
}

StoreSet StoreSet::make(Operator owner, int pool_size) {
    StoreSet set;
    for (int k = 1; k <= pool_size; ++k) {
        set.gains.emplace_back(owner, Direction::Gain, k);
        set.losses.emplace_back(owner, Direction::Loss, k);
    }
    return set;
}

void StoreSet::freeze_all() {
    for (auto& s : gains) s.freeze();
    for (auto& s : losses) s.freeze();
}

void StoreSet::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto* stores : {&gains, &losses}) {
        for (const SampleStore& s : *stores) {
            std::ofstream os(std::filesystem::path(dir) / s.file_name());
            if (!os) throw std::runtime_error("StoreSet: cannot write store file in " + dir);
            s.write(os);
        }
    }
}

StoreSet StoreSet::load(const std::string& dir, Operator owner, int pool_size) {
    StoreSet set;
    for (int k = 1; k <= pool_size; ++k) {
        for (Direction d : {Direction::Gain, Direction::Loss}) {
            const auto path =
                std::filesystem::path(dir) / SampleStore(owner, d, k).file_name();
            std::ifstream is(path);
            if (!is) throw std::runtime_error("StoreSet: missing store file " + path.string());
            SampleStore s = SampleStore::read(is, owner, d, k);
            s.freeze();
            (d == Direction::Gain ? set.gains : set.losses).push_back(std::move(s));
        }
    }
    return set;
}

UtilityValue evaluate_utility(const NetworkSnapshot& snap, const Layout& layout, Operator op,
                              const AllocationState& alloc, const RadioParams& radio,
                              const SchedulerOptions& sched) {
    const LinkRates rates = compute_link_rates(snap, layout, op, alloc, radio);
    const auto groups = make_groups(snap, op, sched.group);
    return optimize_weights(rates, groups, sched).utility;
}

namespace {

FavorValue favor_difference(const NetworkSnapshot& snap, const Layout& layout, Operator op,
                            int k, const RadioParams& radio, const SchedulerOptions& sched,
                            Direction dir) {
    if (k < 1 || k > radio.pool_size)
        throw InvalidParameterError("favor valuation: k outside 1..K");
    const AllocationState def = AllocationState::all_active(radio.pool_size);
    AllocationState alt = def;
    alt.vacate_lowest(dir == Direction::Gain ? other(op) : op, k);

    const double u_def = evaluate_utility(snap, layout, op, def, radio, sched).value;
    const double u_alt = evaluate_utility(snap, layout, op, alt, radio, sched).value;
    const double diff = dir == Direction::Gain ? u_alt - u_def : u_def - u_alt;
    // Exact values are nonnegative; solver tolerance may leave dust below zero.
    return FavorValue{k, std::max(0.0, diff)};
}

}  // namespace

FavorValue value_gain(const NetworkSnapshot& snap, const Layout& layout, Operator op, int k,
                      const RadioParams& radio, const SchedulerOptions& sched) {
    return favor_difference(snap, layout, op, k, radio, sched, Direction::Gain);
}

FavorValue value_loss(const NetworkSnapshot& snap, const Layout& layout, Operator op, int k,
                      const RadioParams& radio, const SchedulerOptions& sched) {
    return favor_difference(snap, layout, op, k, radio, sched, Direction::Loss);
}

}  // namespace lsp
