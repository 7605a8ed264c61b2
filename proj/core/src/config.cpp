#include "lspsim/config.hpp"

#include <fstream>
#include <sstream>

namespace lsp {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw InvalidParameterError("config line " + std::to_string(line_no) +
                                    ": bad number '" + s + "'");
    }
}

long long parse_integer(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw InvalidParameterError("config line " + std::to_string(line_no) +
                                    ": bad integer '" + s + "'");
    }
}

std::uint64_t parse_u64(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw InvalidParameterError("config line " + std::to_string(line_no) +
                                    ": bad unsigned integer '" + s + "'");
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<double> parse_double_list(const std::string& s, int line_no) {
    std::vector<double> out;
    for (const std::string& tok : split_ws(s)) out.push_back(parse_double(tok, line_no));
    return out;
}

// "x,y x,y ..." pairs.
template <typename Pair>
std::vector<Pair> parse_pairs(const std::string& s, int line_no) {
    std::vector<Pair> out;
    for (const std::string& tok : split_ws(s)) {
        const auto comma = tok.find(',');
        if (comma == std::string::npos)
            throw InvalidParameterError("config line " + std::to_string(line_no) +
                                        ": expected 'x,y' pair, got '" + tok + "'");
        const double x = parse_double(tok.substr(0, comma), line_no);
        const double y = parse_double(tok.substr(comma + 1), line_no);
        out.push_back(Pair{x, y});
    }
    return out;
}

GroupMode group_from_string(const std::string& s, int line_no) {
    if (s == "bs") return GroupMode::PerBs;
    if (s == "operator") return GroupMode::PerOperator;
    throw InvalidParameterError("config line " + std::to_string(line_no) +
                                ": scheduler.group must be 'bs' or 'operator'");
}

}  // namespace

std::string format_double(double value) {
    std::ostringstream os;
    os.precision(17);
    os << value;
    return os.str();
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig config;
    config.layout.bs_positions[0].clear();
    config.layout.bs_positions[1].clear();
    bool saw_bs_a = false;
    bool saw_bs_b = false;
    config.start_thresholds.theta.clear();
    config.start_thresholds.lambda.clear();

    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string text = trim(line.substr(0, line.find('#')));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw InvalidParameterError("config line " + std::to_string(line_no) +
                                            ": unterminated section header");
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw InvalidParameterError("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        const std::string qualified = section + "." + key;

        if (qualified == "experiment.seed") config.seed = parse_u64(value, line_no);
        else if (qualified == "experiment.stages")
            config.stages = static_cast<int>(parse_integer(value, line_no));
        else if (qualified == "experiment.snapshots")
            config.snapshots = static_cast<int>(parse_integer(value, line_no));
        else if (qualified == "experiment.update_period")
            config.update_period = static_cast<int>(parse_integer(value, line_no));
        else if (qualified == "experiment.scenario")
            config.scenario = scenario_from_string(value);
        else if (qualified == "experiment.heavy_load")
            config.heavy_load = parse_double(value, line_no);
        else if (qualified == "experiment.light_load")
            config.light_load = parse_double(value, line_no);
        else if (qualified == "experiment.equal_load")
            config.equal_load = parse_double(value, line_no);
        else if (qualified == "experiment.custom_loads")
            config.custom_loads = parse_pairs<std::array<double, 2>>(value, line_no);
        else if (qualified == "experiment.init_load_low")
            config.init_loads.low = static_cast<int>(parse_integer(value, line_no));
        else if (qualified == "experiment.init_load_high")
            config.init_loads.high = static_cast<int>(parse_integer(value, line_no));
        else if (qualified == "experiment.out_dir")
            config.out_dir = value;
        else if (qualified == "experiment.threads")
            config.threads = static_cast<int>(parse_integer(value, line_no));
        else if (qualified == "layout.hall_side")
            config.layout.hall_side = parse_double(value, line_no);
        else if (qualified == "layout.min_distance")
            config.layout.min_distance = parse_double(value, line_no);
        else if (qualified == "layout.bs_a") {
            config.layout.bs_positions[0] = parse_pairs<Point>(value, line_no);
            saw_bs_a = true;
        } else if (qualified == "layout.bs_b") {
            config.layout.bs_positions[1] = parse_pairs<Point>(value, line_no);
            saw_bs_b = true;
        } else if (qualified == "pathloss.attenuation")
            config.pathloss.attenuation_constant = parse_double(value, line_no);
        else if (qualified == "pathloss.exponent")
            config.pathloss.exponent = parse_double(value, line_no);
        else if (qualified == "radio.pool_size")
            config.radio.pool_size = static_cast<int>(parse_integer(value, line_no));
        else if (qualified == "radio.tx_power_w")
            config.radio.tx_power_w = parse_double(value, line_no);
        else if (qualified == "radio.noise_density_dbm_hz")
            config.radio.noise_density_dbm_hz = parse_double(value, line_no);
        else if (qualified == "radio.noise_figure_db")
            config.radio.noise_figure_db = parse_double(value, line_no);
        else if (qualified == "radio.cc_bandwidth_hz")
            config.radio.cc_bandwidth_hz = parse_double(value, line_no);
        else if (qualified == "radio.sinr_efficiency")
            config.radio.sinr_efficiency = parse_double(value, line_no);
        else if (qualified == "scheduler.group")
            config.sched.group = group_from_string(value, line_no);
        else if (qualified == "scheduler.tolerance")
            config.sched.tolerance = parse_double(value, line_no);
        else if (qualified == "scheduler.max_iters")
            config.sched.max_iters = static_cast<int>(parse_integer(value, line_no));
        else if (qualified == "solver.lambda1_percentile")
            config.search.lambda1_percentile = parse_double(value, line_no);
        else if (qualified == "solver.scan_step_fraction")
            config.search.scan_step_fraction = parse_double(value, line_no);
        else if (qualified == "solver.bisect_width")
            config.search.bisect_width = parse_double(value, line_no);
        else if (qualified == "solver.residual_tolerance")
            config.search.residual_tolerance = parse_double(value, line_no);
        else if (qualified == "thresholds.theta")
            config.start_thresholds.theta = parse_double_list(value, line_no);
        else if (qualified == "thresholds.lambda")
            config.start_thresholds.lambda = parse_double_list(value, line_no);
        else
            throw InvalidParameterError("config line " + std::to_string(line_no) +
                                        ": unknown key '" + qualified + "'");
    }
    const Layout defaults = Layout::default_layout();
    if (!saw_bs_a) config.layout.bs_positions[0] = defaults.bs_positions[0];
    if (!saw_bs_b) config.layout.bs_positions[1] = defaults.bs_positions[1];
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(is);
}

void write_config(const ExperimentConfig& config, std::ostream& os) {
    const auto pairs = [](const auto& list) {
        std::string out;
        for (const auto& p : list) {
            if (!out.empty()) out += ' ';
            out += format_double(p[0]) + "," + format_double(p[1]);
        }
        return out;
    };
    const auto points = [](const std::vector<Point>& list) {
        std::string out;
        for (const Point& p : list) {
            if (!out.empty()) out += ' ';
            out += format_double(p.x) + "," + format_double(p.y);
        }
        return out;
    };
    const auto doubles = [](const std::vector<double>& list) {
        std::string out;
        for (double v : list) {
            if (!out.empty()) out += ' ';
            out += format_double(v);
        }
        return out;
    };

    os << "# spectrum-sharing experiment configuration\n\n";
    os << "[experiment]\n";
    os << "seed = " << config.seed << "\n";
    os << "stages = " << config.stages << "\n";
    os << "snapshots = " << config.snapshots << "\n";
    os << "update_period = " << config.update_period << "\n";
    os << "scenario = " << to_string(config.scenario) << "\n";
    os << "heavy_load = " << format_double(config.heavy_load) << "\n";
    os << "light_load = " << format_double(config.light_load) << "\n";
    os << "equal_load = " << format_double(config.equal_load) << "\n";
    os << "custom_loads = " << pairs(config.custom_loads) << "\n";
    os << "init_load_low = " << config.init_loads.low << "\n";
    os << "init_load_high = " << config.init_loads.high << "\n";
    os << "out_dir = " << config.out_dir << "\n";
    os << "threads = " << config.threads << "\n\n";

    os << "[layout]\n";
    os << "hall_side = " << format_double(config.layout.hall_side) << "\n";
    os << "min_distance = " << format_double(config.layout.min_distance) << "\n";
    os << "bs_a = " << points(config.layout.bs_positions[0]) << "\n";
    os << "bs_b = " << points(config.layout.bs_positions[1]) << "\n\n";

    os << "[pathloss]\n";
    os << "attenuation = " << format_double(config.pathloss.attenuation_constant) << "\n";
    os << "exponent = " << format_double(config.pathloss.exponent) << "\n\n";

    os << "[radio]\n";
    os << "pool_size = " << config.radio.pool_size << "\n";
    os << "tx_power_w = " << format_double(config.radio.tx_power_w) << "\n";
    os << "noise_density_dbm_hz = " << format_double(config.radio.noise_density_dbm_hz)
       << "\n";
    os << "noise_figure_db = " << format_double(config.radio.noise_figure_db) << "\n";
    os << "cc_bandwidth_hz = " << format_double(config.radio.cc_bandwidth_hz) << "\n";
    os << "sinr_efficiency = " << format_double(config.radio.sinr_efficiency) << "\n\n";

    os << "[scheduler]\n";
    os << "group = " << (config.sched.group == GroupMode::PerBs ? "bs" : "operator") << "\n";
    os << "tolerance = " << format_double(config.sched.tolerance) << "\n";
    os << "max_iters = " << config.sched.max_iters << "\n\n";

    os << "[solver]\n";
    os << "lambda1_percentile = " << format_double(config.search.lambda1_percentile) << "\n";
    os << "scan_step_fraction = " << format_double(config.search.scan_step_fraction) << "\n";
    os << "bisect_width = " << format_double(config.search.bisect_width) << "\n";
    os << "residual_tolerance = " << format_double(config.search.residual_tolerance)
       << "\n\n";

    os << "[thresholds]\n";
    os << "theta = " << doubles(config.start_thresholds.theta) << "\n";
    os << "lambda = " << doubles(config.start_thresholds.lambda) << "\n";
}

void save_config(const ExperimentConfig& config, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write config file: " + path);
    write_config(config, os);
}

GameParams ExperimentConfig::game_params() const {
    GameParams p;
    p.layout = layout;
    p.pathloss = pathloss;
    p.radio = radio;
    p.sched = sched;
    p.search = search;
    p.update_period = update_period;
    p.start_thresholds = start_thresholds;
    p.threads = threads;
    return p;
}

ScenarioSchedule ExperimentConfig::schedule() const {
    switch (scenario) {
        case ScenarioKind::AsymmetricSwap:
            return ScenarioSchedule::asymmetric_swap(stages, seed, heavy_load, light_load);
        case ScenarioKind::Equal:
            return ScenarioSchedule::equal(stages, seed, equal_load);
        case ScenarioKind::Custom:
            return ScenarioSchedule::custom(custom_loads, seed);
    }
    throw InvalidParameterError("config: unknown scenario");
}

void ExperimentConfig::validate() const {
    if (stages < 0) throw InvalidParameterError("config: stages must be >= 0");
    if (snapshots < 0) throw InvalidParameterError("config: snapshots must be >= 0");
    if (update_period < 1) throw InvalidParameterError("config: update_period must be >= 1");
    if (heavy_load < 0.0 || light_load < 0.0 || equal_load < 0.0)
        throw InvalidParameterError("config: loads must be nonnegative");
    if (scenario == ScenarioKind::Custom && custom_loads.empty())
        throw InvalidParameterError("config: custom scenario needs custom_loads");
    if (out_dir.empty()) throw InvalidParameterError("config: out_dir must not be empty");
    if (threads < 0) throw InvalidParameterError("config: threads must be >= 0");
    init_loads.validate();
    layout.validate();
    radio.validate();
    if (sched.max_iters < 1 || sched.tolerance <= 0.0)
        throw InvalidParameterError("config: bad scheduler options");
    if (start_thresholds.theta.size() != start_thresholds.lambda.size())
        throw InvalidParameterError("config: theta/lambda lists differ in length");
    if (!start_thresholds.theta.empty() &&
        start_thresholds.pool_size() != radio.pool_size)
        throw InvalidParameterError("config: threshold lists must match pool_size");
}

}  // namespace lsp
