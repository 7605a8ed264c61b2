#include "lspsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "lspsim/config.hpp"

namespace lsp {

namespace {

std::vector<double> rates_of(const RateLog& log, Operator op) {
    std::vector<double> out;
    for (const RateLogEntry& e : log.entries)
        if (e.op == op) out.push_back(e.rate);
    return out;
}

double nearest_rank(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
    if (rank > 0) --rank;
    return sorted[std::min(rank, n - 1)];
}

std::string percent(double v) {
    std::ostringstream os;
    os << std::showpos << std::fixed << std::setprecision(1) << v * 100.0 << "%";
    return os.str();
}

std::string rate_text(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

}  // namespace

OperatorSummary summarize_rates(const RateLog& log, Operator op) {
    std::vector<double> rates = rates_of(log, op);
    OperatorSummary s;
    s.samples = static_cast<long long>(rates.size());
    if (rates.empty()) return s;
    std::sort(rates.begin(), rates.end());
    double total = 0.0;
    for (double r : rates) total += r;
    s.mean = total / static_cast<double>(rates.size());
    s.p10 = nearest_rank(rates, 10.0);
    s.p50 = nearest_rank(rates, 50.0);
    s.p90 = nearest_rank(rates, 90.0);
    return s;
}

ReportSummary summarize(const RateLog& favor, const RateLog& baseline,
                        const FavorLedger* ledger) {
    ReportSummary summary;
    for (Operator op : kOperators) {
        const int i = index_of(op);
        summary.favor[i] = summarize_rates(favor, op);
        summary.baseline[i] = summarize_rates(baseline, op);
        if (summary.favor[i].samples == 0 || summary.baseline[i].samples == 0)
            throw std::runtime_error(std::string("rate log for operator ") + label(op) +
                                     " is empty; nothing to summarize");
        if (summary.baseline[i].mean <= 0.0 || summary.baseline[i].p10 <= 0.0)
            throw std::runtime_error("baseline rates are not positive; cannot report "
                                     "relative improvement");
        summary.mean_improvement[i] = summary.favor[i].mean / summary.baseline[i].mean - 1.0;
        summary.p10_improvement[i] = summary.favor[i].p10 / summary.baseline[i].p10 - 1.0;
        summary.p50_improvement[i] = summary.favor[i].p50 / summary.baseline[i].p50 - 1.0;
        summary.p90_improvement[i] = summary.favor[i].p90 / summary.baseline[i].p90 - 1.0;
    }
    if (ledger) {
        summary.has_ledger = true;
        for (Operator op : kOperators) {
            summary.taken[index_of(op)] = ledger->taken(op);
            summary.given[index_of(op)] = ledger->given(op);
        }
    }
    return summary;
}

std::string ReportSummary::to_text() const {
    std::ostringstream os;
    os << "user-rate summary (bits/s, pooled over stages and users)\n";
    for (Operator op : kOperators) {
        const int i = index_of(op);
        const auto row = [&](const char* name, const OperatorSummary& s) {
            os << "  " << label(op) << " " << std::left << std::setw(9) << name << std::right
               << " mean=" << rate_text(s.mean) << " p10=" << rate_text(s.p10)
               << " p50=" << rate_text(s.p50) << " p90=" << rate_text(s.p90)
               << " (n=" << s.samples << ")\n";
        };
        row("favor", favor[i]);
        row("baseline", baseline[i]);
        os << "  " << label(op) << " improvement mean=" << percent(mean_improvement[i])
           << " p10=" << percent(p10_improvement[i]) << " p50=" << percent(p50_improvement[i])
           << " p90=" << percent(p90_improvement[i]) << "\n";
    }
    if (has_ledger) {
        os << "favor ledger (carrier-stages)\n";
        for (Operator op : kOperators)
            os << "  " << label(op) << " taken=" << taken[index_of(op)]
               << " given=" << given[index_of(op)] << "\n";
    }
    return os.str();
}

void write_rate_log(const RateLog& log, std::ostream& os) {
    os << "stage,operator,user,rate\n";
    for (const RateLogEntry& e : log.entries)
        os << e.stage << ',' << label(e.op) << ',' << e.user << ',' << format_double(e.rate)
           << '\n';
}

RateLog read_rate_log(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != "stage,operator,user,rate")
        throw InvalidParameterError("rate log: bad header");
    RateLog log;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string stage, op, user, rate;
        if (!std::getline(fields, stage, ',') || !std::getline(fields, op, ',') ||
            !std::getline(fields, user, ',') || !std::getline(fields, rate))
            throw InvalidParameterError("rate log: malformed line: " + line);
        log.entries.push_back({std::stoi(stage), operator_from_label(op.at(0)),
                               std::stoi(user), std::stod(rate)});
    }
    return log;
}

void write_outcomes(const std::vector<StageRecord>& outcomes, std::ostream& os) {
    os << "stage,ask_a,ask_b,outcome,grantor,k,utility_a,utility_b\n";
    for (const StageRecord& r : outcomes) {
        os << r.stage << ',' << r.ask_size[0] << ',' << r.ask_size[1] << ','
           << (r.kind == OutcomeKind::Exchange ? "exchange" : "default") << ',';
        if (r.kind == OutcomeKind::Exchange)
            os << label(r.grantor);
        else
            os << '-';
        os << ',' << r.k << ',' << format_double(r.utilities[0]) << ','
           << format_double(r.utilities[1]) << '\n';
    }
}

void write_trajectory(const std::vector<EpochRecord>& epochs, std::ostream& os) {
    os << "stage,operator,k,theta,lambda,multiplier\n";
    for (const EpochRecord& e : epochs)
        for (Operator op : kOperators) {
            const SolverReport& report = e.reports[index_of(op)];
            for (int k = 1; k <= report.chosen.pool_size(); ++k)
                os << e.stage << ',' << label(op) << ',' << k << ','
                   << format_double(report.chosen.ask(k)) << ','
                   << format_double(report.chosen.grant(k)) << ','
                   << format_double(report.multiplier) << '\n';
        }
}

void write_ledger_totals(const FavorLedger& ledger, std::ostream& os) {
    os << "operator,stages,taken,given\n";
    for (Operator op : kOperators)
        os << label(op) << ',' << ledger.stages() << ',' << ledger.taken(op) << ','
           << ledger.given(op) << '\n';
}

void write_ledger_counts(const FavorLedger& ledger, std::ostream& os) {
    os << "operator,k,asks,grants,opportunities\n";
    for (Operator op : kOperators)
        for (int k = 1; k <= ledger.pool_size(); ++k)
            os << label(op) << ',' << k << ',' << ledger.asks(op, k) << ','
               << ledger.grants(op, k) << ',' << ledger.grant_opportunities(op, k) << '\n';
}

namespace {

struct SvgCurve {
    std::vector<double> sorted_rates;
    const char* color;
    const char* name;
};

}  // namespace

void write_rate_cdf_svg(const RateLog& favor, const RateLog& baseline, Operator op,
                        std::ostream& os) {
    SvgCurve curves[2] = {{rates_of(favor, op), "#1b7837", "favor exchange"},
                          {rates_of(baseline, op), "#762a83", "static baseline"}};
    for (SvgCurve& c : curves) {
        std::erase_if(c.sorted_rates, [](double r) { return !(r > 0.0); });
        if (c.sorted_rates.empty())
            throw std::runtime_error("rate-CDF plot: no positive rates to draw");
        std::sort(c.sorted_rates.begin(), c.sorted_rates.end());
    }

    double lo = std::log10(std::min(curves[0].sorted_rates.front(),
                                    curves[1].sorted_rates.front()));
    double hi = std::log10(std::max(curves[0].sorted_rates.back(),
                                    curves[1].sorted_rates.back()));
    lo = std::floor(lo);
    hi = std::ceil(hi);
    if (hi <= lo) hi = lo + 1.0;

    const double width = 720, height = 480;
    const double ml = 80, mr = 24, mt = 36, mb = 64;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const auto px = [&](double lx) { return ml + (lx - lo) / (hi - lo) * pw; };
    const auto py = [&](double cdf) { return mt + (1.0 - cdf) * ph; };

    os.precision(2);
    os << std::fixed;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " "
       << height << "\" font-family=\"sans-serif\" font-size=\"14\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << ml << "\" y=\"22\" font-size=\"16\">user rate CDF, operator "
       << label(op) << "</text>\n";

    // Axes and decade grid.
    os << "<g stroke=\"#999\" stroke-width=\"1\">\n";
    for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); ++d) {
        const double x = px(d);
        os << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\""
           << mt + ph << "\" stroke-dasharray=\"2,4\"/>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double y = py(i / 5.0);
        os << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\""
           << y << "\" stroke-dasharray=\"2,4\"/>\n";
    }
    os << "</g>\n";
    os << "<g stroke=\"black\" stroke-width=\"1.5\">\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
       << "\" y2=\"" << mt + ph << "\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << mt + ph << "\"/>\n";
    os << "</g>\n";
    for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); ++d)
        os << "<text x=\"" << px(d) << "\" y=\"" << mt + ph + 20
           << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
    for (int i = 0; i <= 5; ++i)
        os << "<text x=\"" << ml - 8 << "\" y=\"" << py(i / 5.0) + 5
           << "\" text-anchor=\"end\">" << std::setprecision(1) << i / 5.0
           << std::setprecision(2) << "</text>\n";
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 16
       << "\" text-anchor=\"middle\">user rate [bit/s]</text>\n";
    os << "<text x=\"20\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << mt + ph / 2
       << ")\">CDF</text>\n";

    for (const SvgCurve& c : curves) {
        const std::size_t n = c.sorted_rates.size();
        const std::size_t max_points = 600;
        const std::size_t stride = std::max<std::size_t>(1, n / max_points);
        os << "<polyline fill=\"none\" stroke=\"" << c.color
           << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < n; i += stride) {
            const double cdf = static_cast<double>(i + 1) / static_cast<double>(n);
            os << px(std::log10(c.sorted_rates[i])) << "," << py(cdf) << " ";
        }
        os << px(std::log10(c.sorted_rates.back())) << "," << py(1.0);
        os << "\"/>\n";
    }

    double ly = mt + 24;
    for (const SvgCurve& c : curves) {
        os << "<line x1=\"" << ml + 16 << "\" y1=\"" << ly - 5 << "\" x2=\"" << ml + 48
           << "\" y2=\"" << ly - 5 << "\" stroke=\"" << c.color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << ml + 56 << "\" y=\"" << ly << "\">" << c.name << "</text>\n";
        ly += 22;
    }
    os << "</svg>\n";
}

}  // namespace lsp
