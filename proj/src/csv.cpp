#include "cbf/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cbf {

namespace {

constexpr std::size_t kStepColumns = 14;

std::string join_labels(const std::vector<std::string>& labels)
{
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i)
            out += '|';
        out += labels[i];
    }
    return out;
}

std::vector<std::string> split_labels(const std::string& text)
{
    std::vector<std::string> out;
    if (text.empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const auto bar = text.find('|', start);
        out.push_back(text.substr(start, bar - start));
        if (bar == std::string::npos)
            break;
        start = bar + 1;
    }
    return out;
}

std::size_t parse_index(const std::string& text)
{
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("not an index: '" + text + "'");
    return v;
}

const char* kind_name(ApproachKind kind)
{
    return kind == ApproachKind::hocbf ? "hocbf" : "ttcbf";
}

}  // namespace

std::string format_double(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc())
        throw std::runtime_error("double formatting failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text)
{
    // from_chars rejects a leading '+'
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return v;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

void write_step_csv(std::ostream& out, const SimLog& log)
{
    out << kStepCsvHeader << '\n';
    for (const auto& r : log.steps) {
        out << r.step << ',' << format_double(r.t) << ',' << format_double(r.state.x) << ','
            << format_double(r.state.y) << ',' << format_double(r.state.vx) << ','
            << format_double(r.state.vy) << ',' << format_double(r.u.x()) << ','
            << format_double(r.u.y()) << ',' << format_double(r.h) << ','
            << format_double(r.h_dot) << ',' << format_double(r.constraint_offset) << ','
            << join_labels(r.active_set) << ',' << to_string(r.status) << ',';
        if (r.ttcbf_slack)
            out << format_double(*r.ttcbf_slack);
        out << '\n';
    }
}

SimLog read_step_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty step log");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kStepCsvHeader)
        throw std::invalid_argument("unexpected step log header: " + line);

    SimLog log;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != kStepColumns)
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(kStepColumns) + " columns");
        StepRecord r;
        r.step = parse_index(f[0]);
        r.t = parse_double(f[1]);
        r.state = {parse_double(f[2]), parse_double(f[3]), parse_double(f[4]),
                   parse_double(f[5])};
        r.u = Input(parse_double(f[6]), parse_double(f[7]));
        r.h = parse_double(f[8]);
        r.h_dot = parse_double(f[9]);
        r.constraint_offset = parse_double(f[10]);
        r.active_set = split_labels(f[11]);
        if (f[12] == "optimal")
            r.status = QpStatus::optimal;
        else if (f[12] == "infeasible")
            r.status = QpStatus::infeasible;
        else
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": unknown status '" + f[12] + "'");
        if (!f[13].empty())
            r.ttcbf_slack = parse_double(f[13]);
        log.steps.push_back(std::move(r));
    }
    return log;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << kind_name(r.kind) << ',' << format_double(r.lambda1) << ','
            << (r.lambda2 ? format_double(*r.lambda2) : "") << ','
            << (r.gamma ? format_double(*r.gamma) : "") << ','
            << format_double(r.summary.mean_x_speed) << ',' << format_double(r.summary.min_h)
            << ',' << (r.summary.bypass ? "true" : "false") << ',' << r.summary.infeasible_steps << '\n';
    }
}

void write_lower_bound_csv(std::ostream& out, const ExponentialSumBound& bound,
                           const std::vector<double>& times)
{
    out << "# rate,coefficient\n";
    for (std::size_t i = 0; i < bound.coefficients.size(); ++i)
        out << "# " << format_double(bound.rates[i]) << ',' << format_double(bound.coefficients[i])
            << '\n';
    out << "t,h_lb\n";
    for (double t : times)
        out << format_double(t) << ',' << format_double(eval_bound_ct(bound, t)) << '\n';
}

std::string summary_line(const SimSummary& s, std::size_t steps)
{
    std::ostringstream line;
    line << "steps=" << steps << " mean_x_speed=" << format_double(s.mean_x_speed)
         << " min_h=" << format_double(s.min_h) << " bypass=" << (s.bypass ? "true" : "false")
         << " infeasible_steps=" << s.infeasible_steps;
    return line.str();
}

}  // namespace cbf
