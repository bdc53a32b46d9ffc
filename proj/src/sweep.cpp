#include "cbf/sweep.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "cbf/hocbf_algebra.hpp"
#include "cbf/plant_cbf.hpp"

namespace cbf {

namespace {

// Snap lo + i * step to 12 decimals so 2.1 + 3 * 0.1 prints as 2.4.
double snap(double v)
{
    return std::round(v * 1e12) / 1e12;
}

}  // namespace

std::vector<double> GridRange::values() const
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("grid step must be positive");
    if (!(max >= min))
        throw std::invalid_argument("grid range is empty (max < min)");
    const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(snap(min + static_cast<double>(i) * step));
    return out;
}

SweepSpec SweepSpec::hocbf_default()
{
    SweepSpec s;
    s.kind = ApproachKind::hocbf;
    s.base.approach = HocbfApproach{};
    s.lambda1 = {2.1, 10.0, 0.1};
    s.lambda2 = {0.5, 10.0, 0.1};
    return s;
}

SweepSpec SweepSpec::ttcbf_default()
{
    SweepSpec s;
    s.kind = ApproachKind::ttcbf;
    s.base.approach = TtcbfApproach{};
    s.lambda1 = {0.01, 0.50, 0.01};
    return s;
}

std::vector<SimConfig> expand_grid(const SweepSpec& spec)
{
    std::vector<SimConfig> grid;
    const auto l1 = spec.lambda1.values();
    if (spec.kind == ApproachKind::hocbf) {
        const auto l2 = spec.lambda2.values();
        grid.reserve(l1.size() * l2.size());
        for (double a : l1) {
            for (double b : l2) {
                SimConfig c = spec.base;
                c.approach = HocbfApproach{a, b};
                grid.push_back(std::move(c));
            }
        }
    } else {
        const auto* base = std::get_if<TtcbfApproach>(&spec.base.approach);
        const TtcbfApproach proto = base ? *base : TtcbfApproach{};
        grid.reserve(l1.size());
        for (double a : l1) {
            SimConfig c = spec.base;
            c.approach = TtcbfApproach{a, proto.gamma, proto.bound_gamma_r1};
            grid.push_back(std::move(c));
        }
    }
    return grid;
}

SweepRow summarize_run(const SimConfig& config, const SimLog& log)
{
    SweepRow row;
    row.summary = log.summary;
    if (const auto* h = std::get_if<HocbfApproach>(&config.approach)) {
        row.kind = ApproachKind::hocbf;
        row.lambda1 = h->lambda1;
        row.lambda2 = h->lambda2;
    } else {
        const auto& t = std::get<TtcbfApproach>(config.approach);
        row.kind = ApproachKind::ttcbf;
        row.lambda1 = t.lambda1;
        row.gamma = t.gamma;
    }
    return row;
}

std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec)
{
    const auto grid = expand_grid(spec);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (const auto& config : grid)
        rows.push_back(summarize_run(config, run_simulation(config)));
    return rows;
}

std::vector<SweepRow> run_sweep_parallel(const SweepSpec& spec, int jobs)
{
    const auto grid = expand_grid(spec);
    for (const auto& config : grid)
        config.validate();  // throw here, not inside the parallel region

    std::vector<SweepRow> rows(grid.size());
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        rows[idx] = summarize_run(grid[idx], run_simulation(grid[idx]));
    }
    return rows;
}

std::optional<std::string> sweep_feasibility_warning(const SweepSpec& spec)
{
    if (spec.kind != ApproachKind::hocbf)
        return std::nullopt;
    const auto l1 = spec.lambda1.values();
    const auto l2 = spec.lambda2.values();
    const auto stack = cbf_derivatives(spec.base.initial, spec.base.obstacle);
    const double h_init[] = {stack.h, stack.h_dot};
    const auto report = lambda_feasibility(LambdaVector{l1.front(), l2.front()}, h_init);
    if (report.feasible)
        return std::nullopt;

    std::ostringstream msg;
    const auto& check = report.checks.front();
    msg << "warning: lambda1 = " << check.lambda << " is " << to_string(check.status)
        << " for the initial-state condition lambda1 >= -h_dot/h";
    if (check.status == FeasibilityStatus::violated)
        msg << " = " << check.bound;
    return msg.str();
}

}  // namespace cbf
