#include "cbf/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbf/lower_bounds.hpp"

namespace cbf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require(bool ok, const char* what)
{
    if (!ok)
        throw std::invalid_argument(what);
}

bool finite(const RobotState& s)
{
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.vx) && std::isfinite(s.vy);
}

}  // namespace

const char* approach_name(const Approach& approach) noexcept
{
    return std::holds_alternative<HocbfApproach>(approach) ? "hocbf" : "ttcbf";
}

void SimConfig::validate() const
{
    require(obstacle.r_obs > 0.0, "obs_radius must be positive");
    require(obstacle.r_robot > 0.0, "robot_radius must be positive");
    require(std::isfinite(obstacle.x_obs) && std::isfinite(obstacle.y_obs),
            "obs_x and obs_y must be finite");
    require(finite(initial), "init_x, init_y, init_vx and init_vy must be finite");
    require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
    require(duration >= 0.0 && std::isfinite(duration), "duration must be nonnegative");
    require(u_min < u_max, "u_min must be below u_max");
    require(penalties.p_vx > 0.0, "p_vx must be positive");
    require(penalties.p_vy >= 0.0 && penalties.p_y >= 0.0, "p_vy and p_y must be nonnegative");
    require(penalties.p_vy > 0.0 || penalties.p_y > 0.0,
            "p_vy or p_y must be positive for a strictly convex objective");
    std::visit(overloaded{
                   [](const HocbfApproach& a) {
                       require(a.lambda1 > 0.0 && a.lambda2 > 0.0,
                               "lambda1 and lambda2 must be positive for hocbf");
                   },
                   [](const TtcbfApproach& a) {
                       require(a.lambda1 > 0.0 && a.lambda1 <= 1.0,
                               "lambda1 must lie in (0, 1] for ttcbf");
                       require(a.gamma >= 0.0, "gamma must be nonnegative");
                       require(a.bound_gamma_r1 >= 0.0, "bound_gamma_r1 must be nonnegative");
                   },
               },
               approach);
}

std::size_t SimConfig::step_count() const
{
    // tolerance keeps e.g. 2.0 / 0.01 from flooring to 199
    return static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
}

InputBounds SimConfig::bounds() const
{
    return InputBounds{Input::Constant(u_min), Input::Constant(u_max)};
}

RobotState step_dynamics(const RobotState& state, const Input& u, double dt)
{
    const double half_dt2 = 0.5 * dt * dt;
    return RobotState{state.x + dt * state.vx + half_dt2 * u.x(),
                      state.y + dt * state.vy + half_dt2 * u.y(), state.vx + dt * u.x(),
                      state.vy + dt * u.y()};
}

SimSummary summarize(const std::vector<StepRecord>& steps, const RobotState& final_state,
                     double final_h, const ObstacleSpec& obstacle)
{
    SimSummary s;
    s.min_h = final_h;
    double vx_sum = 0.0;
    for (const auto& rec : steps) {
        vx_sum += rec.state.vx;
        s.min_h = std::min(s.min_h, rec.h);
        if (rec.status == QpStatus::infeasible) {
            if (!s.first_infeasible_step)
                s.first_infeasible_step = rec.step;
            ++s.infeasible_steps;
        }
    }
    s.mean_x_speed = steps.empty() ? 0.0 : vx_sum / static_cast<double>(steps.size());
    s.bypass = final_state.x > obstacle.x_obs + obstacle.r_robot + obstacle.r_obs;
    return s;
}

SimLog run_simulation(const SimConfig& config)
{
    config.validate();
    const std::size_t n = config.step_count();
    const InputBounds bounds = config.bounds();

    SimLog log;
    log.steps.reserve(n);
    RobotState state = config.initial;

    for (std::size_t k = 0; k < n; ++k) {
        const DerivativeStack stack = cbf_derivatives(state, config.obstacle);
        const LinearInputConstraint constraint = std::visit(
            overloaded{
                [&](const HocbfApproach& a) { return hocbf_constraint(stack, a.lambdas()); },
                [&](const TtcbfApproach& a) {
                    return ttcbf_constraint(stack, a.lambda1, a.gamma, config.dt);
                },
            },
            config.approach);

        const QpProblem qp =
            build_qp(state, config.refs, config.penalties, config.dt, constraint, bounds);
        const QpSolution sol = solve_qp(qp);

        StepRecord rec;
        rec.step = k;
        rec.t = static_cast<double>(k) * config.dt;
        rec.state = state;
        rec.h = stack.h;
        rec.h_dot = stack.h_dot;
        rec.constraint_offset = constraint.offset;
        rec.status = sol.status;
        rec.active_set = sol.active_set;
        rec.u = sol.status == QpStatus::optimal ? sol.u : bounds.clamp(qp.unconstrained_minimizer());

        state = step_dynamics(state, rec.u, config.dt);

        if (const auto* tt = std::get_if<TtcbfApproach>(&config.approach)) {
            rec.ttcbf_slack = taylor_truncation_slack(rec.h, cbf_value(state, config.obstacle),
                                                      tt->lambda1, tt->gamma, tt->bound_gamma_r1,
                                                      config.dt, 2);
        }
        log.steps.push_back(std::move(rec));
    }

    log.final_state = state;
    log.final_h = cbf_value(state, config.obstacle);
    log.summary = summarize(log.steps, state, *log.final_h, config.obstacle);
    return log;
}

std::vector<double> h_trajectory(const SimLog& log)
{
    std::vector<double> h;
    h.reserve(log.steps.size() + 1);
    for (const auto& rec : log.steps)
        h.push_back(rec.h);
    if (log.final_h)
        h.push_back(*log.final_h);
    return h;
}

DominanceReport verify_dominance_hocbf(const SimLog& log, const LambdaVector& lambdas,
                                       AnchorMode anchor)
{
    if (lambdas.size() != 2)
        throw std::invalid_argument("dominance check needs the two hocbf lambdas");

    DominanceReport report;
    if (log.steps.empty()) {
        // nothing to compare against; the bound holds vacuously
        report.never_active = anchor == AnchorMode::activation;
        report.pass = true;
        return report;
    }

    std::size_t k0 = 0;
    if (anchor == AnchorMode::activation) {
        const auto it = std::find_if(log.steps.begin(), log.steps.end(),
                                     [](const StepRecord& r) { return r.status == QpStatus::optimal &&
                                                                     std::find(r.active_set.begin(), r.active_set.end(),
                                                                               kCbfLabel) != r.active_set.end(); });
        if (it == log.steps.end()) {
            report.never_active = true;
            report.pass = true;
            return report;
        }
        k0 = static_cast<std::size_t>(it - log.steps.begin());
    }

    const StepRecord& a = log.steps[k0];
    const auto bound = solve_bound_coefficients(lambdas, {{a.h, a.h_dot}, a.t});
    report.anchor_step = k0;
    report.anchor_time = a.t;
    report.coefficients = bound.coefficients;
    report.tolerance = 1e-3 * std::abs(a.h);
    report.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = k0; k < log.steps.size(); ++k) {
        const double margin = log.steps[k].h - eval_bound_ct(bound, log.steps[k].t);
        if (margin < report.min_margin) {
            report.min_margin = margin;
            report.worst_step = k;
        }
    }
    report.pass = report.min_margin >= -report.tolerance;
    return report;
}

DecayReport verify_decay_ttcbf(const std::vector<double>& h, double lambda1)
{
    if (!(lambda1 > 0.0 && lambda1 <= 1.0))
        throw std::invalid_argument("ttcbf lambda1 must lie in (0, 1]");
    const double keep = 1.0 - lambda1;
    auto step_tol = [](double hk) { return 1e-6 * std::max(1.0, std::abs(hk)); };

    DecayReport report;
    report.worst_step_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
        const double margin = h[k + 1] - keep * h[k];
        report.worst_step_margin = std::min(report.worst_step_margin, margin);
        if (margin < -step_tol(h[k]) && !report.first_violation) {
            report.first_violation = k;
            report.per_step_pass = false;
        }
    }
    if (h.size() < 2)
        report.worst_step_margin = 0.0;

    for (std::size_t k0 = 0; k0 < h.size(); ++k0) {
        double bound = h[k0];
        double tol = 0.0;
        for (std::size_t k = k0 + 1; k < h.size(); ++k) {
            bound *= keep;
            tol = keep * tol + step_tol(h[k - 1]);
            if (h[k] < bound - tol) {
                if (!report.first_cumulative_violation || k < *report.first_cumulative_violation)
                    report.first_cumulative_violation = k;
                report.cumulative_pass = false;
                break;
            }
        }
    }
    return report;
}

DecayReport verify_decay_ttcbf(const SimLog& log, double lambda1)
{
    return verify_decay_ttcbf(h_trajectory(log), lambda1);
}

}  // namespace cbf
