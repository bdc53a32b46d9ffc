#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cbf/hocbf_algebra.hpp"
#include "cbf/plant_cbf.hpp"
#include "cbf/qp_filter.hpp"

namespace cbf {

struct HocbfApproach {
    double lambda1 = 10.0;
    double lambda2 = 0.5;

    [[nodiscard]] LambdaVector lambdas() const { return LambdaVector{lambda1, lambda2}; }
};

struct TtcbfApproach {
    double lambda1 = 0.5;
    double gamma = 0.0;
    double bound_gamma_r1 = 0.0;  // assumed bound on |h'''|, diagnostic only
};

using Approach = std::variant<HocbfApproach, TtcbfApproach>;

[[nodiscard]] const char* approach_name(const Approach& approach) noexcept;

/// Defaults reproduce the collision-avoidance experiment parameters.
struct SimConfig {
    ObstacleSpec obstacle{0.0, -3.1, 2.0, 1.0};
    RobotState initial{-10.0, 0.0, 10.0, 0.0};
    References refs{};
    Penalties penalties{};
    double dt = 0.01;
    double duration = 2.0;
    Approach approach = TtcbfApproach{};
    double u_min = -1000.0;
    double u_max = 1000.0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
    [[nodiscard]] std::size_t step_count() const;
    [[nodiscard]] InputBounds bounds() const;
};

struct StepRecord {
    std::size_t step = 0;
    double t = 0.0;
    RobotState state;  // state at the start of the step
    Input u = Input::Zero();
    double h = 0.0;
    double h_dot = 0.0;
    double constraint_offset = 0.0;
    std::vector<std::string> active_set;
    QpStatus status = QpStatus::optimal;
    std::optional<double> ttcbf_slack;  // set for ttcbf runs only
};

struct SimSummary {
    double mean_x_speed = 0.0;      // mean of per-step vx; 0 for an empty run
    double min_h = 0.0;             // over every logged step and the final state
    bool bypass = false;            // final x > x_obs + r_robot + r_obs
    std::size_t infeasible_steps = 0;
    std::optional<std::size_t> first_infeasible_step;
};

struct SimLog {
    std::vector<StepRecord> steps;
    // Unset for logs read back from a per-step CSV, which carries no final row.
    std::optional<RobotState> final_state;
    std::optional<double> final_h;
    SimSummary summary;
};

/// Exact zero-order-hold update of the planar double integrator.
[[nodiscard]] RobotState step_dynamics(const RobotState& state, const Input& u, double dt);

/// Runs the filtered closed loop. On an infeasible QP the box-clamped unconstrained minimizer is
/// applied and the step is counted in the summary.
[[nodiscard]] SimLog run_simulation(const SimConfig& config);

/// Recomputes the summary from the per-step records and the final state.
[[nodiscard]] SimSummary summarize(const std::vector<StepRecord>& steps,
                                   const RobotState& final_state, double final_h,
                                   const ObstacleSpec& obstacle);

enum class AnchorMode { start, activation };

struct DominanceReport {
    bool never_active = false;
    std::size_t anchor_step = 0;
    double anchor_time = 0.0;
    std::vector<double> coefficients;
    double min_margin = 0.0;  // min_k h(t_k) - h_lb(t_k), k >= anchor
    std::size_t worst_step = 0;
    double tolerance = 0.0;   // 1e-3 * h(anchor)
    bool pass = false;        // vacuously true when there is nothing to check
};

/// Checks the logged h against the exponential-sum bound anchored at the start of the run or
/// at the first step where the barrier constraint is active. Needs two lambdas.
[[nodiscard]] DominanceReport verify_dominance_hocbf(const SimLog& log,
                                                     const LambdaVector& lambdas,
                                                     AnchorMode anchor);

struct DecayReport {
    bool per_step_pass = true;
    bool cumulative_pass = true;
    std::optional<std::size_t> first_violation;             // k with h_{k+1} below the bound
    std::optional<std::size_t> first_cumulative_violation;  // k with h_k below some anchor's bound
    double worst_step_margin = 0.0;  // min_k h_{k+1} - (1 - lambda1) h_k

    [[nodiscard]] bool pass() const { return per_step_pass && cumulative_pass; }
};

/// Per-step h_{k+1} >= (1 - lambda1) h_k - 1e-6 max(1, |h_k|), and the geometric bound
/// h_k >= (1 - lambda1)^(k - k0) h_k0 from every anchor k0 with the per-step tolerances
/// propagated through the recursion.
[[nodiscard]] DecayReport verify_decay_ttcbf(const std::vector<double>& h, double lambda1);
[[nodiscard]] DecayReport verify_decay_ttcbf(const SimLog& log, double lambda1);

/// h at every logged step followed by the final state.
[[nodiscard]] std::vector<double> h_trajectory(const SimLog& log);

}  // namespace cbf
