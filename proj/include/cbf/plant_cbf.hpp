#pragma once

#include <vector>

#include <Eigen/Core>

#include "cbf/hocbf_algebra.hpp"

namespace cbf {

using Input = Eigen::Vector2d;  // (u_x, u_y), m/s^2

/// Planar double-integrator state.
struct RobotState {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;

    bool operator==(const RobotState&) const = default;
};

/// Static circular obstacle and the robot's own radius.
struct ObstacleSpec {
    double x_obs = 0.0;
    double y_obs = 0.0;
    double r_obs = 1.0;
    double r_robot = 1.0;
};

/// h, h' and the control-affine split of h'' = h_ddot_drift + h_ddot_input . u.
struct DerivativeStack {
    double h = 0.0;
    double h_dot = 0.0;
    double h_ddot_drift = 0.0;
    Input h_ddot_input = Input::Zero();
};

/// Derivatives of a relative-degree-r barrier: `lower` = [h, h', ..., h^(r-1)] (input free) and
/// h^(r) = top_drift + top_input . u.
struct HighOrderStack {
    std::vector<double> lower;
    double top_drift = 0.0;
    Input top_input = Input::Zero();

    [[nodiscard]] int relative_degree() const noexcept { return static_cast<int>(lower.size()); }
};

/// normal . u + offset >= 0
struct LinearInputConstraint {
    Input normal = Input::Zero();
    double offset = 0.0;

    [[nodiscard]] double evaluate(const Input& u) const { return normal.dot(u) + offset; }
};

/// Squared-distance barrier (x - x_obs)^2 + (y - y_obs)^2 - (r_robot + r_obs)^2.
[[nodiscard]] double cbf_value(const RobotState& state, const ObstacleSpec& obs);

[[nodiscard]] DerivativeStack cbf_derivatives(const RobotState& state, const ObstacleSpec& obs);

[[nodiscard]] HighOrderStack to_high_order(const DerivativeStack& stack);

/// sum_j e_{r-j}(lambda) h^(j) >= 0 for a general relative degree. Only h^(r) carries the input.
/// Throws std::invalid_argument when the stack degree differs from lambdas.size().
[[nodiscard]] LinearInputConstraint assemble_hocbf_constraint(const HighOrderStack& stack,
                                                              const LambdaVector& lambdas);

/// sum_{j=1..r} dt^j / j! h^(j) + lambda1 h >= gamma dt^(r+1) for a general relative degree.
[[nodiscard]] LinearInputConstraint assemble_ttcbf_constraint(const HighOrderStack& stack,
                                                              double lambda1, double gamma,
                                                              double dt);

/// HOCBF constraint for the double-integrator barrier; `lambdas` must have two entries.
[[nodiscard]] LinearInputConstraint hocbf_constraint(const DerivativeStack& stack,
                                                     const LambdaVector& lambdas);

/// Truncated-Taylor constraint for the double-integrator barrier. Requires lambda1 in (0, 1],
/// gamma >= 0, dt > 0 and r == 2 (the degree of `stack`).
[[nodiscard]] LinearInputConstraint ttcbf_constraint(const DerivativeStack& stack, double lambda1,
                                                     double gamma, double dt, int r = 2);

/// h_{k+1} - [h_k - lambda1 h_k + (gamma - bound_gamma_r1 / (r+1)!) dt^(r+1)].
/// Nonnegative whenever the remainder of the truncated expansion is bounded by bound_gamma_r1.
[[nodiscard]] double taylor_truncation_slack(double h_k, double h_k1, double lambda1, double gamma,
                                             double bound_gamma_r1, double dt, int r);

}  // namespace cbf
