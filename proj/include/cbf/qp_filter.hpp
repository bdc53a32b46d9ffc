#pragma once

#include <string>
#include <vector>

#include "cbf/plant_cbf.hpp"

namespace cbf {

struct References {
    double vx_ref = 10.0;
    double vy_ref = 0.0;
    double y_ref = 0.0;
};

struct Penalties {
    double p_vx = 1.0;
    double p_vy = 1.0;
    double p_y = 1000.0;
};

struct InputBounds {
    Input lower = Input::Constant(-1000.0);
    Input upper = Input::Constant(1000.0);

    [[nodiscard]] Input clamp(const Input& u) const { return u.cwiseMax(lower).cwiseMin(upper); }
};

struct LabeledConstraint {
    std::string label;
    LinearInputConstraint constraint;
};

/// minimize 0.5 u^T diag(curvature) u + linear . u + constant
/// subject to every inequality normal . u + offset >= 0.
struct QpProblem {
    Input curvature = Input::Ones();  // Hessian diagonal, strictly positive
    Input linear = Input::Zero();
    double constant = 0.0;
    std::vector<LabeledConstraint> inequalities;

    [[nodiscard]] double objective(const Input& u) const;
    [[nodiscard]] Input unconstrained_minimizer() const;
};

enum class QpStatus { optimal, infeasible };

[[nodiscard]] const char* to_string(QpStatus status) noexcept;

struct QpSolution {
    Input u = Input::Zero();
    QpStatus status = QpStatus::infeasible;
    std::vector<std::string> active_set;  // labels, in inequality order
    std::vector<double> multipliers;      // one per inequality, zero when inactive
    double objective_value = 0.0;
    double kkt_residual = 0.0;            // |H u + g - sum mu_i a_i|_2

    [[nodiscard]] bool is_active(const std::string& label) const;
};

inline constexpr const char* kCbfLabel = "cbf";

/// Expands the squared prediction errors of next-step vx, vy and y under a zero-order hold into
/// a quadratic in (u_x, u_y), then appends the barrier constraint and the four box constraints
/// labelled "ux_min", "ux_max", "uy_min", "uy_max".
/// Throws std::invalid_argument when dt <= 0, a penalty is negative or the curvature on either
/// axis vanishes.
[[nodiscard]] QpProblem build_qp(const RobotState& state, const References& refs,
                                 const Penalties& penalties, double dt,
                                 const LinearInputConstraint& cbf, const InputBounds& bounds);

/// Exact active-set enumeration over all working sets of size <= 2.
/// Never throws on infeasibility; returns QpStatus::infeasible instead.
[[nodiscard]] QpSolution solve_qp(const QpProblem& problem);

}  // namespace cbf
