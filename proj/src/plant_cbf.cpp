#include "cbf/plant_cbf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cbf {

namespace {

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

void check_ttcbf_parameters(double lambda1, double gamma, double dt)
{
    if (!(lambda1 > 0.0 && lambda1 <= 1.0))
        throw std::invalid_argument("ttcbf lambda1 must lie in (0, 1]");
    if (!(gamma >= 0.0))
        throw std::invalid_argument("ttcbf gamma must be nonnegative");
    if (!(dt > 0.0))
        throw std::invalid_argument("sampling period must be positive");
}

}  // namespace

double cbf_value(const RobotState& state, const ObstacleSpec& obs)
{
    const double dx = state.x - obs.x_obs;
    const double dy = state.y - obs.y_obs;
    const double r_sum = obs.r_robot + obs.r_obs;
    return dx * dx + dy * dy - r_sum * r_sum;
}

DerivativeStack cbf_derivatives(const RobotState& state, const ObstacleSpec& obs)
{
    const double dx = state.x - obs.x_obs;
    const double dy = state.y - obs.y_obs;
    DerivativeStack s;
    s.h = cbf_value(state, obs);
    s.h_dot = 2.0 * dx * state.vx + 2.0 * dy * state.vy;
    s.h_ddot_drift = 2.0 * (state.vx * state.vx + state.vy * state.vy);
    s.h_ddot_input = Input(2.0 * dx, 2.0 * dy);
    return s;
}

HighOrderStack to_high_order(const DerivativeStack& stack)
{
    return HighOrderStack{{stack.h, stack.h_dot}, stack.h_ddot_drift, stack.h_ddot_input};
}

LinearInputConstraint assemble_hocbf_constraint(const HighOrderStack& stack,
                                                const LambdaVector& lambdas)
{
    if (stack.relative_degree() != lambdas.relative_degree())
        throw std::invalid_argument("hocbf needs " + std::to_string(stack.relative_degree()) +
                                    " lambdas, got " + std::to_string(lambdas.size()));
    const auto flat = flatten_hocbf(lambdas);
    const auto r = static_cast<std::size_t>(flat.relative_degree);

    LinearInputConstraint c;
    c.normal = flat.coefficients[r] * stack.top_input;
    c.offset = flat.coefficients[r] * stack.top_drift;
    for (std::size_t j = 0; j < r; ++j)
        c.offset += flat.coefficients[j] * stack.lower[j];
    return c;
}

LinearInputConstraint assemble_ttcbf_constraint(const HighOrderStack& stack, double lambda1,
                                                double gamma, double dt)
{
    check_ttcbf_parameters(lambda1, gamma, dt);
    const int r = stack.relative_degree();
    if (r < 1)
        throw std::invalid_argument("ttcbf needs relative degree >= 1");

    LinearInputConstraint c;
    c.offset = lambda1 * stack.lower[0];
    for (int j = 1; j < r; ++j)
        c.offset += std::pow(dt, j) / factorial(j) * stack.lower[static_cast<std::size_t>(j)];
    const double top_weight = std::pow(dt, r) / factorial(r);
    c.offset += top_weight * stack.top_drift;
    c.offset -= gamma * std::pow(dt, r + 1);
    c.normal = top_weight * stack.top_input;
    return c;
}

LinearInputConstraint hocbf_constraint(const DerivativeStack& stack, const LambdaVector& lambdas)
{
    if (lambdas.size() != 2)
        throw std::invalid_argument("double-integrator barrier has relative degree 2, got " +
                                    std::to_string(lambdas.size()) + " lambdas");
    return assemble_hocbf_constraint(to_high_order(stack), lambdas);
}

LinearInputConstraint ttcbf_constraint(const DerivativeStack& stack, double lambda1, double gamma,
                                       double dt, int r)
{
    if (r != 2)
        throw std::invalid_argument("double-integrator barrier has relative degree 2, got " +
                                    std::to_string(r));
    return assemble_ttcbf_constraint(to_high_order(stack), lambda1, gamma, dt);
}

double taylor_truncation_slack(double h_k, double h_k1, double lambda1, double gamma,
                               double bound_gamma_r1, double dt, int r)
{
    const double margin = (gamma - bound_gamma_r1 / factorial(r + 1)) * std::pow(dt, r + 1);
    return h_k1 - (h_k - lambda1 * h_k + margin);
}

}  // namespace cbf
