#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cbf/hocbf_algebra.hpp"

namespace cbf {

/// Raised when the decay rates are too close for the exponential-sum bound to exist.
class DegenerateRatesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// [h, h', ..., h^(r-1)] at time t0.
struct InitialConditionVector {
    std::vector<double> values;
    double t0 = 0.0;
};

/// h_lb(t) = sum_i coefficients[i] * exp(-rates[i] * (t - t0)), t >= t0.
struct ExponentialSumBound {
    std::vector<double> coefficients;
    LambdaVector rates;
    double t0 = 0.0;
};

/// Minimum relative gap min|lambda_i - lambda_j| / max(lambda) accepted by the solver.
inline constexpr double kRateSeparationTolerance = 1e-9;

/// Entry (p, q) = (-lambda_{q+1})^p.
[[nodiscard]] Eigen::MatrixXd vandermonde_matrix(const LambdaVector& lambdas);

/// Solves vandermonde_matrix(lambdas) * c = init.values with partial pivoting.
/// Throws DegenerateRatesError for (near-)repeated rates and std::invalid_argument when the
/// initial-condition length differs from the relative degree.
[[nodiscard]] ExponentialSumBound solve_bound_coefficients(const LambdaVector& lambdas,
                                                           const InitialConditionVector& init);

/// Throws std::invalid_argument for t < t0.
[[nodiscard]] double eval_bound_ct(const ExponentialSumBound& bound, double t);

/// j-th time derivative of the bound: sum_i c_i (-lambda_i)^j exp(-lambda_i (t - t0)).
[[nodiscard]] double eval_bound_deriv_ct(const ExponentialSumBound& bound, double t, int j);

/// sum_j e_{r-j}(lambda) * h_lb^(j)(t); zero up to rounding.
[[nodiscard]] double ode_residual(const ExponentialSumBound& bound, double t);

/// (1 - lambda)^steps * h_k0. Throws std::invalid_argument unless 0 < lambda <= 1, steps >= 0.
[[nodiscard]] double eval_bound_dt(double lambda, double h_k0, long steps);

}  // namespace cbf
