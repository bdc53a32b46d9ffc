#include "cbf/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace cbf {

namespace {

void require_distinct(const LambdaVector& lambdas)
{
    const auto v = lambdas.values();
    const double scale = *std::max_element(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            if (std::abs(v[i] - v[j]) / scale <= kRateSeparationTolerance) {
                std::ostringstream msg;
                msg << "degenerate rates: lambda_" << i + 1 << " = " << v[i] << " and lambda_"
                    << j + 1 << " = " << v[j] << " are not distinct";
                throw DegenerateRatesError(msg.str());
            }
        }
    }
}

void require_not_before(const ExponentialSumBound& bound, double t)
{
    if (t < bound.t0)
        throw std::invalid_argument("bound evaluated before its anchor time");
}

}  // namespace

Eigen::MatrixXd vandermonde_matrix(const LambdaVector& lambdas)
{
    const auto r = static_cast<Eigen::Index>(lambdas.size());
    Eigen::MatrixXd m(r, r);
    for (Eigen::Index q = 0; q < r; ++q) {
        double entry = 1.0;
        for (Eigen::Index p = 0; p < r; ++p) {
            m(p, q) = entry;
            entry *= -lambdas[static_cast<std::size_t>(q)];
        }
    }
    return m;
}

ExponentialSumBound solve_bound_coefficients(const LambdaVector& lambdas,
                                             const InitialConditionVector& init)
{
    if (init.values.size() != lambdas.size())
        throw std::invalid_argument("initial conditions have " +
                                    std::to_string(init.values.size()) +
                                    " entries but relative degree is " +
                                    std::to_string(lambdas.size()));
    require_distinct(lambdas);

    const Eigen::MatrixXd m = vandermonde_matrix(lambdas);
    const Eigen::Map<const Eigen::VectorXd> rhs(init.values.data(),
                                                static_cast<Eigen::Index>(init.values.size()));
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    Eigen::VectorXd c = lu.solve(rhs);
    // one step of iterative refinement
    c += lu.solve(rhs - m * c);

    const double residual = (m * c - rhs).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual) ||
        residual > 1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
        throw DegenerateRatesError("degenerate rates: Vandermonde solve residual " +
                                   std::to_string(residual) + " exceeds tolerance");
    }

    return ExponentialSumBound{std::vector<double>(c.data(), c.data() + c.size()), lambdas,
                               init.t0};
}

double eval_bound_ct(const ExponentialSumBound& bound, double t)
{
    return eval_bound_deriv_ct(bound, t, 0);
}

double eval_bound_deriv_ct(const ExponentialSumBound& bound, double t, int j)
{
    require_not_before(bound, t);
    if (j < 0)
        throw std::invalid_argument("derivative order must be nonnegative");
    const double tau = t - bound.t0;
    double sum = 0.0;
    for (std::size_t i = 0; i < bound.coefficients.size(); ++i) {
        const double rate = bound.rates[i];
        sum += bound.coefficients[i] * std::pow(-rate, j) * std::exp(-rate * tau);
    }
    return sum;
}

double ode_residual(const ExponentialSumBound& bound, double t)
{
    const auto flat = flatten_hocbf(bound.rates);
    double sum = 0.0;
    for (int j = 0; j <= flat.relative_degree; ++j)
        sum += flat.coefficients[static_cast<std::size_t>(j)] * eval_bound_deriv_ct(bound, t, j);
    return sum;
}

double eval_bound_dt(double lambda, double h_k0, long steps)
{
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("discrete decay parameter must lie in (0, 1]");
    if (steps < 0)
        throw std::invalid_argument("step count must be nonnegative");
    if (steps == 0)
        return h_k0;
    return std::pow(1.0 - lambda, static_cast<double>(steps)) * h_k0;
}

}  // namespace cbf
