#include "cbf/qp_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <Eigen/LU>

namespace cbf {

namespace {

constexpr double kMultiplierTolerance = -1e-10;

struct Candidate {
    Input u;
    std::vector<std::size_t> working;
    std::vector<double> multipliers;  // parallel to `working`
};

double feasibility_tolerance(const LinearInputConstraint& c, const Input& u)
{
    const double scale = c.normal.cwiseAbs().dot(u.cwiseAbs()) + std::abs(c.offset);
    return 1e-9 + 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

bool primal_feasible(const QpProblem& p, const Input& u)
{
    for (const auto& ineq : p.inequalities) {
        if (ineq.constraint.evaluate(u) < -feasibility_tolerance(ineq.constraint, u))
            return false;
    }
    return true;
}

Input gradient(const QpProblem& p, const Input& u)
{
    return p.curvature.cwiseProduct(u) + p.linear;
}

std::optional<Candidate> solve_working_set(const QpProblem& p, std::vector<std::size_t> working)
{
    const Input hinv = p.curvature.cwiseInverse();
    Candidate cand;
    cand.working = std::move(working);

    switch (cand.working.size()) {
    case 0:
        cand.u = p.unconstrained_minimizer();
        break;
    case 1: {
        // H u + g = mu a,  a.u + b = 0
        const auto& c = p.inequalities[cand.working[0]].constraint;
        const double curv = c.normal.dot(hinv.cwiseProduct(c.normal));
        if (!(curv > 0.0))
            return std::nullopt;
        const double mu = (c.normal.dot(hinv.cwiseProduct(p.linear)) - c.offset) / curv;
        cand.u = hinv.cwiseProduct(mu * c.normal - p.linear);
        cand.multipliers = {mu};
        break;
    }
    case 2: {
        const auto& c0 = p.inequalities[cand.working[0]].constraint;
        const auto& c1 = p.inequalities[cand.working[1]].constraint;
        Eigen::Matrix2d a;
        a.row(0) = c0.normal.transpose();
        a.row(1) = c1.normal.transpose();
        const double det = a.determinant();
        const double scale = c0.normal.norm() * c1.normal.norm();
        if (!(std::abs(det) > 1e-12 * scale))
            return std::nullopt;
        const Eigen::Vector2d b(c0.offset, c1.offset);
        cand.u = a.partialPivLu().solve(-b);
        // A^T mu = H u + g
        const Eigen::Vector2d mu = a.transpose().partialPivLu().solve(gradient(p, cand.u));
        cand.multipliers = {mu(0), mu(1)};
        break;
    }
    default:
        return std::nullopt;
    }

    if (!cand.u.allFinite())
        return std::nullopt;
    for (double mu : cand.multipliers) {
        if (mu < kMultiplierTolerance)
            return std::nullopt;
    }
    if (!primal_feasible(p, cand.u))
        return std::nullopt;
    return cand;
}

std::vector<std::string> sorted_labels(const QpProblem& p, const std::vector<std::size_t>& working)
{
    std::vector<std::string> labels;
    for (auto i : working)
        labels.push_back(p.inequalities[i].label);
    std::sort(labels.begin(), labels.end());
    return labels;
}

// Lower objective wins; near-equal objectives prefer the smaller working set, then the
// lexicographically smaller label list.
bool better(const QpProblem& p, const Candidate& lhs, double lhs_obj, const Candidate& rhs,
            double rhs_obj)
{
    const double tol = 1e-12 * (1.0 + std::max(std::abs(lhs_obj), std::abs(rhs_obj)));
    if (lhs_obj < rhs_obj - tol)
        return true;
    if (lhs_obj > rhs_obj + tol)
        return false;
    if (lhs.working.size() != rhs.working.size())
        return lhs.working.size() < rhs.working.size();
    return sorted_labels(p, lhs.working) < sorted_labels(p, rhs.working);
}

}  // namespace

double QpProblem::objective(const Input& u) const
{
    return 0.5 * u.dot(curvature.cwiseProduct(u)) + linear.dot(u) + constant;
}

Input QpProblem::unconstrained_minimizer() const
{
    return -linear.cwiseQuotient(curvature);
}

const char* to_string(QpStatus status) noexcept
{
    return status == QpStatus::optimal ? "optimal" : "infeasible";
}

bool QpSolution::is_active(const std::string& label) const
{
    return std::find(active_set.begin(), active_set.end(), label) != active_set.end();
}

QpProblem build_qp(const RobotState& state, const References& refs, const Penalties& penalties,
                   double dt, const LinearInputConstraint& cbf, const InputBounds& bounds)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("sampling period must be positive");
    if (penalties.p_vx < 0.0 || penalties.p_vy < 0.0 || penalties.p_y < 0.0)
        throw std::invalid_argument("penalties must be nonnegative");

    // p_vx (vx + dt ux - vx_ref)^2
    const double ex = state.vx - refs.vx_ref;
    // p_vy (vy + dt uy - vy_ref)^2 + p_y (y + dt vy + dt^2/2 uy - y_ref)^2
    const double evy = state.vy - refs.vy_ref;
    const double ey = state.y + dt * state.vy - refs.y_ref;
    const double half_dt2 = 0.5 * dt * dt;

    QpProblem p;
    p.curvature = Input(2.0 * penalties.p_vx * dt * dt,
                        2.0 * (penalties.p_vy * dt * dt + penalties.p_y * half_dt2 * half_dt2));
    if (!(p.curvature.x() > 0.0) || !(p.curvature.y() > 0.0))
        throw std::invalid_argument("objective is not strictly convex in both inputs");
    p.linear = Input(2.0 * penalties.p_vx * dt * ex,
                     2.0 * (penalties.p_vy * dt * evy + penalties.p_y * half_dt2 * ey));
    p.constant = penalties.p_vx * ex * ex + penalties.p_vy * evy * evy + penalties.p_y * ey * ey;

    p.inequalities.reserve(5);
    p.inequalities.push_back({kCbfLabel, cbf});
    p.inequalities.push_back({"ux_min", {Input(1.0, 0.0), -bounds.lower.x()}});
    p.inequalities.push_back({"ux_max", {Input(-1.0, 0.0), bounds.upper.x()}});
    p.inequalities.push_back({"uy_min", {Input(0.0, 1.0), -bounds.lower.y()}});
    p.inequalities.push_back({"uy_max", {Input(0.0, -1.0), bounds.upper.y()}});
    return p;
}

QpSolution solve_qp(const QpProblem& problem)
{
    if (!(problem.curvature.x() > 0.0) || !(problem.curvature.y() > 0.0))
        throw std::invalid_argument("solve_qp requires a strictly convex objective");

    const std::size_t m = problem.inequalities.size();
    std::optional<Candidate> best;
    double best_obj = std::numeric_limits<double>::infinity();

    auto consider = [&](std::vector<std::size_t> working) {
        auto cand = solve_working_set(problem, std::move(working));
        if (!cand)
            return;
        const double obj = problem.objective(cand->u);
        if (!best || better(problem, *cand, obj, *best, best_obj)) {
            best = std::move(cand);
            best_obj = obj;
        }
    };

    consider({});
    for (std::size_t i = 0; i < m; ++i)
        consider({i});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            consider({i, j});

    QpSolution sol;
    sol.multipliers.assign(m, 0.0);
    if (!best) {
        sol.status = QpStatus::infeasible;
        sol.u = problem.unconstrained_minimizer();
        sol.objective_value = problem.objective(sol.u);
        return sol;
    }

    sol.status = QpStatus::optimal;
    sol.u = best->u;
    sol.objective_value = best_obj;
    for (std::size_t k = 0; k < best->working.size(); ++k)
        sol.multipliers[best->working[k]] = std::max(0.0, best->multipliers[k]);

    Input stationarity = gradient(problem, sol.u);
    for (std::size_t i = 0; i < m; ++i) {
        stationarity -= sol.multipliers[i] * problem.inequalities[i].constraint.normal;
        if (sol.multipliers[i] > 0.0 ||
            std::find(best->working.begin(), best->working.end(), i) != best->working.end())
            sol.active_set.push_back(problem.inequalities[i].label);
    }
    sol.kkt_residual = stationarity.norm();
    return sol;
}

}  // namespace cbf
