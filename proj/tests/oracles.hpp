#pragma once

// Test-only reference computations. Nothing here calls into the library's algebra or solver.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "cbf/qp_filter.hpp"

namespace cbf::oracle {

/// e_k by summing the product over every size-k subset (bitmask enumeration).
inline double esp_by_subsets(std::span<const double> values, int k)
{
    if (k < 0 || k > static_cast<int>(values.size()))
        return 0.0;
    const std::uint32_t n = static_cast<std::uint32_t>(values.size());
    double sum = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k)
            continue;
        double prod = 1.0;
        for (std::uint32_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                prod *= values[i];
        sum += prod;
    }
    return sum;
}

/// Coefficients (ascending powers of s) of prod_i (s + lambda_i) by repeated multiplication.
inline std::vector<double> characteristic_polynomial(std::span<const double> lambdas)
{
    std::vector<double> poly{1.0};
    for (double lambda : lambdas) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] += lambda * poly[j];
            next[j + 1] += poly[j];
        }
        poly = std::move(next);
    }
    return poly;
}

/// Distinct positive rates with pairwise gaps of at least `min_gap`.
inline std::vector<double> separated_rates(std::mt19937_64& rng, int r, double lo, double hi,
                                           double min_gap)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    while (true) {
        std::vector<double> v(static_cast<std::size_t>(r));
        for (auto& x : v)
            x = dist(rng);
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        bool ok = true;
        for (std::size_t i = 1; i < sorted.size(); ++i)
            ok = ok && sorted[i] - sorted[i - 1] >= min_gap;
        if (ok)
            return v;
    }
}

struct GridOptimum {
    Input u = Input::Zero();
    double objective = std::numeric_limits<double>::infinity();
    bool found = false;
};

inline bool feasible_point(const QpProblem& p, const Input& u, double tol = 0.0)
{
    for (const auto& ineq : p.inequalities)
        if (ineq.constraint.normal.dot(u) + ineq.constraint.offset < -tol)
            return false;
    return true;
}

/// Dense grid over the box [lo, hi]^2, a ternary search along each clipped constraint line, then a
/// shrinking multi-direction pattern search restricted to feasible points.
inline GridOptimum brute_force_qp(const QpProblem& p, const Input& lo, const Input& hi,
                                  int grid = 400, int directions = 96)
{
    auto f = [&](const Input& u) {
        return 0.5 * (p.curvature.x() * u.x() * u.x() + p.curvature.y() * u.y() * u.y()) +
               p.linear.dot(u) + p.constant;
    };

    GridOptimum best;
    for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j <= grid; ++j) {
            const Input u(lo.x() + (hi.x() - lo.x()) * i / grid,
                          lo.y() + (hi.y() - lo.y()) * j / grid);
            if (!feasible_point(p, u))
                continue;
            const double v = f(u);
            if (v < best.objective) {
                best = {u, v, true};
            }
        }
    }
    if (!best.found)
        return best;

    // The optimum is interior or on an edge of the feasible polygon. Walk every constraint line:
    // clip it to the feasible segment, then ternary-search the convex 1-D restriction.
    for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
        const Input n = p.inequalities[i].constraint.normal;
        const double b = p.inequalities[i].constraint.offset;
        if (n.squaredNorm() == 0.0)
            continue;
        const Input base = -b * n / n.squaredNorm();
        const Input dir(-n.y(), n.x());
        double t_lo = -1e9, t_hi = 1e9;
        for (std::size_t j = 0; j < p.inequalities.size(); ++j) {
            if (j == i)
                continue;
            const double a = p.inequalities[j].constraint.normal.dot(dir);
            const double c = p.inequalities[j].constraint.evaluate(base);
            if (a > 0.0)
                t_lo = std::max(t_lo, -c / a);
            else if (a < 0.0)
                t_hi = std::min(t_hi, -c / a);
            else if (c < 0.0)
                t_hi = -1e300;
        }
        if (t_lo > t_hi)
            continue;
        double a = t_lo, z = t_hi;
        for (int it = 0; it < 300 && z - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
            const double m1 = a + (z - a) / 3.0, m2 = z - (z - a) / 3.0;
            if (f(base + m1 * dir) <= f(base + m2 * dir))
                z = m2;
            else
                a = m1;
        }
        const Input cand = base + 0.5 * (a + z) * dir;
        if (feasible_point(p, cand, 1e-9) && f(cand) < best.objective)
            best = {cand, f(cand), true};
    }

    double step = std::max(hi.x() - lo.x(), hi.y() - lo.y()) / grid;
    const double pi = std::acos(-1.0);
    while (step > 1e-13) {
        bool improved = false;
        for (int d = 0; d < directions; ++d) {
            const double angle = 2.0 * pi * d / directions;
            const Input cand = best.u + step * Input(std::cos(angle), std::sin(angle));
            if (!feasible_point(p, cand))
                continue;
            const double v = f(cand);
            if (v < best.objective) {
                best.u = cand;
                best.objective = v;
                improved = true;
            }
        }
        if (!improved)
            step *= 0.5;
    }
    return best;
}


/// Convex QP with a random barrier half-plane through the interior of a random box. The box rows
/// follow the barrier row in ux_min, ux_max, uy_min, uy_max order, so the problem is always feasible.
inline QpProblem random_box_qp(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> curv(0.5, 4.0);
    std::uniform_real_distribution<double> lin(-20.0, 20.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.5, 3.0);
    std::uniform_real_distribution<double> edge(3.0, 6.0);

    QpProblem p;
    p.curvature = Input(curv(rng), curv(rng));
    p.linear = Input(lin(rng), lin(rng));
    p.constant = lin(rng);
    const Input lo(-edge(rng), -edge(rng));
    const Input hi(edge(rng), edge(rng));

    // barrier half-plane through a random point of the box
    const double angle = 3.14159265358979 * unit(rng);
    const Input normal = scale(rng) * Input(std::cos(angle), std::sin(angle));
    const Input anchor(0.9 * (lo.x() + (hi.x() - lo.x()) * 0.5 * (1 + unit(rng))),
                       0.9 * (lo.y() + (hi.y() - lo.y()) * 0.5 * (1 + unit(rng))));
    p.inequalities.push_back({kCbfLabel, {normal, -normal.dot(anchor)}});
    p.inequalities.push_back({"ux_min", {Input(1.0, 0.0), -lo.x()}});
    p.inequalities.push_back({"ux_max", {Input(-1.0, 0.0), hi.x()}});
    p.inequalities.push_back({"uy_min", {Input(0.0, 1.0), -lo.y()}});
    p.inequalities.push_back({"uy_max", {Input(0.0, -1.0), hi.y()}});
    return p;
}

inline Input box_lower(const QpProblem& p)
{
    return Input(-p.inequalities[1].constraint.offset, -p.inequalities[3].constraint.offset);
}
inline Input box_upper(const QpProblem& p)
{
    return Input(p.inequalities[2].constraint.offset, p.inequalities[4].constraint.offset);
}

}  // namespace cbf::oracle
