#include "cbf/hocbf_algebra.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cbf {

LambdaVector::LambdaVector(std::vector<double> values) : values_(std::move(values))
{
    if (values_.empty())
        throw std::invalid_argument("lambda vector must not be empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
            throw std::invalid_argument("lambda_" + std::to_string(i + 1) +
                                        " must be finite and strictly positive");
    }
}

LambdaVector::LambdaVector(std::initializer_list<double> values)
    : LambdaVector(std::vector<double>(values))
{
}

LambdaVector LambdaVector::prefix(std::size_t count) const
{
    if (count == 0 || count > values_.size())
        throw std::out_of_range("lambda prefix length out of range");
    return LambdaVector(std::vector<double>(values_.begin(), values_.begin() + count));
}

std::vector<double> elementary_symmetric_all(std::span<const double> values)
{
    std::vector<double> esp(values.size() + 1, 0.0);
    esp[0] = 1.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        // descending k so esp[k-1] still holds the value for the first i entries
        for (std::size_t k = i + 1; k >= 1; --k)
            esp[k] += values[i] * esp[k - 1];
    }
    return esp;
}

double elem_sym_poly(const LambdaVector& lambdas, int k)
{
    if (k < 0 || k > lambdas.relative_degree())
        return 0.0;
    if (k == 0)
        return 1.0;
    return elementary_symmetric_all(lambdas.values())[static_cast<std::size_t>(k)];
}

FlattenedCondition flatten_hocbf(const LambdaVector& lambdas)
{
    const int r = lambdas.relative_degree();
    const auto esp = elementary_symmetric_all(lambdas.values());
    FlattenedCondition out;
    out.relative_degree = r;
    out.coefficients.resize(static_cast<std::size_t>(r) + 1);
    for (int j = 0; j <= r; ++j)
        out.coefficients[static_cast<std::size_t>(j)] = esp[static_cast<std::size_t>(r - j)];
    return out;
}

std::vector<double> psi_chain_coefficients(const LambdaVector& lambdas, int i)
{
    if (i < 1 || i > lambdas.relative_degree())
        throw std::out_of_range("psi chain index " + std::to_string(i) + " outside 1.." +
                                std::to_string(lambdas.relative_degree()));

    std::vector<double> psi{1.0};  // Psi_0 = h
    for (int level = 1; level <= i; ++level) {
        const double lambda = lambdas[static_cast<std::size_t>(level - 1)];
        std::vector<double> next(psi.size() + 1, 0.0);
        for (std::size_t j = 0; j < psi.size(); ++j) {
            next[j + 1] += psi[j];         // time derivative shifts h^(j) -> h^(j+1)
            next[j] += lambda * psi[j];    // linear class-K term
        }
        psi = std::move(next);
    }
    return psi;
}

const char* to_string(FeasibilityStatus status) noexcept
{
    switch (status) {
    case FeasibilityStatus::satisfied: return "satisfied";
    case FeasibilityStatus::violated: return "violated";
    case FeasibilityStatus::inapplicable: return "inapplicable";
    }
    return "unknown";
}

FeasibilityReport lambda_feasibility(const LambdaVector& lambdas, std::span<const double> h_init)
{
    if (h_init.size() != lambdas.size())
        throw std::invalid_argument("h_init has " + std::to_string(h_init.size()) +
                                    " entries but relative degree is " +
                                    std::to_string(lambdas.size()));

    FeasibilityReport report;
    report.last_positive = lambdas[lambdas.size() - 1] > 0.0;
    bool all_ok = report.last_positive;

    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        FeasibilityCheck check;
        check.index = static_cast<int>(i);
        check.lambda = lambdas[i - 1];
        const double denom = h_init[i - 1];
        if (!(denom > 0.0)) {
            check.bound = std::numeric_limits<double>::quiet_NaN();
            check.status = FeasibilityStatus::inapplicable;
            report.any_inapplicable = true;
            all_ok = false;
        } else {
            check.bound = -h_init[i] / denom;
            check.status = check.lambda >= check.bound ? FeasibilityStatus::satisfied
                                                       : FeasibilityStatus::violated;
            all_ok = all_ok && check.status == FeasibilityStatus::satisfied;
        }
        report.checks.push_back(check);
    }
    report.feasible = all_ok;
    return report;
}

}  // namespace cbf
