#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cbf {

/// Ordered positive parameters of the linear class-K functions alpha_i(z) = lambda_i * z.
/// The length is the relative degree r of the constraint.
class LambdaVector {
public:
    /// Throws std::invalid_argument when empty or when any entry is not strictly positive.
    explicit LambdaVector(std::vector<double> values);
    LambdaVector(std::initializer_list<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] int relative_degree() const noexcept { return static_cast<int>(values_.size()); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    /// The first `count` parameters, lambda_1..lambda_count.
    [[nodiscard]] LambdaVector prefix(std::size_t count) const;

    bool operator==(const LambdaVector&) const = default;

private:
    std::vector<double> values_;
};

/// Coefficients of the flattened HOCBF condition sum_j coefficients[j] * h^(j) >= 0.
struct FlattenedCondition {
    std::vector<double> coefficients;  // r + 1 entries, coefficients[r] == 1
    int relative_degree = 0;
};

/// All elementary symmetric polynomials e_0..e_m of `values` (m = values.size()),
/// built with the running-product recurrence e_k <- e_k + v * e_{k-1}.
[[nodiscard]] std::vector<double> elementary_symmetric_all(std::span<const double> values);

/// e_k(lambda_1..lambda_r). Returns 1 for k == 0 and 0 for k < 0 or k > r.
[[nodiscard]] double elem_sym_poly(const LambdaVector& lambdas, int k);

/// coefficients[j] = e_{r-j}(lambda_1..lambda_r), j = 0..r.
[[nodiscard]] FlattenedCondition flatten_hocbf(const LambdaVector& lambdas);

/// Coefficient vector of the auxiliary function Psi_i over (h, h', ..., h^(i)), obtained by
/// unrolling Psi_i = d/dt Psi_{i-1} + lambda_i Psi_{i-1} one level at a time. Deliberately does
/// not go through elementary_symmetric_all so it can serve as a cross-check of flatten_hocbf.
/// Throws std::out_of_range unless 1 <= i <= r.
[[nodiscard]] std::vector<double> psi_chain_coefficients(const LambdaVector& lambdas, int i);

enum class FeasibilityStatus { satisfied, violated, inapplicable };

[[nodiscard]] const char* to_string(FeasibilityStatus status) noexcept;

/// One lambda_i >= -h^(i) / h^(i-1) check, i in 1..r-1.
struct FeasibilityCheck {
    int index = 0;            // i (1-based)
    double lambda = 0.0;      // lambda_i
    double bound = 0.0;       // -h^(i) / h^(i-1); NaN when inapplicable
    FeasibilityStatus status = FeasibilityStatus::inapplicable;
};

struct FeasibilityReport {
    std::vector<FeasibilityCheck> checks;
    bool last_positive = false;  // lambda_r > 0
    bool any_inapplicable = false;
    /// True only when every check is satisfied. An inapplicable check (h^(i-1) <= 0) means the
    /// sufficient condition cannot certify the parameters, so the verdict is false.
    bool feasible = false;
};

/// Sufficient conditions on lambda for nonnegative initial auxiliary functions Psi_0..Psi_{r-1}.
/// `h_init` holds [h, h', ..., h^(r-1)] at the initial state.
/// Throws std::invalid_argument on a length mismatch.
[[nodiscard]] FeasibilityReport lambda_feasibility(const LambdaVector& lambdas,
                                                   std::span<const double> h_init);

}  // namespace cbf
