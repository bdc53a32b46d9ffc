#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cbf/simulation.hpp"

namespace cbf {

/// Closed grid min, min + step, ..., up to max (inclusive within 1e-9 steps).
struct GridRange {
    double min = 0.0;
    double max = 0.0;
    double step = 0.1;

    /// Throws std::invalid_argument for step <= 0 or max < min.
    [[nodiscard]] std::vector<double> values() const;
};

enum class ApproachKind { hocbf, ttcbf };

struct SweepSpec {
    SimConfig base;  // approach parameters in `base` are overwritten per grid point
    ApproachKind kind = ApproachKind::ttcbf;
    GridRange lambda1{0.01, 0.50, 0.01};
    GridRange lambda2{0.5, 10.0, 0.1};  // hocbf only

    [[nodiscard]] static SweepSpec hocbf_default();
    [[nodiscard]] static SweepSpec ttcbf_default();
};

struct SweepRow {
    ApproachKind kind = ApproachKind::ttcbf;
    double lambda1 = 0.0;
    std::optional<double> lambda2;  // hocbf
    std::optional<double> gamma;    // ttcbf
    SimSummary summary;
};

/// Grid points in lexicographic (lambda1, lambda2) order.
[[nodiscard]] std::vector<SimConfig> expand_grid(const SweepSpec& spec);

[[nodiscard]] SweepRow summarize_run(const SimConfig& config, const SimLog& log);

/// Reference implementation: one run after another.
[[nodiscard]] std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec);

/// OpenMP across grid points; rows land at their grid index, so the output is identical to
/// run_sweep_serial. jobs <= 0 uses the OpenMP default thread count.
[[nodiscard]] std::vector<SweepRow> run_sweep_parallel(const SweepSpec& spec, int jobs = 0);

/// Sufficient-condition feasibility of the smallest hocbf lambda1 at the base initial state. Empty for
/// ttcbf sweeps; otherwise a human-readable warning when the sufficient condition fails.
[[nodiscard]] std::optional<std::string> sweep_feasibility_warning(const SweepSpec& spec);

}  // namespace cbf
