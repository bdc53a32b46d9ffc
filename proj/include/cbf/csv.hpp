#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cbf/lower_bounds.hpp"
#include "cbf/simulation.hpp"
#include "cbf/sweep.hpp"

namespace cbf {

/// Shortest decimal that parses back to exactly `value`.
[[nodiscard]] std::string format_double(double value);

/// Parses a full-string decimal; throws std::invalid_argument otherwise.
[[nodiscard]] double parse_double(std::string_view text);

[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);

inline constexpr const char* kStepCsvHeader =
    "step,t,x,y,vx,vy,ux,uy,h,h_dot,constraint_offset,active_set,status,ttcbf_slack";

inline constexpr const char* kSweepCsvHeader =
    "approach,lambda1,lambda2,gamma,mean_x_speed,min_h,bypass,infeasible_steps";

/// One row per step; active-set labels joined with '|'; ttcbf_slack empty for hocbf runs.
void write_step_csv(std::ostream& out, const SimLog& log);

/// Reads back the per-step records written by write_step_csv. The result has no final state.
[[nodiscard]] SimLog read_step_csv(std::istream& in);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// `# rate,coefficient` comment block followed by a `t,h_lb` table.
void write_lower_bound_csv(std::ostream& out, const ExponentialSumBound& bound,
                           const std::vector<double>& times);

[[nodiscard]] std::string summary_line(const SimSummary& summary, std::size_t steps);

}  // namespace cbf
