#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "regret/finite_horizon.hpp"
#include "regret/meta_optimizer.hpp"
#include "regret/objectives.hpp"
#include "regret/penalty.hpp"
#include "regret/rates.hpp"
#include "regret/regret_core.hpp"

namespace regret::csv {

/// Shortest round-trip decimal form ("%.17g"); "nan"/"inf" for non-finite.
std::string format_double(double v);

/// t, x_0..x_{d−1}, f_value, step_penalty, cumulative_regret, residual.
/// The residual column is blank at t = 0 and t = T (and for T < 2);
/// cumulative_regret is blank when f* is unknown.
void write_trajectory(std::ostream& os, const Trajectory& traj, const Objective& f,
                      const Penalty& phi);

/// T_low, T_high, max_first_k_diff.
void write_probe(std::ostream& os, const std::vector<ProbeRow>& rows);

/// Row-major matrix, one row per line, no header.
void write_matrix(std::ostream& os, const Matrix& M);

/// t, f_value, alpha, beta, frozen_loss, grad_eval_count. frozen_loss is
/// blank at t = 0.
void write_meta_history(std::ostream& os, const MetaRun& run);

/// bound_name, satisfied_from, margin. satisfied_from is blank when the
/// bound fails at the end of the checked range.
void write_bounds(std::ostream& os, const std::vector<BoundReport>& reports);

/// Header row `t,<name...>` then one row per index; shorter columns leave
/// trailing cells blank.
void write_columns(std::ostream& os, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns);

}  // namespace regret::csv
