// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace satrrm {

enum class Relation { LessEq, GreaterEq, Equal };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

/// Maximizes objective . x subject to the given constraints and x >= 0.
/// Dense two-phase tableau simplex with Bland's rule throughout, so it
/// cannot cycle; pivot tolerance defaults to 1e-9. No external solver.
LpResult lp_maximize(const std::vector<double>& objective,
                     const std::vector<LinearConstraint>& constraints,
                     double tol = 1e-9);

}  // namespace satrrm
