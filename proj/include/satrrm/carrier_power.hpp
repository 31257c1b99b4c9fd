// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satrrm/metrics.hpp"
#include "satrrm/scenario.hpp"

namespace satrrm {

enum class RelaxationMode { BinaryHungarian, ContinuousRelaxRound };

struct SolverOptions {
  int max_outer_iters = 10;
  int sca_max_iters = 50;
  double sca_tolerance = 1e-6;  // relative objective change
  int power_grid_levels = 4;    // oracle resolution
  RelaxationMode relaxation_mode = RelaxationMode::BinaryHungarian;
  std::uint64_t seed = 0;
};

struct IterationRecord {
  int iter = 0;
  double usc_bps = 0.0;        // best unmet-system-capacity seen so far
  int assignment_changes = 0;  // Hamming distance of x vs previous iterate
};

struct SolveResult {
  AllocationPlan plan;
  std::vector<IterationRecord> trace;
  // One objective sequence per outer iteration; each is non-decreasing.
  std::vector<std::vector<double>> sca_traces;

  std::string trace_csv() const;
};

/// Largest divisor of K that does not exceed L; the reuse factor the
/// baselines default to.
int default_color_count(const Scenario& s);

/// Frequency-reuse baseline: beams are greedily colored to maximize the
/// minimum same-color center distance, each color owns an equal contiguous
/// carrier block, and power is spread uniformly (transponder-cap aware).
AllocationPlan coloring_baseline(const Scenario& s, int n_colors);

/// Equal power on every assigned slot, total P_total, then scaled down per
/// transponder where a cap binds. Errors when nothing is assigned.
void uniform_power(const Scenario& s, AllocationPlan& plan);

/// Successive convex approximation over powers with the assignment fixed:
/// the interference each SINR sees is frozen at the previous iterate, the
/// resulting concave surrogate is solved by projected gradient ascent with
/// backtracking, and the update is damped until the true USC does not
/// regress, so the reported objective sequence never decreases.
std::vector<std::vector<double>> sca_power(const Scenario& s,
                                           const std::vector<std::vector<std::uint8_t>>& x,
                                           const std::vector<std::vector<double>>& p_init,
                                           const SolverOptions& opts,
                                           std::vector<double>* objective_trace = nullptr);

/// Rebuilds the carrier assignment for fixed powers. Hungarian mode grants
/// one carrier-to-beam matching per round on a marginal-USC utility matrix;
/// the continuous mode optimizes the box relaxation 0 <= x <= 1 and rounds
/// by descending fractional value. Both respect transponder carrier caps.
std::vector<std::vector<std::uint8_t>> assign_carriers(
    const Scenario& s, const std::vector<std::vector<double>>& p_prev,
    RelaxationMode mode);

/// Alternating assignment / SCA-power loop seeded by the coloring baseline.
/// Keeps and returns the best plan seen, so the result is never worse than
/// the baseline and the trace is monotone.
SolveResult alternating_solve(const Scenario& s, const SolverOptions& opts);

/// Exhaustive oracle: every binary assignment crossed with every power
/// vector on the discrete simplex grid (levels quanta of P_total, sums <=
/// P_total). Guard rails: K*L <= 9 and levels <= 5. Ties prefer lower total
/// power, then lexicographically smaller x.
AllocationPlan brute_force_plan(const Scenario& s, int grid_levels);

/// USC of a plan against the scenario demands.
double plan_usc(const Scenario& s, const AllocationPlan& plan);

}  // namespace satrrm
