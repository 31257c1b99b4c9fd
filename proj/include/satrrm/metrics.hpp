// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satrrm/scenario.hpp"

namespace satrrm {

/// Binary carrier assignment x_k[l] with per-carrier transmit powers p_k[l],
/// both K x L (carrier-major). Feasibility: powers only on assigned slots,
/// total power within budget, transponder caps respected.
struct AllocationPlan {
  std::vector<std::vector<std::uint8_t>> x;  // [k][l] in {0,1}
  std::vector<std::vector<double>> p_w;      // [k][l] >= 0

  static AllocationPlan zeros(int num_carriers, int num_beams);
  std::string to_json() const;
  static AllocationPlan from_json(const std::string& text);
};

/// Throws ValidationError on any violated plan invariant. Power-sum checks
/// use an absolute slack of rel_tol * P_total.
void validate_plan(const Scenario& s, const AllocationPlan& plan, double rel_tol = 1e-9);

/// Super-user SINR on carrier k of beam l:
/// g_l[l] p_k[l] x_k[l] / (sum_{m != l} g_l[m] p_k[m] x_k[m] + sigma_l^2).
double sinr(const Scenario& s, const AllocationPlan& plan, int beam, int carrier);

/// Offered capacity per beam: C_l = sum_k B_c log2(1 + sinr(l, k)).
std::vector<double> offered_capacity(const Scenario& s, const AllocationPlan& plan);

/// Unmet system capacity sum_l min{C_l - D_l, 0}; always <= 0.
double usc(const std::vector<double>& capacity, const std::vector<double>& demand);

/// Mean squared capacity-demand mismatch (1/L) sum_l (C_l - D_l)^2.
double mmse(const std::vector<double>& capacity, const std::vector<double>& demand);

/// Minimum relative demand satisfaction min_l C_l / D_l. Every demand must be
/// positive; a zero demand is an error here, not a convention.
double min_ratio(const std::vector<double>& capacity, const std::vector<double>& demand);

struct MetricsReport {
  std::vector<double> demands_bps;
  std::vector<double> offered_bps;
  std::vector<double> satisfaction;  // C_l / D_l, NaN-free: +inf convention avoided
  double usc_bps = 0.0;
  double mmse_value = 0.0;
  double min_ratio_value = 0.0;  // over beams with positive demand

  static MetricsReport compute(const Scenario& s, const AllocationPlan& plan);
  std::string to_json() const;
  std::string to_csv() const;
};

}  // namespace satrrm
