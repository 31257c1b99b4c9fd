// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "satrrm/scenario.hpp"

namespace satrrm {

/// Candidate illumination snapshots with their per-beam full-band rates.
/// Rates assume the whole bandwidth on every active beam, a uniform
/// P_total / |active| power split, and co-channel interference only among
/// the snapshot's active beams.
struct SnapshotSet {
  std::vector<std::vector<int>> snapshots;   // active beam indices, ascending
  std::vector<std::vector<double>> rate_bps; // [g][l], zero when inactive

  int count() const { return static_cast<int>(snapshots.size()); }
  std::string to_json(const Scenario& s) const;
};

/// All non-empty beam subsets of size <= max_active whose pairwise center
/// distances are all >= min_distance (pass min_distance <= 0 to disable the
/// isolation filter). Throws GuardRailError above `cap` snapshots with a
/// pointer at the snapshot-file route.
SnapshotSet enumerate_snapshots(const Scenario& s, int max_active, double min_distance,
                                int cap = 4096);

/// Builds a SnapshotSet from explicit beam-id subsets (snapshot file route).
SnapshotSet snapshots_from_lists(const Scenario& s,
                                 const std::vector<std::vector<int>>& beam_id_subsets);
SnapshotSet snapshots_from_json(const Scenario& s, const std::string& json_text);

struct BhRelaxation {
  std::vector<double> t;  // continuous dwell counts, sum = T_H / T_s
  double eta_lp = 0.0;    // LP-optimal min_l C_l / D_l
};

/// Continuous relaxation of the max-min illumination problem: maximize eta
/// subject to C_l / D_l >= eta, sum t_g = T_H / T_s, t >= 0. Exact LP via
/// the in-repo simplex. A beam no snapshot can reach pins eta to 0, which
/// is returned rather than raised.
BhRelaxation lp_relax(const SnapshotSet& ss, const std::vector<double>& demands,
                      double window_s, double slot_s);

/// Window-average per-beam capacity of an integer pattern:
/// C_l = sum_g (t_g / N_s) R_{l,g}.
std::vector<double> pattern_capacity(const SnapshotSet& ss, const std::vector<long long>& t);

/// min_l C_l / D_l over beams with positive demand.
double pattern_eta(const SnapshotSet& ss, const std::vector<double>& demands,
                   const std::vector<long long>& t);

/// Largest-remainder rounding of a continuous dwell vector to n_slots, then
/// best-improvement hill climbing over single-slot transfers while the
/// max-min ratio improves. Deterministic tie-breaks on snapshot index.
std::vector<long long> round_dwell(const SnapshotSet& ss, const std::vector<double>& demands,
                                   const std::vector<double>& t, long long n_slots);

/// Exhaustive oracle over all integer compositions of n_slots into count()
/// parts. Guard rails: count() <= 5 and n_slots <= 12. Ties prefer the
/// lexicographically smallest pattern.
std::vector<long long> bh_brute_force(const SnapshotSet& ss, const std::vector<double>& demands,
                                      long long n_slots);

/// Demand-proportional dwell over the single-beam snapshots.
std::vector<long long> proportional_baseline(const SnapshotSet& ss,
                                             const std::vector<double>& demands,
                                             long long n_slots);

struct AuditLimits {
  long long max_switches_per_window = -1;  // < 0 disables the check
  long long max_revisit_gap_slots = -1;
};

struct AuditReport {
  std::vector<int> sequence;          // slot -> snapshot index
  std::vector<long long> switches;    // per beam, circular on/off transitions
  std::vector<long long> max_gap;     // per beam, longest dark run (circular)
  std::vector<std::string> violations;
};

/// Sequences the dwell counts with smooth weighted round-robin (spreads each
/// snapshot's slots evenly, which keeps revisit gaps short) and reports
/// per-beam switch counts and revisit gaps against the advisory limits.
AuditReport audit_pattern(const SnapshotSet& ss, const std::vector<long long>& t,
                          const AuditLimits& limits);

struct IlluminationPattern {
  std::vector<long long> t;
  double slot_s = 0.0;
  double window_s = 0.0;
  double eta = 0.0;

  std::string to_json(const SnapshotSet& ss, const AuditReport& audit,
                      double eta_lp = -1.0) const;
};

}  // namespace satrrm
