// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satrrm/linalg.hpp"
#include "satrrm/scenario.hpp"

namespace satrrm {

/// Regularized zero-forcing precoder W = scale * H^H (H H^H + alpha I)^-1,
/// scale = sqrt(P_total / trace(W_rzf W_rzf^H)), so trace(W W^H) = P_total.
struct PrecodingMatrix {
  CMatrix w;           // L x A, one column per served user
  double alpha = 0.0;  // regularization factor
  double scale = 0.0;  // the trace-normalization factor
};

/// H is A x L (one row per served user). alpha = 0 requires H H^H to be
/// invertible and yields the plain zero-forcing solution.
PrecodingMatrix rzf(const CMatrix& h, double alpha, double p_total);

/// Per-served-user SINR |h_i^H w_i|^2 / (sum_{j != i} |h_i^H w_j|^2 + sigma_i^2)
/// (standard MU-MISO form; h_i^H is row i of H).
std::vector<double> precoded_sinr(const CMatrix& h, const CMatrix& w,
                                  const std::vector<double>& noise_w);

/// Greedy semi-orthogonal user selection: seed with the max-norm candidate,
/// then repeatedly drop candidates whose normalized projection onto the span
/// of the selected channels reaches epsilon and pick the one with the
/// largest residual norm. Returns indices in selection order.
std::vector<int> sus_select(const std::vector<std::vector<Complex>>& candidates,
                            double epsilon, int max_users);

struct ModCodRow {
  double threshold_db = 0.0;       // minimum SINR for this mode
  double spectral_efficiency = 0;  // bit/s/Hz
};

/// Ordered ACM lookup table; strictly increasing in both columns.
class ModCodTable {
 public:
  static ModCodTable demo();  // synthetic 5-row table, user-replaceable
  static ModCodTable from_rows(std::vector<ModCodRow> rows);
  static ModCodTable from_csv(const std::string& text);
  static ModCodTable from_csv_file(const std::string& path);

  /// Highest row whose threshold is <= sinr_db, or nullopt (unservable).
  std::optional<int> lookup_db(double sinr_db) const;
  const std::vector<ModCodRow>& rows() const { return rows_; }

 private:
  std::vector<ModCodRow> rows_;
};

struct UserRef {
  int beam = 0;
  int user = 0;
  bool operator==(const UserRef&) const = default;
};

struct Frame {
  std::vector<UserRef> members;
  std::vector<double> member_sinr_db;
  int modcod_row = 0;
  double efficiency = 0.0;  // the shared frame ModCod, bit/s/Hz
  double loss = 0.0;        // sum over members of (own efficiency - frame efficiency)
};

struct FramePlan {
  std::vector<Frame> frames;
  std::vector<UserRef> unservable;
  double total_loss = 0.0;
  double total_throughput = 0.0;  // sum of per-member frame efficiencies

  std::string to_json() const;
};

/// DVB-style frame scheduling under a shared ModCod: users are sorted by
/// SINR and chunked into consecutive frames of frame_size, so each frame
/// groups the most similar SINRs and its ModCod is set by its weakest
/// member. SINRs are linear; users below the lowest table threshold are
/// excluded and reported.
FramePlan similarity_schedule(const std::vector<std::vector<double>>& user_sinrs,
                              int frame_size, const ModCodTable& table);

struct JointScheduleOptions {
  double alpha = -1.0;  // < 0 selects L * mean(noise) / P_total
  int rounds = 3;
  double sus_epsilon = 0.4;
  int frame_size = 2;
  ModCodTable table = ModCodTable::demo();
};

struct SlotResult {
  std::vector<int> beams;       // active beams, ascending
  std::vector<int> users;       // selected user per active beam
  CMatrix precoder;             // L x |beams|
  std::vector<double> sinr;     // per active beam
};

struct JointScheduleResult {
  std::vector<SlotResult> slots;
  std::vector<std::vector<double>> user_sinr;  // final per-user linear SINR
  FramePlan frames;
  int rounds_used = 0;
  bool converged = false;

  std::string to_json() const;
};

/// Coupled schedule -> precode -> SINR loop: each round sweeps slots that
/// serve one user per beam (SUS-filtered round-robin over SINR-sorted
/// queues), precodes each slot with rzf, and feeds the achieved SINRs into
/// the next round's ordering. Stops early when the selection reaches a
/// fixed point.
JointScheduleResult joint_schedule_precode(const Scenario& s, const UserChannelSet& channels,
                                           const JointScheduleOptions& opts);

}  // namespace satrrm
