// SPDX-License-Identifier: Apache-2.0
#include "satrrm/sched_precode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "satrrm/errors.hpp"
#include "satrrm/json_io.hpp"

namespace satrrm {

PrecodingMatrix rzf(const CMatrix& h, double alpha, double p_total) {
  if (alpha < 0.0) throw ValidationError("alpha", "must be non-negative");
  if (!(p_total > 0.0)) throw ValidationError("p_total", "must be positive");
  if (h.rows() < 1 || h.cols() < 1) throw ValidationError("H", "empty channel matrix");
  if (h.rows() > h.cols())
    throw ValidationError("H", "more served users than beams");

  CMatrix gram = (h * h.adjoint()).plus_scaled_identity(alpha);
  CMatrix inv;
  try {
    inv = inverse(gram);
  } catch (const ValidationError&) {
    throw ValidationError("H", alpha == 0.0
                                   ? "H H^H is singular; zero-forcing needs alpha > 0"
                                   : "H H^H + alpha I is singular");
  }
  CMatrix unnormalized = h.adjoint() * inv;

  double tr = unnormalized.frobenius_norm();
  tr *= tr;  // trace(W W^H) = ||W||_F^2
  if (!(tr > 0.0)) throw ValidationError("H", "zero channel matrix");

  PrecodingMatrix out;
  out.alpha = alpha;
  out.scale = std::sqrt(p_total / tr);
  out.w = unnormalized;
  for (int i = 0; i < out.w.rows(); ++i)
    for (int j = 0; j < out.w.cols(); ++j) out.w(i, j) *= out.scale;
  return out;
}

std::vector<double> precoded_sinr(const CMatrix& h, const CMatrix& w,
                                  const std::vector<double>& noise_w) {
  if (h.cols() != w.rows() || h.rows() != w.cols())
    throw ValidationError("W", "shape mismatch between H and W");
  if (static_cast<int>(noise_w.size()) != h.rows())
    throw ValidationError("noise_w", "needs one noise power per served user");

  CMatrix m = h * w;  // m(i, j) = h_i^H w_j
  std::vector<double> out(h.rows());
  for (int i = 0; i < h.rows(); ++i) {
    double interference = 0.0;
    for (int j = 0; j < h.rows(); ++j)
      if (j != i) interference += std::norm(m(i, j));
    out[i] = std::norm(m(i, i)) / (interference + noise_w[i]);
  }
  return out;
}

namespace {

double vec_norm2(const std::vector<Complex>& v) {
  double acc = 0.0;
  for (const Complex& x : v) acc += std::norm(x);
  return acc;
}

Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

/// Fraction of ||h|| lying in the span of the orthonormal basis.
double span_correlation(const std::vector<std::vector<Complex>>& basis,
                        const std::vector<Complex>& h) {
  double n2 = vec_norm2(h);
  if (n2 <= 0.0) return 1.0;
  double proj2 = 0.0;
  for (const auto& b : basis) proj2 += std::norm(inner(b, h));
  return std::sqrt(std::min(proj2 / n2, 1.0));
}

void extend_basis(std::vector<std::vector<Complex>>& basis, std::vector<Complex> h) {
  for (const auto& b : basis) {
    Complex c = inner(b, h);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] -= c * b[i];
  }
  double n = std::sqrt(vec_norm2(h));
  if (n > 1e-12) {
    for (auto& x : h) x /= n;
    basis.push_back(std::move(h));
  }
}

}  // namespace

std::vector<int> sus_select(const std::vector<std::vector<Complex>>& candidates,
                            double epsilon, int max_users) {
  if (candidates.empty()) throw ValidationError("candidates", "must be non-empty");
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw ValidationError("epsilon", "must lie in (0, 1]");
  const std::size_t dim = candidates[0].size();
  for (const auto& c : candidates)
    if (c.size() != dim) throw ValidationError("candidates", "mixed vector lengths");

  std::vector<int> pool(candidates.size());
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> selected;
  std::vector<std::vector<Complex>> basis;

  while (static_cast<int>(selected.size()) < max_users && !pool.empty()) {
    int pick = -1;
    double best = -1.0;
    for (int idx : pool) {
      // Residual energy outside the selected span; plain norm on the first pick.
      double n2 = vec_norm2(candidates[idx]);
      double rho = basis.empty() ? 0.0 : span_correlation(basis, candidates[idx]);
      double residual2 = n2 * (1.0 - rho * rho);
      if (residual2 > best) {
        best = residual2;
        pick = idx;
      }
    }
    if (pick < 0 || best <= 0.0) break;
    selected.push_back(pick);
    extend_basis(basis, candidates[pick]);

    std::vector<int> kept;
    for (int idx : pool) {
      if (idx == pick) continue;
      if (span_correlation(basis, candidates[idx]) < epsilon) kept.push_back(idx);
    }
    pool = std::move(kept);
  }
  return selected;
}

ModCodTable ModCodTable::demo() {
  // Synthetic thresholds/efficiencies; real deployments load their own CSV.
  return from_rows({{-2.0, 0.5}, {2.0, 1.0}, {6.0, 2.0}, {10.0, 3.0}, {14.0, 4.0}});
}

ModCodTable ModCodTable::from_rows(std::vector<ModCodRow> rows) {
  if (rows.empty()) throw ValidationError("modcod", "table must be non-empty");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].threshold_db > rows[i - 1].threshold_db) ||
        !(rows[i].spectral_efficiency > rows[i - 1].spectral_efficiency))
      throw ValidationError("modcod",
                            "rows must be strictly increasing in threshold and efficiency");
  }
  for (const auto& r : rows)
    if (!(r.spectral_efficiency > 0.0))
      throw ValidationError("modcod", "efficiencies must be positive");
  ModCodTable t;
  t.rows_ = std::move(rows);
  return t;
}

ModCodTable ModCodTable::from_csv(const std::string& text) {
  std::vector<ModCodRow> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    ModCodRow r;
    if (!(ls >> r.threshold_db >> r.spectral_efficiency)) {
      if (rows.empty()) continue;  // tolerate a header line
      throw ValidationError("modcod", "unparseable row: " + line);
    }
    rows.push_back(r);
  }
  return from_rows(std::move(rows));
}

ModCodTable ModCodTable::from_csv_file(const std::string& path) {
  return from_csv(read_text_file(path));
}

std::optional<int> ModCodTable::lookup_db(double sinr_db) const {
  int best = -1;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (rows_[i].threshold_db <= sinr_db) best = static_cast<int>(i);
  if (best < 0) return std::nullopt;
  return best;
}

FramePlan similarity_schedule(const std::vector<std::vector<double>>& user_sinrs,
                              int frame_size, const ModCodTable& table) {
  if (frame_size < 1) throw ValidationError("frame_size", "must be >= 1");

  struct Entry {
    UserRef ref;
    double sinr_db;
    int row;
  };
  std::vector<Entry> entries;
  FramePlan plan;
  for (std::size_t l = 0; l < user_sinrs.size(); ++l) {
    for (std::size_t u = 0; u < user_sinrs[l].size(); ++u) {
      double lin = user_sinrs[l][u];
      double db = lin > 0.0 ? 10.0 * std::log10(lin) : -std::numeric_limits<double>::infinity();
      auto row = table.lookup_db(db);
      if (!row) {
        plan.unservable.push_back({static_cast<int>(l), static_cast<int>(u)});
        continue;
      }
      entries.push_back({{static_cast<int>(l), static_cast<int>(u)}, db, *row});
    }
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.sinr_db != b.sinr_db) return a.sinr_db > b.sinr_db;
    if (a.ref.beam != b.ref.beam) return a.ref.beam < b.ref.beam;
    return a.ref.user < b.ref.user;
  });

  const auto& rows = table.rows();
  for (std::size_t at = 0; at < entries.size(); at += frame_size) {
    std::size_t end = std::min(entries.size(), at + frame_size);
    Frame f;
    int frame_row = entries[end - 1].row;  // weakest member pins the ModCod
    f.modcod_row = frame_row;
    f.efficiency = rows[frame_row].spectral_efficiency;
    for (std::size_t i = at; i < end; ++i) {
      f.members.push_back(entries[i].ref);
      f.member_sinr_db.push_back(entries[i].sinr_db);
      f.loss += rows[entries[i].row].spectral_efficiency - f.efficiency;
      plan.total_throughput += f.efficiency;
    }
    plan.total_loss += f.loss;
    plan.frames.push_back(std::move(f));
  }
  return plan;
}

namespace {

void write_frame_plan(JsonWriter& w, const FramePlan& plan) {
  w.begin_object();
  w.key("frames").begin_array();
  for (const auto& f : plan.frames) {
    w.begin_object();
    w.key("members").begin_array();
    for (std::size_t i = 0; i < f.members.size(); ++i) {
      w.begin_object();
      w.key("beam").value(f.members[i].beam);
      w.key("user").value(f.members[i].user);
      w.key("sinr_db").value(f.member_sinr_db[i]);
      w.end_object();
    }
    w.end_array();
    w.key("modcod_row").value(f.modcod_row);
    w.key("efficiency").value(f.efficiency);
    w.key("loss").value(f.loss);
    w.end_object();
  }
  w.end_array();
  w.key("unservable").begin_array();
  for (const auto& u : plan.unservable) {
    w.begin_object();
    w.key("beam").value(u.beam);
    w.key("user").value(u.user);
    w.end_object();
  }
  w.end_array();
  w.key("total_loss").value(plan.total_loss);
  w.key("total_throughput").value(plan.total_throughput);
  w.end_object();
}

}  // namespace

std::string FramePlan::to_json() const {
  JsonWriter w;
  write_frame_plan(w, *this);
  return w.str() + "\n";
}

namespace {

struct SlotSelection {
  std::vector<int> beams;
  std::vector<int> users;
};

}  // namespace

JointScheduleResult joint_schedule_precode(const Scenario& s, const UserChannelSet& channels,
                                           const JointScheduleOptions& opts) {
  if (opts.rounds < 1) throw ValidationError("rounds", "must be >= 1");
  const int L = s.num_beams;
  if (static_cast<int>(channels.channels.size()) != L)
    throw ValidationError("channels", "beam count mismatch with scenario");
  for (int l = 0; l < L; ++l)
    if (static_cast<int>(channels.channels[l].size()) != s.users_per_beam[l])
      throw ValidationError("channels", "user count mismatch in beam " + std::to_string(l));

  // Full-band noise: scenario noise is per carrier width B_c, precoded
  // transmission occupies the whole band.
  std::vector<double> noise_full(L);
  for (int l = 0; l < L; ++l) noise_full[l] = s.noise_w[l] * s.num_carriers;

  double alpha = opts.alpha;
  if (alpha < 0.0) {
    double mean_noise = std::accumulate(noise_full.begin(), noise_full.end(), 0.0) / L;
    alpha = L * mean_noise / s.total_power_w;
  }

  // Initial ordering: interference-free SNR estimate per user.
  std::vector<std::vector<double>> est(L);
  for (int l = 0; l < L; ++l)
    for (const auto& h : channels.channels[l])
      est[l].push_back(vec_norm2(h) * (s.total_power_w / L) / noise_full[l]);

  JointScheduleResult result;
  std::vector<SlotSelection> prev_selection;

  for (int round = 0; round < opts.rounds; ++round) {
    std::vector<std::vector<int>> queue(L);
    for (int l = 0; l < L; ++l) {
      queue[l].resize(est[l].size());
      std::iota(queue[l].begin(), queue[l].end(), 0);
      std::stable_sort(queue[l].begin(), queue[l].end(),
                       [&](int a, int b) { return est[l][a] > est[l][b]; });
    }

    std::vector<std::vector<int>> remaining = queue;  // per sweep, queue order
    std::vector<int> wrap_cursor(L, 0);
    std::vector<SlotSelection> selections;
    std::vector<SlotResult> slots;
    std::vector<std::vector<double>> achieved = est;

    auto any_remaining = [&] {
      for (int l = 0; l < L; ++l)
        if (!remaining[l].empty()) return true;
      return false;
    };

    while (any_remaining()) {
      // Serve every beam each slot; exhausted beams repeat round-robin.
      std::vector<int> order(L);
      std::iota(order.begin(), order.end(), 0);
      auto head_est = [&](int l) {
        int u = remaining[l].empty() ? queue[l][wrap_cursor[l] % queue[l].size()]
                                     : remaining[l].front();
        return est[l][u];
      };
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return head_est(a) > head_est(b); });

      SlotSelection sel;
      std::vector<std::vector<Complex>> basis;
      std::vector<int> picked_user(L, -1);
      for (int l : order) {
        const bool fresh = !remaining[l].empty();
        const std::vector<int>& src = fresh ? remaining[l] : queue[l];
        int start = fresh ? 0 : wrap_cursor[l] % static_cast<int>(queue[l].size());
        int chosen_pos = start;
        for (int off = 0; off < static_cast<int>(src.size()); ++off) {
          int pos = (start + off) % static_cast<int>(src.size());
          const auto& h = channels.channels[l][src[pos]];
          if (basis.empty() || span_correlation(basis, h) < opts.sus_epsilon) {
            chosen_pos = pos;
            break;
          }
        }
        int user = src[chosen_pos];
        picked_user[l] = user;
        if (fresh) {
          remaining[l].erase(remaining[l].begin() + chosen_pos);
        } else {
          wrap_cursor[l] = (chosen_pos + 1) % static_cast<int>(queue[l].size());
        }
        extend_basis(basis, channels.channels[l][user]);
      }

      for (int l = 0; l < L; ++l) {
        sel.beams.push_back(l);
        sel.users.push_back(picked_user[l]);
      }

      CMatrix h(L, L);
      std::vector<double> slot_noise(L);
      for (int i = 0; i < L; ++i) {
        const auto& hv = channels.channels[i][sel.users[i]];
        for (int j = 0; j < L; ++j) h(i, j) = hv[j];
        slot_noise[i] = noise_full[i];
      }
      PrecodingMatrix pm = rzf(h, alpha, s.total_power_w);
      std::vector<double> slot_sinr = precoded_sinr(h, pm.w, slot_noise);
      for (int i = 0; i < L; ++i) achieved[sel.beams[i]][sel.users[i]] = slot_sinr[i];

      SlotResult sr;
      sr.beams = sel.beams;
      sr.users = sel.users;
      sr.precoder = pm.w;
      sr.sinr = slot_sinr;
      slots.push_back(std::move(sr));
      selections.push_back(std::move(sel));
    }

    est = achieved;
    result.slots = std::move(slots);
    result.rounds_used = round + 1;
    bool same = !prev_selection.empty() && prev_selection.size() == selections.size();
    if (same) {
      for (std::size_t i = 0; i < selections.size() && same; ++i)
        same = selections[i].users == prev_selection[i].users &&
               selections[i].beams == prev_selection[i].beams;
    }
    prev_selection = std::move(selections);
    if (same) {
      result.converged = true;
      break;
    }
  }

  result.user_sinr = est;
  result.frames = similarity_schedule(est, opts.frame_size, opts.table);
  return result;
}

std::string JointScheduleResult::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("slots").begin_array();
  for (const auto& sl : slots) {
    w.begin_object();
    w.key("beams").number_array(sl.beams);
    w.key("users").number_array(sl.users);
    w.key("sinr").number_array(sl.sinr);
    w.key("precoder").begin_array();
    for (int i = 0; i < sl.precoder.rows(); ++i) {
      w.begin_array();
      for (int j = 0; j < sl.precoder.cols(); ++j) {
        w.begin_array();
        w.value(sl.precoder(i, j).real());
        w.value(sl.precoder(i, j).imag());
        w.end_array();
      }
      w.end_array();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.key("user_sinr").begin_array();
  for (const auto& row : user_sinr) w.number_array(row);
  w.end_array();
  w.key("rounds_used").value(rounds_used);
  w.key("converged").value(converged);
  w.key("frame_plan");
  write_frame_plan(w, frames);
  w.end_object();
  return w.str() + "\n";
}

}  // namespace satrrm
