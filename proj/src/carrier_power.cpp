// SPDX-License-Identifier: Apache-2.0
#include "satrrm/carrier_power.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "satrrm/assignment.hpp"
#include "satrrm/errors.hpp"
#include "satrrm/json_io.hpp"

namespace satrrm {

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct SlotGroup {
  std::vector<int> slots;  // indices into the slot list
  double cap = 0.0;
};

/// Assigned (carrier, beam) slots of a fixed x, with the per-transponder
/// power groups and fast USC evaluation over slot power vectors.
struct SlotContext {
  const Scenario* s = nullptr;
  std::vector<std::pair<int, int>> slots;            // (k, l)
  std::vector<std::vector<int>> carrier_slots;       // per carrier: slot indices
  std::vector<SlotGroup> groups;

  static SlotContext build(const Scenario& s, const std::vector<std::vector<std::uint8_t>>& x) {
    SlotContext ctx;
    ctx.s = &s;
    ctx.carrier_slots.resize(s.num_carriers);
    for (int k = 0; k < s.num_carriers; ++k)
      for (int l = 0; l < s.num_beams; ++l)
        if (x[k][l]) {
          ctx.carrier_slots[k].push_back(static_cast<int>(ctx.slots.size()));
          ctx.slots.emplace_back(k, l);
        }
    if (s.transponders.empty()) {
      SlotGroup g;
      g.cap = s.total_power_w;
      g.slots.resize(ctx.slots.size());
      std::iota(g.slots.begin(), g.slots.end(), 0);
      ctx.groups.push_back(std::move(g));
    } else {
      // Caps sum to <= P_total, so per-transponder feasibility implies C1.
      ctx.groups.resize(s.transponders.size());
      for (std::size_t t = 0; t < s.transponders.size(); ++t)
        ctx.groups[t].cap = s.transponders[t].power_cap_w;
      for (std::size_t i = 0; i < ctx.slots.size(); ++i)
        ctx.groups[s.transponder_of(ctx.slots[i].second)].slots.push_back(static_cast<int>(i));
    }
    return ctx;
  }

  std::vector<double> capacities(const std::vector<double>& q) const {
    std::vector<double> c(s->num_beams, 0.0);
    for (int k = 0; k < s->num_carriers; ++k) {
      const auto& act = carrier_slots[k];
      for (int i : act) {
        int l = slots[i].second;
        double interference = 0.0;
        for (int j : act) {
          int m = slots[j].second;
          if (m != l) interference += s->gain[l][m] * q[j];
        }
        double g = s->gain[l][l] * q[i] / (interference + s->noise_w[l]);
        c[l] += s->carrier_width_hz * std::log2(1.0 + g);
      }
    }
    return c;
  }

  double usc_of(const std::vector<double>& q) const {
    std::vector<double> c = capacities(q);
    double acc = 0.0;
    for (int l = 0; l < s->num_beams; ++l) acc += std::min(c[l] - s->demands_bps[l], 0.0);
    return acc;
  }

  std::vector<double> gather(const std::vector<std::vector<double>>& p) const {
    std::vector<double> q(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) q[i] = p[slots[i].first][slots[i].second];
    return q;
  }

  std::vector<std::vector<double>> scatter(const std::vector<double>& q) const {
    std::vector<std::vector<double>> p(s->num_carriers, std::vector<double>(s->num_beams, 0.0));
    for (std::size_t i = 0; i < slots.size(); ++i) p[slots[i].first][slots[i].second] = q[i];
    return p;
  }
};

/// Euclidean projection of the group's entries onto {y >= 0, sum y <= cap}.
void project_group(std::vector<double>& q, const SlotGroup& g) {
  double sum_pos = 0.0;
  for (int i : g.slots) sum_pos += std::max(q[i], 0.0);
  if (sum_pos <= g.cap) {
    for (int i : g.slots) q[i] = std::max(q[i], 0.0);
    return;
  }
  // Project onto the simplex {y >= 0, sum y = cap} (sort-and-threshold).
  std::vector<double> u;
  u.reserve(g.slots.size());
  for (int i : g.slots) u.push_back(q[i]);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double acc = 0.0, tau = 0.0;
  int rho = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    acc += u[j];
    double t = (acc - g.cap) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) {
      rho = static_cast<int>(j + 1);
      tau = t;
    }
  }
  (void)rho;
  for (int i : g.slots) q[i] = std::max(q[i] - tau, 0.0);
}

void project_caps(std::vector<double>& q, const std::vector<SlotGroup>& groups) {
  for (const auto& g : groups) project_group(q, g);
}

/// Maximizes the concave surrogate sum_l min{Ct_l(q) - D_l, 0} where
/// Ct_l = sum_k B_c log2(1 + a_kl q_kl) (interference frozen inside a_kl),
/// by projected gradient ascent with backtracking.
std::vector<double> maximize_surrogate(const SlotContext& ctx, const std::vector<double>& a,
                                       std::vector<double> q, int max_iters) {
  const Scenario& s = *ctx.s;
  const double bc = s.carrier_width_hz;
  const std::size_t n = q.size();

  auto eval = [&](const std::vector<double>& v, std::vector<double>* cap_out) {
    std::vector<double> c(s.num_beams, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      c[ctx.slots[i].second] += bc * std::log2(1.0 + a[i] * v[i]);
    double f = 0.0;
    for (int l = 0; l < s.num_beams; ++l) f += std::min(c[l] - s.demands_bps[l], 0.0);
    if (cap_out) *cap_out = std::move(c);
    return f;
  };

  std::vector<double> cap;
  double f = eval(q, &cap);
  double step = 0.0;
  std::vector<double> grad(n), cand(n);

  for (int it = 0; it < max_iters; ++it) {
    double gnorm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int l = ctx.slots[i].second;
      grad[i] = cap[l] < s.demands_bps[l]
                    ? bc * a[i] / ((1.0 + a[i] * q[i]) * kLn2)
                    : 0.0;
      gnorm2 += grad[i] * grad[i];
    }
    if (gnorm2 <= 0.0) break;
    if (step <= 0.0) step = 0.25 * s.total_power_w / std::sqrt(gnorm2);

    double t = step * 2.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t i = 0; i < n; ++i) cand[i] = q[i] + t * grad[i];
      project_caps(cand, ctx.groups);
      double fc = eval(cand, nullptr);
      if (fc > f) {
        double gain = fc - f;
        q = cand;
        f = fc;
        eval(q, &cap);
        step = t;
        accepted = true;
        if (gain <= 1e-12 * (1.0 + std::fabs(f))) it = max_iters;  // converged
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return q;
}

double probe_power(const Scenario& s, const std::vector<std::vector<double>>& p_prev) {
  double sum = 0.0;
  int count = 0;
  for (const auto& row : p_prev)
    for (double v : row)
      if (v > 0.0) {
        sum += v;
        ++count;
      }
  if (count > 0) return sum / count;
  return s.total_power_w / (static_cast<double>(s.num_carriers) * s.num_beams);
}

/// USC change from adding beam `l` on carrier `k` with power `probe`, given
/// the working powers q[k][l] and per-beam capacities c. O(L^2).
double delta_usc_add(const Scenario& s, const std::vector<std::vector<std::uint8_t>>& x,
                     const std::vector<std::vector<double>>& q, const std::vector<double>& c,
                     int k, int l, double probe) {
  const double bc = s.carrier_width_hz;
  double delta = 0.0;
  // Existing beams on carrier k lose SINR to the newcomer's interference.
  for (int m = 0; m < s.num_beams; ++m) {
    if (!x[k][m] || m == l) continue;
    double interference = 0.0;
    for (int mm = 0; mm < s.num_beams; ++mm)
      if (mm != m && x[k][mm]) interference += s.gain[m][mm] * q[k][mm];
    double before = s.gain[m][m] * q[k][m] / (interference + s.noise_w[m]);
    double after = s.gain[m][m] * q[k][m] / (interference + s.gain[m][l] * probe + s.noise_w[m]);
    double dc = bc * (std::log2(1.0 + after) - std::log2(1.0 + before));
    delta += std::min(c[m] + dc - s.demands_bps[m], 0.0) - std::min(c[m] - s.demands_bps[m], 0.0);
  }
  double interference = 0.0;
  for (int m = 0; m < s.num_beams; ++m)
    if (m != l && x[k][m]) interference += s.gain[l][m] * q[k][m];
  double own = s.gain[l][l] * probe / (interference + s.noise_w[l]);
  double dc = bc * std::log2(1.0 + own);
  delta += std::min(c[l] + dc - s.demands_bps[l], 0.0) - std::min(c[l] - s.demands_bps[l], 0.0);
  return delta;
}

std::vector<double> capacities_of(const Scenario& s, const std::vector<std::vector<std::uint8_t>>& x,
                                  const std::vector<std::vector<double>>& q) {
  SlotContext ctx = SlotContext::build(s, x);
  return ctx.capacities(ctx.gather(q));
}

std::vector<std::vector<std::uint8_t>> assign_hungarian(
    const Scenario& s, const std::vector<std::vector<double>>& p_prev) {
  const int K = s.num_carriers;
  const int L = s.num_beams;
  const double fallback = probe_power(s, p_prev);
  const double usc_eps = 1e-9 * (1.0 + std::accumulate(s.demands_bps.begin(),
                                                       s.demands_bps.end(), 0.0));

  std::vector<std::vector<std::uint8_t>> x(K, std::vector<std::uint8_t>(L, 0));
  std::vector<std::vector<double>> q(K, std::vector<double>(L, 0.0));
  std::vector<double> c(L, 0.0);
  std::vector<int> cap_used(s.transponders.size(), 0);

  auto probe_at = [&](int k, int l) {
    return p_prev[k][l] > 0.0 ? p_prev[k][l] : fallback;
  };
  auto cap_open = [&](int l) {
    int t = s.transponder_of(l);
    return t < 0 || cap_used[t] < s.transponders[t].carrier_cap;
  };

  for (int round = 0; round < K * L; ++round) {
    std::vector<std::vector<double>> util(K, std::vector<double>(L, -1e30));
    bool candidate = false;
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < L; ++l) {
        if (x[k][l] || !cap_open(l)) continue;
        util[k][l] = delta_usc_add(s, x, q, c, k, l, probe_at(k, l));
        candidate = true;
      }
    }
    if (!candidate) break;

    std::vector<int> match = max_weight_assignment(util);
    struct Grant {
      double u;
      int k, l;
    };
    std::vector<Grant> grants;
    for (int k = 0; k < K; ++k)
      if (match[k] >= 0 && util[k][match[k]] > usc_eps)
        grants.push_back({util[k][match[k]], k, match[k]});
    std::sort(grants.begin(), grants.end(), [](const Grant& a, const Grant& b) {
      if (a.u != b.u) return a.u > b.u;
      if (a.l != b.l) return a.l < b.l;  // lowest beam index on utility ties
      return a.k < b.k;
    });

    int granted = 0;
    for (const auto& g : grants) {
      if (!cap_open(g.l)) continue;
      x[g.k][g.l] = 1;
      q[g.k][g.l] = probe_at(g.k, g.l);
      int t = s.transponder_of(g.l);
      if (t >= 0) ++cap_used[t];
      c = capacities_of(s, x, q);
      ++granted;
    }
    if (granted == 0) break;
  }
  return x;
}

std::vector<std::vector<std::uint8_t>> assign_continuous(
    const Scenario& s, const std::vector<std::vector<double>>& p_prev) {
  const int K = s.num_carriers;
  const int L = s.num_beams;
  const double bc = s.carrier_width_hz;
  const double fallback = probe_power(s, p_prev);

  std::vector<std::vector<double>> pw(K, std::vector<double>(L));
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < L; ++l) pw[k][l] = p_prev[k][l] > 0.0 ? p_prev[k][l] : fallback;

  std::vector<double> xf(static_cast<std::size_t>(K) * L, 0.5);
  auto idx = [L](int k, int l) { return static_cast<std::size_t>(k) * L + l; };

  auto eval = [&](const std::vector<double>& v, std::vector<double>* cap_out) {
    std::vector<double> c(L, 0.0);
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < L; ++l) {
        double sig = s.gain[l][l] * pw[k][l] * v[idx(k, l)];
        if (sig <= 0.0) continue;
        double interference = 0.0;
        for (int m = 0; m < L; ++m)
          if (m != l) interference += s.gain[l][m] * pw[k][m] * v[idx(k, m)];
        c[l] += bc * std::log2(1.0 + sig / (interference + s.noise_w[l]));
      }
    }
    double f = 0.0;
    for (int l = 0; l < L; ++l) f += std::min(c[l] - s.demands_bps[l], 0.0);
    if (cap_out) *cap_out = std::move(c);
    return f;
  };

  std::vector<double> cap;
  double f = eval(xf, &cap);
  std::vector<double> grad(xf.size()), cand(xf.size());
  double step = 0.0;
  for (int it = 0; it < 200; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int l = 0; l < L; ++l) {
      if (cap[l] >= s.demands_bps[l]) continue;  // flat branch of min{., 0}
      for (int k = 0; k < K; ++k) {
        double sig = s.gain[l][l] * pw[k][l] * xf[idx(k, l)];
        double interference = 0.0;
        for (int m = 0; m < L; ++m)
          if (m != l) interference += s.gain[l][m] * pw[k][m] * xf[idx(k, m)];
        double denom = interference + s.noise_w[l];
        grad[idx(k, l)] += bc / kLn2 * s.gain[l][l] * pw[k][l] / (denom + sig);
        for (int m = 0; m < L; ++m) {
          if (m == l) continue;
          grad[idx(k, m)] -= bc / kLn2 * sig * s.gain[l][m] * pw[k][m] /
                             (denom * (denom + sig));
        }
      }
    }
    double gnorm2 = 0.0;
    for (double g : grad) gnorm2 += g * g;
    if (gnorm2 <= 0.0) break;
    if (step <= 0.0) step = 0.25 / std::sqrt(gnorm2) * std::sqrt(static_cast<double>(xf.size()));

    double t = step * 2.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t i = 0; i < xf.size(); ++i)
        cand[i] = std::clamp(xf[i] + t * grad[i], 0.0, 1.0);
      double fc = eval(cand, nullptr);
      if (fc > f) {
        double gain = fc - f;
        xf = cand;
        f = fc;
        eval(xf, &cap);
        step = t;
        accepted = true;
        if (gain <= 1e-12 * (1.0 + std::fabs(f))) it = 200;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }

  // Round by descending fractional value, subject to transponder caps.
  struct Slot {
    double frac;
    int k, l;
  };
  std::vector<Slot> order;
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < L; ++l) order.push_back({xf[idx(k, l)], k, l});
  std::sort(order.begin(), order.end(), [](const Slot& a, const Slot& b) {
    if (a.frac != b.frac) return a.frac > b.frac;
    if (a.k != b.k) return a.k < b.k;
    return a.l < b.l;
  });
  std::vector<std::vector<std::uint8_t>> x(K, std::vector<std::uint8_t>(L, 0));
  std::vector<int> cap_used(s.transponders.size(), 0);
  for (const auto& sl : order) {
    if (sl.frac < 0.5) break;
    int t = s.transponder_of(sl.l);
    if (t >= 0 && cap_used[t] >= s.transponders[t].carrier_cap) continue;
    x[sl.k][sl.l] = 1;
    if (t >= 0) ++cap_used[t];
  }
  return x;
}

}  // namespace

std::string SolveResult::trace_csv() const {
  std::string out = "iter,usc_bps,assignment_changes\n";
  for (const auto& r : trace)
    out += std::to_string(r.iter) + "," + format_double(r.usc_bps) + "," +
           std::to_string(r.assignment_changes) + "\n";
  return out;
}

int default_color_count(const Scenario& s) {
  int best = 1;
  for (int d = 1; d <= s.num_carriers; ++d)
    if (s.num_carriers % d == 0 && d <= s.num_beams) best = d;
  return best;
}

AllocationPlan coloring_baseline(const Scenario& s, int n_colors) {
  const int K = s.num_carriers;
  const int L = s.num_beams;
  if (n_colors < 1 || n_colors > K)
    throw ValidationError("n_colors", "must lie in [1, k_carriers]");
  if (K % n_colors != 0)
    throw ValidationError("n_colors", "must divide k_carriers");

  // Greedy coloring: each beam takes the color maximizing its minimum
  // distance to beams already holding that color; ties go to lower colors.
  std::vector<int> color(L, 0);
  std::vector<std::vector<int>> members(n_colors);
  for (int l = 0; l < L; ++l) {
    int best_c = 0;
    double best_d = -1.0;
    for (int c = 0; c < n_colors; ++c) {
      double d = std::numeric_limits<double>::infinity();
      for (int other : members[c]) {
        double dx = s.beam_centers[l][0] - s.beam_centers[other][0];
        double dy = s.beam_centers[l][1] - s.beam_centers[other][1];
        d = std::min(d, std::hypot(dx, dy));
      }
      if (d > best_d) {
        best_d = d;
        best_c = c;
      }
    }
    color[l] = best_c;
    members[best_c].push_back(l);
  }

  const int block = K / n_colors;
  AllocationPlan plan = AllocationPlan::zeros(K, L);
  for (int l = 0; l < L; ++l)
    for (int k = color[l] * block; k < (color[l] + 1) * block; ++k) plan.x[k][l] = 1;

  // Trim transponder carrier overages deterministically (highest carrier,
  // then highest beam first).
  for (std::size_t t = 0; t < s.transponders.size(); ++t) {
    const auto& tr = s.transponders[t];
    int used = 0;
    for (int b : tr.beams)
      for (int k = 0; k < K; ++k) used += plan.x[k][b];
    for (int k = K - 1; k >= 0 && used > tr.carrier_cap; --k) {
      std::vector<int> beams_sorted(tr.beams);
      std::sort(beams_sorted.rbegin(), beams_sorted.rend());
      for (int b : beams_sorted) {
        if (used <= tr.carrier_cap) break;
        if (plan.x[k][b]) {
          plan.x[k][b] = 0;
          --used;
        }
      }
    }
  }

  uniform_power(s, plan);
  return plan;
}

void uniform_power(const Scenario& s, AllocationPlan& plan) {
  int slots = 0;
  for (int k = 0; k < s.num_carriers; ++k)
    for (int l = 0; l < s.num_beams; ++l) slots += plan.x[k][l];
  if (slots == 0) throw ValidationError("plan.x", "no carrier assigned anywhere");
  const double each = s.total_power_w / slots;
  for (int k = 0; k < s.num_carriers; ++k)
    for (int l = 0; l < s.num_beams; ++l) plan.p_w[k][l] = plan.x[k][l] ? each : 0.0;

  for (const auto& tr : s.transponders) {
    double sum = 0.0;
    for (int b : tr.beams)
      for (int k = 0; k < s.num_carriers; ++k) sum += plan.p_w[k][b];
    if (sum > tr.power_cap_w) {
      double f = tr.power_cap_w / sum;
      for (int b : tr.beams)
        for (int k = 0; k < s.num_carriers; ++k) plan.p_w[k][b] *= f;
    }
  }
}

std::vector<std::vector<double>> sca_power(const Scenario& s,
                                           const std::vector<std::vector<std::uint8_t>>& x,
                                           const std::vector<std::vector<double>>& p_init,
                                           const SolverOptions& opts,
                                           std::vector<double>* objective_trace) {
  if (opts.sca_max_iters < 1) throw ValidationError("sca_max_iters", "must be >= 1");
  if (!(opts.sca_tolerance > 0.0)) throw ValidationError("sca_tolerance", "must be positive");

  SlotContext ctx = SlotContext::build(s, x);
  // Feasibility of the starting point (C1/C2, powers only on assigned slots).
  double rogue = 0.0;
  for (int k = 0; k < s.num_carriers; ++k)
    for (int l = 0; l < s.num_beams; ++l) {
      if (p_init[k][l] < 0.0) throw ValidationError("p_init", "negative power");
      if (!x[k][l]) rogue += p_init[k][l];
    }
  if (rogue > 0.0) throw ValidationError("p_init", "power on unassigned carriers");
  std::vector<double> q = ctx.gather(p_init);
  for (const auto& g : ctx.groups) {
    double sum = 0.0;
    for (int i : g.slots) sum += q[i];
    if (sum > g.cap * (1.0 + 1e-9)) throw ValidationError("p_init", "power cap exceeded");
  }

  double f = ctx.usc_of(q);
  if (objective_trace) objective_trace->push_back(f);
  if (ctx.slots.empty()) return ctx.scatter(q);

  std::vector<double> a(ctx.slots.size());
  for (int it = 0; it < opts.sca_max_iters; ++it) {
    // Freeze each slot's interference at the current iterate.
    for (std::size_t i = 0; i < ctx.slots.size(); ++i) {
      auto [k, l] = ctx.slots[i];
      double interference = 0.0;
      for (int j : ctx.carrier_slots[k]) {
        int m = ctx.slots[j].second;
        if (m != l) interference += s.gain[l][m] * q[j];
      }
      a[i] = s.gain[l][l] / (interference + s.noise_w[l]);
    }
    std::vector<double> prop = maximize_surrogate(ctx, a, q, 300);

    // The freeze is not a strict minorizer; damp the step until the true
    // objective does not regress.
    double t = 1.0;
    double fbest = f;
    std::vector<double> qbest = q;
    for (int bt = 0; bt < 12; ++bt) {
      std::vector<double> cand(q.size());
      for (std::size_t i = 0; i < q.size(); ++i) cand[i] = q[i] + t * (prop[i] - q[i]);
      double fc = ctx.usc_of(cand);
      if (fc > fbest) {
        fbest = fc;
        qbest = std::move(cand);
        break;
      }
      t *= 0.5;
    }
    double rel = (fbest - f) / std::max(1.0, std::fabs(f));
    q = std::move(qbest);
    f = fbest;
    if (objective_trace) objective_trace->push_back(f);
    if (rel < opts.sca_tolerance) break;
  }
  return ctx.scatter(q);
}

std::vector<std::vector<std::uint8_t>> assign_carriers(
    const Scenario& s, const std::vector<std::vector<double>>& p_prev, RelaxationMode mode) {
  return mode == RelaxationMode::BinaryHungarian ? assign_hungarian(s, p_prev)
                                                 : assign_continuous(s, p_prev);
}

double plan_usc(const Scenario& s, const AllocationPlan& plan) {
  return usc(offered_capacity(s, plan), s.demands_bps);
}

SolveResult alternating_solve(const Scenario& s, const SolverOptions& opts) {
  if (opts.max_outer_iters < 1) throw ValidationError("max_outer_iters", "must be >= 1");

  SolveResult result;
  AllocationPlan cur = coloring_baseline(s, default_color_count(s));
  {
    std::vector<double> trace0;
    auto p = sca_power(s, cur.x, cur.p_w, opts, &trace0);
    cur.p_w = std::move(p);
    result.sca_traces.push_back(std::move(trace0));
  }
  double best_usc = plan_usc(s, cur);
  result.plan = cur;
  result.trace.push_back({0, best_usc, 0});

  for (int it = 1; it <= opts.max_outer_iters; ++it) {
    auto x_new = assign_carriers(s, cur.p_w, opts.relaxation_mode);
    int changes = 0;
    for (int k = 0; k < s.num_carriers; ++k)
      for (int l = 0; l < s.num_beams; ++l) changes += (x_new[k][l] != cur.x[k][l]);

    // Carry surviving powers over; seed uniformly when nothing survives.
    AllocationPlan next = AllocationPlan::zeros(s.num_carriers, s.num_beams);
    next.x = x_new;
    double carried = 0.0;
    int slots = 0;
    for (int k = 0; k < s.num_carriers; ++k)
      for (int l = 0; l < s.num_beams; ++l) {
        slots += x_new[k][l];
        if (x_new[k][l] && cur.x[k][l]) {
          next.p_w[k][l] = cur.p_w[k][l];
          carried += cur.p_w[k][l];
        }
      }
    if (slots > 0 && carried <= 0.0) uniform_power(s, next);

    std::vector<double> sca_trace;
    if (slots > 0) next.p_w = sca_power(s, next.x, next.p_w, opts, &sca_trace);
    result.sca_traces.push_back(std::move(sca_trace));

    double f = slots > 0 ? plan_usc(s, next) : -std::numeric_limits<double>::infinity();
    double rel = (f - best_usc) / std::max(1.0, std::fabs(best_usc));
    if (f > best_usc) {
      best_usc = f;
      result.plan = next;
    }
    result.trace.push_back({it, best_usc, changes});
    cur = std::move(next);
    if (changes == 0 && rel < opts.sca_tolerance) break;
  }
  validate_plan(s, result.plan);
  return result;
}

AllocationPlan brute_force_plan(const Scenario& s, int grid_levels) {
  const int K = s.num_carriers;
  const int L = s.num_beams;
  if (K * L > 9)
    throw GuardRailError("brute_force_plan: K*L = " + std::to_string(K * L) +
                         " exceeds the guard rail of 9");
  if (grid_levels < 1 || grid_levels > 5)
    throw GuardRailError("brute_force_plan: grid levels must lie in [1, 5]");

  const double quantum = s.total_power_w / grid_levels;
  const int n_slots_all = K * L;

  double best_usc = -std::numeric_limits<double>::infinity();
  double best_power = std::numeric_limits<double>::infinity();
  std::vector<std::uint8_t> best_xflat;
  AllocationPlan best_plan = AllocationPlan::zeros(K, L);
  bool have_best = false;

  std::vector<std::uint8_t> xflat(n_slots_all);
  const double usc_tie = 1e-12;

  for (std::uint32_t mask = 0; mask < (1u << n_slots_all); ++mask) {
    for (int i = 0; i < n_slots_all; ++i) xflat[i] = (mask >> i) & 1u;

    std::vector<std::vector<std::uint8_t>> x(K, std::vector<std::uint8_t>(L, 0));
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l) x[k][l] = xflat[k * L + l];

    bool cap_ok = true;
    for (const auto& tr : s.transponders) {
      int used = 0;
      for (int b : tr.beams)
        for (int k = 0; k < K; ++k) used += x[k][b];
      if (used > tr.carrier_cap) {
        cap_ok = false;
        break;
      }
    }
    if (!cap_ok) continue;

    SlotContext ctx = SlotContext::build(s, x);
    const int S = static_cast<int>(ctx.slots.size());
    std::vector<int> counts(S, 0);
    std::vector<double> q(S, 0.0);

    // All compositions with sum(counts) <= grid_levels, in lexicographic
    // order so the first optimum found is also the tie-broken one.
    std::function<void(int, int)> rec = [&](int i, int budget) {
      if (i == S) {
        for (int j = 0; j < S; ++j) q[j] = counts[j] * quantum;
        for (const auto& g : ctx.groups) {
          double sum = 0.0;
          for (int idx : g.slots) sum += q[idx];
          if (sum > g.cap * (1.0 + 1e-12)) return;
        }
        double f = ctx.usc_of(q);
        double total = 0.0;
        for (double v : q) total += v;

        double tie = usc_tie * (1.0 + std::fabs(best_usc));
        bool better = false;
        if (!have_best || f > best_usc + tie) {
          better = true;
        } else if (f > best_usc - tie) {
          if (total < best_power - usc_tie * (1.0 + best_power)) {
            better = true;
          } else if (total < best_power + usc_tie * (1.0 + best_power) &&
                     xflat < best_xflat) {
            better = true;
          }
        }
        if (better) {
          have_best = true;
          best_usc = f;
          best_power = total;
          best_xflat = xflat;
          best_plan.x = x;
          best_plan.p_w = ctx.scatter(q);
        }
        return;
      }
      for (int c = 0; c <= budget; ++c) {
        counts[i] = c;
        rec(i + 1, budget - c);
      }
      counts[i] = 0;
    };
    rec(0, grid_levels);
  }
  return best_plan;
}

}  // namespace satrrm
