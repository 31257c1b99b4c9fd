// SPDX-License-Identifier: Apache-2.0
#include "satrrm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "satrrm/errors.hpp"
#include "satrrm/json_io.hpp"

namespace satrrm {

AllocationPlan AllocationPlan::zeros(int num_carriers, int num_beams) {
  AllocationPlan p;
  p.x.assign(num_carriers, std::vector<std::uint8_t>(num_beams, 0));
  p.p_w.assign(num_carriers, std::vector<double>(num_beams, 0.0));
  return p;
}

std::string AllocationPlan::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("x").begin_array();
  for (const auto& row : x) {
    w.begin_array();
    for (std::uint8_t v : row) w.value(static_cast<int>(v));
    w.end_array();
  }
  w.end_array();
  w.key("p_w").begin_array();
  for (const auto& row : p_w) w.number_array(row);
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

AllocationPlan AllocationPlan::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("plan", std::string("JSON parse error: ") + e.what());
  }
  AllocationPlan plan;
  try {
    for (const auto& row : doc.at("x")) {
      std::vector<std::uint8_t> r;
      for (const auto& v : row) {
        int b = v.get<int>();
        if (b != 0 && b != 1) throw ValidationError("plan.x", "entries must be 0 or 1");
        r.push_back(static_cast<std::uint8_t>(b));
      }
      plan.x.push_back(std::move(r));
    }
    for (const auto& row : doc.at("p_w")) {
      std::vector<double> r;
      for (const auto& v : row) r.push_back(v.get<double>());
      plan.p_w.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("plan", std::string("schema error: ") + e.what());
  }
  return plan;
}

void validate_plan(const Scenario& s, const AllocationPlan& plan, double rel_tol) {
  const int K = s.num_carriers;
  const int L = s.num_beams;
  if (static_cast<int>(plan.x.size()) != K || static_cast<int>(plan.p_w.size()) != K)
    throw ValidationError("plan", "carrier dimension mismatch with scenario");
  const double slack = rel_tol * s.total_power_w;

  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    if (static_cast<int>(plan.x[k].size()) != L || static_cast<int>(plan.p_w[k].size()) != L)
      throw ValidationError("plan", "beam dimension mismatch with scenario");
    for (int l = 0; l < L; ++l) {
      if (plan.x[k][l] != 0 && plan.x[k][l] != 1)
        throw ValidationError("plan.x", "entries must be 0 or 1");
      double p = plan.p_w[k][l];
      if (!(p >= 0.0) || !std::isfinite(p))
        throw ValidationError("plan.p_w", "powers must be finite and non-negative");
      if (p > 0.0 && plan.x[k][l] == 0)
        throw ValidationError("plan.p_w", "power on an unassigned carrier (k=" +
                                              std::to_string(k) + ", l=" + std::to_string(l) + ")");
      total += p;
    }
  }
  if (total > s.total_power_w + slack)
    throw ValidationError("plan.p_w", "total power exceeds p_total_w");

  for (std::size_t t = 0; t < s.transponders.size(); ++t) {
    const auto& tr = s.transponders[t];
    double pt = 0.0;
    int slots = 0;
    for (int b : tr.beams) {
      for (int k = 0; k < K; ++k) {
        pt += plan.p_w[k][b];
        slots += plan.x[k][b];
      }
    }
    if (pt > tr.power_cap_w + slack)
      throw ValidationError("plan.p_w",
                            "transponder " + std::to_string(tr.id) + " power cap exceeded");
    if (slots > tr.carrier_cap)
      throw ValidationError("plan.x",
                            "transponder " + std::to_string(tr.id) + " carrier cap exceeded");
  }
}

double sinr(const Scenario& s, const AllocationPlan& plan, int beam, int carrier) {
  if (beam < 0 || beam >= s.num_beams) throw std::out_of_range("beam index out of range");
  if (carrier < 0 || carrier >= s.num_carriers)
    throw std::out_of_range("carrier index out of range");
  if (plan.x[carrier][beam] == 0) return 0.0;
  double interference = 0.0;
  for (int m = 0; m < s.num_beams; ++m) {
    if (m == beam) continue;
    if (plan.x[carrier][m]) interference += s.gain[beam][m] * plan.p_w[carrier][m];
  }
  return s.gain[beam][beam] * plan.p_w[carrier][beam] / (interference + s.noise_w[beam]);
}

std::vector<double> offered_capacity(const Scenario& s, const AllocationPlan& plan) {
  std::vector<double> c(s.num_beams, 0.0);
  for (int l = 0; l < s.num_beams; ++l)
    for (int k = 0; k < s.num_carriers; ++k)
      c[l] += s.carrier_width_hz * std::log2(1.0 + sinr(s, plan, l, k));
  return c;
}

namespace {
void check_lengths(const std::vector<double>& c, const std::vector<double>& d) {
  if (c.size() != d.size())
    throw ValidationError("metrics", "capacity and demand vectors differ in length");
}
}  // namespace

double usc(const std::vector<double>& capacity, const std::vector<double>& demand) {
  check_lengths(capacity, demand);
  double acc = 0.0;
  for (std::size_t l = 0; l < capacity.size(); ++l)
    acc += std::min(capacity[l] - demand[l], 0.0);
  return acc;
}

double mmse(const std::vector<double>& capacity, const std::vector<double>& demand) {
  check_lengths(capacity, demand);
  double acc = 0.0;
  for (std::size_t l = 0; l < capacity.size(); ++l) {
    double d = capacity[l] - demand[l];
    acc += d * d;
  }
  return acc / static_cast<double>(capacity.size());
}

double min_ratio(const std::vector<double>& capacity, const std::vector<double>& demand) {
  check_lengths(capacity, demand);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < capacity.size(); ++l) {
    if (!(demand[l] > 0.0))
      throw ValidationError("demands[" + std::to_string(l) + "]",
                            "min_ratio requires positive demand");
    best = std::min(best, capacity[l] / demand[l]);
  }
  return best;
}

MetricsReport MetricsReport::compute(const Scenario& s, const AllocationPlan& plan) {
  MetricsReport r;
  r.demands_bps = s.demands_bps;
  r.offered_bps = offered_capacity(s, plan);
  r.usc_bps = usc(r.offered_bps, r.demands_bps);
  r.mmse_value = mmse(r.offered_bps, r.demands_bps);
  // Zero-demand beams are trivially satisfied; they are skipped in the
  // min-ratio so the report stays defined for them.
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < s.num_beams; ++l) {
    double ratio = r.demands_bps[l] > 0.0 ? r.offered_bps[l] / r.demands_bps[l] : 1.0;
    r.satisfaction.push_back(ratio);
    if (r.demands_bps[l] > 0.0) best = std::min(best, ratio);
  }
  r.min_ratio_value = std::isfinite(best) ? best : 1.0;
  return r;
}

std::string MetricsReport::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("beams").begin_array();
  for (std::size_t l = 0; l < demands_bps.size(); ++l) {
    w.begin_object();
    w.key("beam").value(static_cast<int>(l));
    w.key("demand_bps").value(demands_bps[l]);
    w.key("offered_bps").value(offered_bps[l]);
    w.key("satisfaction").value(satisfaction[l]);
    w.end_object();
  }
  w.end_array();
  w.key("usc_bps").value(usc_bps);
  w.key("mmse").value(mmse_value);
  w.key("min_ratio").value(min_ratio_value);
  w.end_object();
  return w.str() + "\n";
}

std::string MetricsReport::to_csv() const {
  std::string out = "beam,demand_bps,offered_bps,satisfaction,usc_bps,mmse,min_ratio\n";
  double dsum = 0.0, csum = 0.0;
  for (std::size_t l = 0; l < demands_bps.size(); ++l) {
    dsum += demands_bps[l];
    csum += offered_bps[l];
    out += std::to_string(l) + "," + format_double(demands_bps[l]) + "," +
           format_double(offered_bps[l]) + "," + format_double(satisfaction[l]) + ",,,\n";
  }
  out += "summary," + format_double(dsum) + "," + format_double(csum) + "," +
         format_double(min_ratio_value) + "," + format_double(usc_bps) + "," +
         format_double(mmse_value) + "," + format_double(min_ratio_value) + "\n";
  return out;
}

}  // namespace satrrm
