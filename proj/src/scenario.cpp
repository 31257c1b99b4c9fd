// SPDX-License-Identifier: Apache-2.0
#include "satrrm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "satrrm/errors.hpp"
#include "satrrm/json_io.hpp"
#include "satrrm/prng.hpp"

namespace satrrm {

namespace {

constexpr double kBoltzmann = 1.380649e-23;  // J/K
constexpr double kFourLn2 = 2.772588722239781;

double distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

double beam_gain(const BeamModel& model, double d) {
  return model.peak_gain *
         std::exp(-kFourLn2 * d * d / (model.theta_3db * model.theta_3db));
}

int Scenario::transponder_of(int beam) const {
  for (std::size_t t = 0; t < transponders.size(); ++t) {
    const auto& b = transponders[t].beams;
    if (std::find(b.begin(), b.end(), beam) != b.end()) return static_cast<int>(t);
  }
  return -1;
}

void validate_scenario(const Scenario& s) {
  const int L = s.num_beams;
  if (L < 1) throw ValidationError("beams", "need at least one beam");
  if (static_cast<int>(s.beam_ids.size()) != L ||
      static_cast<int>(s.demands_bps.size()) != L ||
      static_cast<int>(s.users_per_beam.size()) != L ||
      static_cast<int>(s.noise_w.size()) != L ||
      static_cast<int>(s.beam_centers.size()) != L)
    throw ValidationError("beams", "per-beam field length != number of beams");

  std::set<int> ids(s.beam_ids.begin(), s.beam_ids.end());
  if (static_cast<int>(ids.size()) != L)
    throw ValidationError("beams.id", "duplicate beam id");

  for (int l = 0; l < L; ++l) {
    if (!(s.demands_bps[l] >= 0.0) || !std::isfinite(s.demands_bps[l]))
      throw ValidationError("beams[" + std::to_string(l) + "].demand_bps",
                            "must be finite and non-negative");
    if (s.users_per_beam[l] < 1)
      throw ValidationError("beams[" + std::to_string(l) + "].users",
                            "must be a positive integer");
    if (!(s.noise_w[l] > 0.0) || !std::isfinite(s.noise_w[l]))
      throw ValidationError("beams[" + std::to_string(l) + "].noise_w",
                            "must be finite and positive");
  }

  if (static_cast<int>(s.gain.size()) != L)
    throw ValidationError("gain_matrix", "must be L x L");
  for (int l = 0; l < L; ++l) {
    if (static_cast<int>(s.gain[l].size()) != L)
      throw ValidationError("gain_matrix", "row " + std::to_string(l) + " has wrong length");
    for (int m = 0; m < L; ++m) {
      double g = s.gain[l][m];
      if (!(g >= 0.0) || !std::isfinite(g))
        throw ValidationError(
            "gain_matrix[" + std::to_string(l) + "][" + std::to_string(m) + "]",
            "must be finite and non-negative");
    }
    for (int m = 0; m < L; ++m) {
      if (m != l && s.gain[l][m] > s.gain[l][l])
        throw ValidationError(
            "gain_matrix[" + std::to_string(l) + "][" + std::to_string(m) + "]",
            "violates diagonal dominance (own-beam gain must be largest in its row)");
    }
  }

  if (!(s.total_bandwidth_hz > 0.0))
    throw ValidationError("spectrum.b_total_hz", "must be positive");
  if (s.num_carriers < 1)
    throw ValidationError("spectrum.k_carriers", "must be a positive integer");
  // Exact-division rule: B_c * K must reproduce B_total bit-for-bit.
  if (s.carrier_width_hz * s.num_carriers != s.total_bandwidth_hz)
    throw ValidationError("spectrum.b_total_hz",
                          "not exactly divisible by k_carriers");
  if (!(s.total_power_w > 0.0))
    throw ValidationError("power.p_total_w", "must be positive");

  if (!s.transponders.empty()) {
    std::vector<int> owner(L, -1);
    double cap_sum = 0.0;
    for (std::size_t t = 0; t < s.transponders.size(); ++t) {
      const auto& tr = s.transponders[t];
      if (!(tr.power_cap_w > 0.0))
        throw ValidationError("power.transponders[" + std::to_string(t) + "].p_cap_w",
                              "must be positive");
      if (tr.carrier_cap < 1)
        throw ValidationError("power.transponders[" + std::to_string(t) + "].k_cap",
                              "must be a positive integer");
      cap_sum += tr.power_cap_w;
      for (int b : tr.beams) {
        if (b < 0 || b >= L)
          throw ValidationError("power.transponders", "beam index out of range");
        if (owner[b] != -1)
          throw ValidationError("beams[" + std::to_string(b) + "].transponder",
                                "beam assigned to more than one transponder");
        owner[b] = static_cast<int>(t);
      }
    }
    for (int l = 0; l < L; ++l)
      if (owner[l] == -1)
        throw ValidationError("beams[" + std::to_string(l) + "].transponder",
                              "transponder map must cover every beam exactly once");
    if (cap_sum > s.total_power_w * (1.0 + 1e-12))
      throw ValidationError("power.transponders",
                            "transponder power caps sum to more than p_total_w");
  }

  if (s.rain_margin_db < 0.0)
    throw ValidationError("rain_margin_db", "must be non-negative");
}

Scenario load_scenario(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("document", std::string("JSON parse error: ") + e.what());
  }

  Scenario s;
  try {
    const auto& beams = doc.at("beams");
    s.num_beams = static_cast<int>(beams.size());
    std::vector<std::pair<int, int>> tr_of_beam;  // (beam, transponder id)
    for (int l = 0; l < s.num_beams; ++l) {
      const auto& b = beams.at(l);
      s.beam_ids.push_back(b.at("id").get<int>());
      const auto& c = b.at("center");
      s.beam_centers.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
      s.demands_bps.push_back(b.at("demand_bps").get<double>());
      s.users_per_beam.push_back(b.at("users").get<int>());
      s.noise_w.push_back(b.at("noise_w").get<double>());
      if (b.contains("transponder"))
        tr_of_beam.emplace_back(l, b.at("transponder").get<int>());
    }

    const auto& g = doc.at("gain_matrix");
    for (const auto& row : g) {
      std::vector<double> r;
      for (const auto& v : row) r.push_back(v.get<double>());
      s.gain.push_back(std::move(r));
    }

    const auto& spectrum = doc.at("spectrum");
    s.total_bandwidth_hz = spectrum.at("b_total_hz").get<double>();
    s.num_carriers = spectrum.at("k_carriers").get<int>();
    if (s.num_carriers >= 1) s.carrier_width_hz = s.total_bandwidth_hz / s.num_carriers;

    const auto& power = doc.at("power");
    s.total_power_w = power.at("p_total_w").get<double>();
    if (power.contains("transponders")) {
      for (const auto& t : power.at("transponders")) {
        TransponderGroup tr;
        tr.id = t.at("id").get<int>();
        tr.power_cap_w = t.at("p_cap_w").get<double>();
        tr.carrier_cap = t.at("k_cap").get<int>();
        s.transponders.push_back(std::move(tr));
      }
    }
    for (auto [beam, tid] : tr_of_beam) {
      bool found = false;
      for (auto& tr : s.transponders) {
        if (tr.id == tid) {
          tr.beams.push_back(beam);
          found = true;
          break;
        }
      }
      if (!found)
        throw ValidationError("beams[" + std::to_string(beam) + "].transponder",
                              "references unknown transponder id " + std::to_string(tid));
    }
    if (!s.transponders.empty() && tr_of_beam.size() != static_cast<std::size_t>(s.num_beams))
      throw ValidationError("beams.transponder",
                            "transponder map must cover every beam exactly once");

    if (doc.contains("rain_margin_db"))
      s.rain_margin_db = doc.at("rain_margin_db").get<double>();
    if (doc.contains("beam_model")) {
      const auto& m = doc.at("beam_model");
      BeamModel bm;
      bm.peak_gain = m.at("g_peak").get<double>();
      bm.theta_3db = m.at("theta_3db").get<double>();
      bm.user_radius = m.at("user_radius").get<double>();
      if (!(bm.peak_gain > 0.0) || !(bm.theta_3db > 0.0) || !(bm.user_radius >= 0.0))
        throw ValidationError("beam_model", "invalid beam model parameters");
      s.beam_model = bm;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("document", std::string("schema error: ") + e.what());
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  return load_scenario(read_text_file(path));
}

std::string save_scenario(const Scenario& s) {
  JsonWriter w;
  w.begin_object();
  w.key("beams").begin_array();
  for (int l = 0; l < s.num_beams; ++l) {
    w.begin_object();
    w.key("id").value(s.beam_ids[l]);
    w.key("center").begin_array().value(s.beam_centers[l][0]).value(s.beam_centers[l][1]).end_array();
    w.key("demand_bps").value(s.demands_bps[l]);
    w.key("users").value(s.users_per_beam[l]);
    w.key("noise_w").value(s.noise_w[l]);
    int t = s.transponder_of(l);
    if (t >= 0) w.key("transponder").value(s.transponders[t].id);
    w.end_object();
  }
  w.end_array();
  w.key("gain_matrix").begin_array();
  for (const auto& row : s.gain) w.number_array(row);
  w.end_array();
  w.key("spectrum").begin_object();
  w.key("b_total_hz").value(s.total_bandwidth_hz);
  w.key("k_carriers").value(s.num_carriers);
  w.end_object();
  w.key("power").begin_object();
  w.key("p_total_w").value(s.total_power_w);
  if (!s.transponders.empty()) {
    w.key("transponders").begin_array();
    for (const auto& t : s.transponders) {
      w.begin_object();
      w.key("id").value(t.id);
      w.key("p_cap_w").value(t.power_cap_w);
      w.key("k_cap").value(t.carrier_cap);
      w.end_object();
    }
    w.end_array();
  }
  w.end_object();
  w.key("rain_margin_db").value(s.rain_margin_db);
  if (s.beam_model) {
    w.key("beam_model").begin_object();
    w.key("g_peak").value(s.beam_model->peak_gain);
    w.key("theta_3db").value(s.beam_model->theta_3db);
    w.key("user_radius").value(s.beam_model->user_radius);
    w.end_object();
  }
  w.end_object();
  return w.str() + "\n";
}

std::vector<std::array<double, 2>> hex_centers(int count, double spacing) {
  // Axial-coordinate spiral: center cell, then rings of 6r cells each.
  std::vector<std::array<double, 2>> out;
  out.reserve(count);
  auto push = [&](int q, int r) {
    out.push_back({spacing * (q + 0.5 * r), spacing * (0.8660254037844386 * r)});
  };
  push(0, 0);
  static const int dirs[6][2] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};
  for (int ring = 1; static_cast<int>(out.size()) < count; ++ring) {
    int q = -ring, r = ring;  // start one step along direction 4 from origin
    for (int side = 0; side < 6 && static_cast<int>(out.size()) < count; ++side) {
      for (int step = 0; step < ring && static_cast<int>(out.size()) < count; ++step) {
        push(q, r);
        q += dirs[side][0];
        r += dirs[side][1];
      }
    }
  }
  return out;
}

Scenario generate_scenario(const GeneratorParams& params, std::uint64_t seed) {
  if (params.num_beams < 1) throw ValidationError("num_beams", "must be >= 1");
  if (!(params.grid_spacing > 0.0)) throw ValidationError("grid_spacing", "must be positive");
  if (!(params.theta_3db > 0.0)) throw ValidationError("theta_3db", "must be positive");
  if (!(params.demand_min_bps > 0.0) || params.demand_max_bps < params.demand_min_bps)
    throw ValidationError("demand_range", "need 0 < min <= max");
  if (params.users_per_beam < 1) throw ValidationError("users_per_beam", "must be >= 1");
  if (params.num_carriers < 1) throw ValidationError("num_carriers", "must be >= 1");
  if (!(params.carrier_width_hz > 0.0))
    throw ValidationError("carrier_width_hz", "must be positive");
  if (!(params.total_power_w > 0.0)) throw ValidationError("total_power_w", "must be positive");
  if (!(params.noise_temp_k > 0.0)) throw ValidationError("noise_temp_k", "must be positive");
  if (!(params.user_radius_frac >= 0.0) || params.user_radius_frac >= 0.5)
    throw ValidationError("user_radius_frac",
                          "must lie in [0, 0.5) to preserve own-beam dominance");
  if (params.rain_margin_db < 0.0)
    throw ValidationError("rain_margin_db", "must be non-negative");
  if (params.transponder_size < 0 || params.transponder_size > params.num_beams)
    throw ValidationError("transponder_size", "must lie in [0, num_beams]");
  if (!(params.transponder_carrier_frac > 0.0) || params.transponder_carrier_frac > 1.0)
    throw ValidationError("transponder_carrier_frac", "must lie in (0, 1]");

  const int L = params.num_beams;
  Rng rng(seed);

  Scenario s;
  s.num_beams = L;
  s.num_carriers = params.num_carriers;
  s.carrier_width_hz = params.carrier_width_hz;
  s.total_bandwidth_hz = params.carrier_width_hz * params.num_carriers;
  s.total_power_w = params.total_power_w;
  s.rain_margin_db = params.rain_margin_db;
  s.beam_centers = hex_centers(L, params.grid_spacing);

  BeamModel model;
  model.peak_gain = std::pow(10.0, params.peak_gain_db / 10.0);
  model.theta_3db = params.theta_3db;
  model.user_radius = params.user_radius_frac * params.grid_spacing;
  s.beam_model = model;

  const double rain = std::pow(10.0, -params.rain_margin_db / 10.0);
  const double noise = kBoltzmann * params.noise_temp_k * params.carrier_width_hz;

  // Draw order is part of the determinism contract: demands first, then one
  // super-user offset per beam.
  for (int l = 0; l < L; ++l) {
    s.beam_ids.push_back(l);
    s.demands_bps.push_back(rng.log_uniform(params.demand_min_bps, params.demand_max_bps));
    s.users_per_beam.push_back(params.users_per_beam);
    s.noise_w.push_back(noise);
  }

  std::vector<std::array<double, 2>> super_user(L);
  for (int l = 0; l < L; ++l) {
    double angle = rng.uniform(0.0, 6.283185307179586);
    double radius = model.user_radius * std::sqrt(rng.next_double());
    super_user[l] = {s.beam_centers[l][0] + radius * std::cos(angle),
                     s.beam_centers[l][1] + radius * std::sin(angle)};
  }

  s.gain.assign(L, std::vector<double>(L, 0.0));
  for (int l = 0; l < L; ++l)
    for (int m = 0; m < L; ++m)
      s.gain[l][m] = beam_gain(model, distance(super_user[l], s.beam_centers[m])) * rain;

  if (params.transponder_size > 0) {
    int tid = 0;
    for (int start = 0; start < L; start += params.transponder_size) {
      TransponderGroup tr;
      tr.id = tid++;
      for (int b = start; b < std::min(L, start + params.transponder_size); ++b)
        tr.beams.push_back(b);
      tr.power_cap_w = params.total_power_w * static_cast<double>(tr.beams.size()) / L;
      tr.carrier_cap = std::max(
          1, static_cast<int>(std::lround(params.transponder_carrier_frac *
                                          params.num_carriers * tr.beams.size())));
      s.transponders.push_back(std::move(tr));
    }
  }

  validate_scenario(s);
  return s;
}

UserChannelSet generate_user_channels(const Scenario& s, std::uint64_t seed) {
  validate_scenario(s);
  if (!s.beam_model)
    throw ValidationError("beam_model",
                          "scenario carries no beam model; user channels need the gain law");
  const BeamModel& model = *s.beam_model;
  const double rain = std::pow(10.0, -s.rain_margin_db / 10.0);
  const int L = s.num_beams;

  Rng rng(seed);
  UserChannelSet set;
  set.channels.resize(L);
  set.user_positions.resize(L);
  for (int l = 0; l < L; ++l) {
    for (int u = 0; u < s.users_per_beam[l]; ++u) {
      double angle = rng.uniform(0.0, 6.283185307179586);
      double radius = model.user_radius * std::sqrt(rng.next_double());
      std::array<double, 2> pos = {s.beam_centers[l][0] + radius * std::cos(angle),
                                   s.beam_centers[l][1] + radius * std::sin(angle)};
      std::vector<std::complex<double>> h(L);
      for (int m = 0; m < L; ++m) {
        double amp = std::sqrt(beam_gain(model, distance(pos, s.beam_centers[m])) * rain);
        h[m] = amp * rng.unit_phase();
      }
      set.user_positions[l].push_back(pos);
      set.channels[l].push_back(std::move(h));
    }
  }
  return set;
}

}  // namespace satrrm
