// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace satrrm {

/// Payload unit serving a group of beams under shared power/carrier caps.
struct TransponderGroup {
  int id = 0;
  std::vector<int> beams;  // beam indices, not ids
  double power_cap_w = 0.0;
  int carrier_cap = 0;  // max total (carrier, beam) assignments across the group
};

/// Gaussian beam profile: gain(d) = peak_gain * exp(-4 ln2 * d^2 / theta^2).
/// theta_3db is the full width at half maximum, so the -3 dB point sits at
/// d = theta_3db / 2. Free-space loss and antenna gains are folded into
/// peak_gain; the rain margin is applied on top by the generator.
struct BeamModel {
  double peak_gain = 1e-12;  // linear power gain at boresight
  double theta_3db = 0.5;    // FWHM in beam-center coordinate units
  double user_radius = 0.25; // user placement radius around a beam center
};

double beam_gain(const BeamModel& model, double distance);

/// One multibeam downlink instance: L beams with aggregated super-user
/// demands, the inter-beam channel power gain matrix, and the spectrum and
/// power budgets. Immutable after construction; safe to share across threads.
struct Scenario {
  int num_beams = 0;                       // L
  std::vector<int> beam_ids;               // external labels, unique
  std::vector<double> demands_bps;         // D_l >= 0
  std::vector<int> users_per_beam;         // N_l >= 1
  std::vector<std::vector<double>> gain;   // gain[l][m] = g_l[m], linear
  std::vector<double> noise_w;             // per-carrier AWGN power (width B_c)
  double total_bandwidth_hz = 0.0;         // B_total
  int num_carriers = 0;                    // K
  double carrier_width_hz = 0.0;           // B_c = B_total / K, exact
  double total_power_w = 0.0;              // P_total
  std::vector<TransponderGroup> transponders;  // empty when unconstrained
  std::vector<std::array<double, 2>> beam_centers;
  double rain_margin_db = 0.0;             // already folded into gain
  std::optional<BeamModel> beam_model;     // present on generated scenarios

  /// Transponder index owning `beam`, or -1 when no transponder map is set.
  int transponder_of(int beam) const;
};

/// Per-beam user channel vectors h in C^L (user-to-all-beams response).
struct UserChannelSet {
  // channels[l][u] is the length-L channel vector of user u in beam l.
  std::vector<std::vector<std::vector<std::complex<double>>>> channels;
  std::vector<std::vector<std::array<double, 2>>> user_positions;
};

struct GeneratorParams {
  int num_beams = 7;
  double grid_spacing = 0.5;        // hexagonal lattice pitch
  double theta_3db = 0.5;           // beam FWHM, same units as spacing
  double peak_gain_db = -120.0;     // boresight gain incl. path loss
  double rain_margin_db = 3.0;
  double demand_min_bps = 2e8;      // log-uniform demand range
  double demand_max_bps = 2e9;
  int users_per_beam = 4;
  int num_carriers = 8;
  double carrier_width_hz = 62.5e6; // B_total = K * B_c by construction
  double total_power_w = 100.0;
  double noise_temp_k = 290.0;      // sigma^2 = k_B * T * B_c per carrier
  double user_radius_frac = 0.25;   // super-user jitter, fraction of spacing (< 0.5)
  int transponder_size = 0;         // 0 disables the transponder map
  double transponder_carrier_frac = 1.0;
};

/// Parses and validates a scenario document (schema in README). Throws
/// ValidationError naming the offending field on any invariant violation.
Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

/// Serializes with pinned key order and 12-significant-digit numbers;
/// save(load(x)) is byte-stable.
std::string save_scenario(const Scenario& s);

/// Validates an in-memory scenario against the same rules as load_scenario.
void validate_scenario(const Scenario& s);

/// Synthesizes a scenario on a hexagonal lattice: Gaussian beam gains toward
/// jittered super-user positions, log-uniform demands, thermal noise floor.
/// Deterministic for fixed (params, seed).
Scenario generate_scenario(const GeneratorParams& params, std::uint64_t seed);

/// Samples N_l user positions per beam and builds their channel vectors:
/// |h[m]| = sqrt(gain of beam m at the user position), uniform random phase.
/// Requires s.beam_model (present on generated or annotated scenarios).
UserChannelSet generate_user_channels(const Scenario& s, std::uint64_t seed);

/// First `count` centers of the hexagonal spiral used by the generator.
std::vector<std::array<double, 2>> hex_centers(int count, double spacing);

}  // namespace satrrm
