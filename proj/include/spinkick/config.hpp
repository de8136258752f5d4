#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinkick/correlator.hpp"
#include "spinkick/lattice.hpp"
#include "spinkick/model.hpp"

namespace spinkick {

struct RungConfig {
  int distance = 4;  // fold distance d: attachment pair (d, chain_len-1-d)
  int site_a = -1;   // explicit attachment pair overrides distance
  int site_b = -1;
  std::string style = "direct";  // "direct" | "midsite"
};

/// Full experiment description. Defaults follow the headline settings:
/// tau = 1, c = 9 cycles, J_perp/J = 1, 20 Floquet steps.
struct ExperimentConfig {
  // geometry
  std::string geometry = "folded_chain";  // or "scattering"
  int chain_len = 20;
  std::vector<RungConfig> rungs = {RungConfig{}};
  int probe = 0;
  int attach_1 = -1;  // scattering attachments (chain-local); -1 = midpoint
  int attach_2 = -1;

  // physics
  double chain_coupling = 1.0;
  double rung_ratio = 1.0;  // J_perp / J
  std::array<double, 3> lambda = {0.0, 0.0, 1.0};
  double tau = 1.0;
  int steps = 20;

  // protocol
  std::string axis = "z";
  int cycles = 9;
  int realizations = 30;
  std::uint64_t seed = 24601;
  std::string estimator = "probe-state";  // or "probe-difference"

  // analysis
  double slope_start_time = 3.0;  // first slope's left time; skips the kicked-chain transient
  double window_fraction = 1.0 / 3.0;
  double tolerance = 0.07;
  double onset_band = 0.05;

  // output
  std::string out_dir;
  bool emit_profile = false;

  // engine
  int threads = 0;
  std::uint64_t max_state_bytes = std::uint64_t{1} << 33;  // 8 GiB
  int dense_oracle_max_qubits = 12;
};

ExperimentConfig config_from_json_string(const std::string& text);
std::string config_to_json_string(const ExperimentConfig& cfg);

/// Human-readable problems; empty means usable.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

/// Throws std::invalid_argument with the collected problems when invalid.
void require_valid(const ExperimentConfig& cfg);

LatticeSpec build_lattice(const ExperimentConfig& cfg);
TrotterProgram build_program(const ExperimentConfig& cfg, const LatticeSpec& lattice);
TypicalityProtocol build_protocol(const ExperimentConfig& cfg);

Axis config_axis(const ExperimentConfig& cfg);
void fill_meta(const ExperimentConfig& cfg, ExperimentMeta& meta);

/// First slope step for the configured start time, clamped so at least two
/// slopes survive on a `steps`-long grid.
int slope_start_step_for(const ExperimentConfig& cfg);

}  // namespace spinkick
