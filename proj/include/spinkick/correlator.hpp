#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinkick/engine.hpp"
#include "spinkick/lattice.hpp"
#include "spinkick/model.hpp"

namespace spinkick {

/// How a typicality correlator estimate is formed per realization.
///   ProbeState:      <Psi_+|O(t)|Psi_+> with the probe prepared in the +1
///                    eigenstate (the single-point estimator).
///   ProbeDifference: half the difference of the +1 and -1 probe preparations
///                    over the same random background. Same expectation value;
///                    background-only typicality noise cancels exactly, which
///                    keeps no-transport-path correlators at machine zero.
enum class EstimatorKind { ProbeState, ProbeDifference };

struct TypicalityProtocol {
  int cycles = 9;
  int realizations = 30;
  std::uint64_t master_seed = 0;
  EstimatorKind estimator = EstimatorKind::ProbeState;
};

struct ExperimentMeta {
  InteractionVector rung_vec;
  double rung_coupling = 0.0;
  double chain_coupling = 1.0;
  double tau = 1.0;
  int cycles = 9;
  int num_sites = 0;
  int probe = 0;
  int realizations = 0;
  std::uint64_t master_seed = 0;
  Axis axis = Axis::Z;
  std::string label;
};

/// Realization-averaged probe autocorrelator with standard errors of the mean.
struct CorrelationSeries {
  std::vector<double> times;  // t_N = N tau, starting at 0
  std::vector<double> mean;
  std::vector<double> sem;  // sample std / sqrt(realizations); 0 when M == 1
  int realizations = 0;
  Axis axis = Axis::Z;
  ExperimentMeta meta;
};

/// Realization-averaged <sigma_z^i(t)> for every site; row = step, col = site.
struct SpatialProfile {
  std::vector<double> times;
  Eigen::MatrixXd values;
  Eigen::MatrixXd sem;
  int realizations = 0;
  ExperimentMeta meta;
};

/// |R|, |T_same|, |T_cross| partition sums per step; the rung-site weight is
/// reported separately.
struct ScatteringSeries {
  std::vector<double> times;
  std::vector<double> reflection;
  std::vector<double> trans_same;
  std::vector<double> trans_cross;
  std::vector<double> rung_weight;
};

/// C^{aa}_pp(t) of the probe via the typicality protocol: per realization,
/// prepare the probe+random state, evolve, and record the probe expectation
/// after every Floquet step. Realizations run concurrently; the aggregation
/// is a fixed-order reduction over the realization index.
CorrelationSeries run_autocorrelation(const LatticeSpec& spec, const TrotterProgram& prog,
                                      Axis axis, const TypicalityProtocol& protocol);

/// C^{zz}_ip(t) for every site i (z axis throughout, the scattering setup).
SpatialProfile run_spatial_profile(const LatticeSpec& spec, const TrotterProgram& prog,
                                   const TypicalityProtocol& protocol);

ScatteringSeries scattering_coefficients(const SpatialProfile& profile, const LatticeSpec& spec);

/// C^{nn} = nx^2 Cxx + ny^2 Cyy + nz^2 Czz with quadrature-propagated errors.
CorrelationSeries reconstruct_directional(const CorrelationSeries& cxx, const CorrelationSeries& cyy,
                                          const CorrelationSeries& czz, const Eigen::Vector3d& n_hat);

}  // namespace spinkick
