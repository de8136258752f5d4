#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "spinkick/lattice.hpp"

namespace spinkick {

enum class Axis { X, Y, Z };

char axis_name(Axis axis);
Axis axis_from_name(char name);

Eigen::Matrix2cd pauli_matrix(Axis axis);

/// kron22(hi, lo): 4x4 operator with `hi` acting on the high bit of the pair
/// index and `lo` on the low bit (pair index = bit_low + 2*bit_high).
Eigen::Matrix4cd kron22(const Eigen::Matrix2cd& hi, const Eigen::Matrix2cd& lo);

/// Interaction vector (lambda_x, lambda_y, lambda_z) weighting the xx, yy, zz
/// couplings of a two-site term. The studied set is binary but sweeps between
/// types are allowed, so components are reals.
struct InteractionVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const InteractionVector&) const = default;
};

struct Coupling {
  double strength = 1.0;  // J for chain bonds, J_perp for rung bonds
  InteractionVector vec;
};

/// Kicking period and step count; each step applies layer R, then G, then B.
struct FloquetSchedule {
  double tau = 1.0;
  int steps = 0;
};

struct GateOp {
  Bond bond;  // gate acts on (bond.a, bond.b); bond.a is the low bit
  Eigen::Matrix4cd unitary;
  bool is_identity = false;
};

/// One compiled Floquet step plus metadata. The per-step gate list is applied
/// schedule.steps times; gates within a layer have disjoint supports, so the
/// intra-layer order carries no meaning. Immutable after compilation.
struct TrotterProgram {
  int num_sites = 0;
  int probe = 0;
  FloquetSchedule schedule;
  std::vector<GateOp> step_gates;

  std::size_t total_gates() const { return step_gates.size() * static_cast<std::size_t>(schedule.steps); }
};

/// strength * (lx XX + ly YY + lz ZZ) / 4, Hermitian by construction.
Eigen::Matrix4cd two_site_generator(const Coupling& c);

/// exp(-i * two_site_generator * tau) via spectral decomposition.
Eigen::Matrix4cd propagator(const Coupling& c, double tau);

TrotterProgram compile_program(const LatticeSpec& spec, const FloquetSchedule& sched,
                               double chain_coupling, double rung_coupling,
                               const InteractionVector& rung_vec);

/// Experiment labels <lambda>_{ii} with binary lambda. Returns every label
/// equal to the input under global Pauli-axis permutations (the axis-swap and
/// xy-swap identities are the generating cases); includes the input.
std::vector<std::pair<std::array<int, 3>, Axis>> equivalent_experiments(
    const std::array<int, 3>& lambda, Axis axis);

struct SymmetryFlags {
  bool conserves_total_sz = false;
  bool conserves_parity = false;
};

/// Conservation flags for a model with isotropic chain bonds and the given
/// rung interaction, decided by explicit commutator checks (norm < 1e-12).
SymmetryFlags symmetry_flags(const InteractionVector& rung_vec);

}  // namespace spinkick
