#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "spinkick/lattice.hpp"
#include "spinkick/model.hpp"

namespace spinkick {

/// Little-endian statevector: site i maps to bit i of the amplitude index,
/// |0> is the +1 eigenstate of sigma_z.
struct StateVector {
  int num_qubits = 0;
  Eigen::VectorXcd amplitudes;

  static StateVector zero_state(int num_qubits);
  double norm() const { return amplitudes.norm(); }
};

/// Number of worker threads used by the gate kernels and realization loops.
/// 0 restores the hardware default. Results are independent of this setting;
/// reductions run over fixed-size blocks in index order.
void set_thread_count(int threads);
int thread_count();

/// Memory needed for one n-qubit statevector (16 bytes per amplitude).
std::uint64_t state_bytes(int num_qubits);

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

struct RandomizationConfig {
  int cycles = 9;
  std::uint64_t seed = 0;
  std::uint64_t realization_index = 0;
};

/// Haar-distributed U(4) via QR of a complex Gaussian matrix with the
/// R-diagonal phase fix.
Eigen::Matrix4cd haar_random_unitary4(std::mt19937_64& rng);

/// Applies a 4x4 unitary to sites (a, b); a indexes the low bit of the 4-dim
/// gate basis. In-place, norm-preserving.
void apply_gate(StateVector& state, const Eigen::Matrix4cd& unitary, int site_a, int site_b);

void apply_single_qubit_gate(StateVector& state, const Eigen::Matrix2cd& unitary, int site);

/// <psi| sigma_axis^site |psi>
double expect_pauli(const StateVector& state, int site, Axis axis);

/// <sigma_z^i> for every site in one pass.
std::vector<double> expect_all_z(const StateVector& state);

/// Scrambled background only: all qubits |0>, then `cycles` rounds of Haar
/// random two-qubit gates over the R, G, B bond layers in that order, with
/// every gate touching the probe replaced by identity. (seed,
/// realization_index) fully determines the gate stream.
StateVector prepare_scrambled_background(const LatticeSpec& spec, const RandomizationConfig& rc);

/// Single-qubit unitary taking |0> to the +1 (sign=+1) or -1 (sign=-1)
/// eigenstate of sigma_axis.
Eigen::Matrix2cd probe_preparation_gate(Axis axis, int sign);

/// prepare_scrambled_background followed by setting the probe to the +1
/// eigenstate of sigma_axis.
StateVector prepare_probe_random_state(const LatticeSpec& spec, Axis axis,
                                       const RandomizationConfig& rc);

/// Runs fn(0) .. fn(count-1) across the worker threads; rethrows the first
/// exception after completion. Used for realization-level parallelism; calls
/// nested inside it run serially.
void parallel_for_index(std::int64_t count, const std::function<void(std::int64_t)>& fn);

using StepHook = std::function<void(int step, const StateVector&)>;

/// Applies the program's Floquet steps in order, invoking `hook` after each
/// full step (1-based step index). Gates flagged as identity are skipped.
void run_program(StateVector& state, const TrotterProgram& prog, const StepHook& hook = {});

/// One Floquet step only; lets callers evolve several states in lockstep.
void apply_program_step(StateVector& state, const TrotterProgram& prog);

struct ElementaryGate {
  enum class Kind { Cnot, Rx, Rz, Phase, Hadamard };
  Kind kind = Kind::Cnot;
  int wire = 0;        // for Cnot: the control wire; the other wire is the target
  double angle = 0.0;  // rotation angle / phase, unused for Cnot and Hadamard
};

/// Hardware-style realization of the two-site propagator: three CNOTs with
/// interleaved single-qubit rotations. Composes to propagator(c, tau) up to a
/// global phase; wire 0 is the low bit.
std::vector<ElementaryGate> decompose_propagator(const Coupling& c, double tau);

Eigen::Matrix4cd compose_elementary(const std::vector<ElementaryGate>& gates);

/// Exact infinite-temperature correlator Tr[sigma^i(t) sigma^p(0)] / 2^n at
/// every step (index 0 = t=0), computed by evolving the full computational
/// basis; no typicality approximation. Cost grows as 2^n full evolutions, so
/// n is capped by `max_qubits`.
std::vector<double> dense_trace_correlator(const LatticeSpec& spec, const TrotterProgram& prog,
                                           int site_i, int site_p, Axis axis, int max_qubits = 12);

}  // namespace spinkick
