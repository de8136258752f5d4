#include "spinkick/model.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

namespace spinkick {

namespace {

constexpr double kCommutatorTol = 1e-12;

using Permutation = std::array<int, 3>;  // axis k maps to perm[k]

constexpr std::array<Permutation, 6> kAxisPermutations = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

}  // namespace

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

Axis axis_from_name(char name) {
  switch (name) {
    case 'x': case 'X': return Axis::X;
    case 'y': case 'Y': return Axis::Y;
    case 'z': case 'Z': return Axis::Z;
  }
  throw std::invalid_argument(std::string("unknown axis: ") + name);
}

Eigen::Matrix2cd pauli_matrix(Axis axis) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (axis) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, -1i, 1i, 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix4cd kron22(const Eigen::Matrix2cd& hi, const Eigen::Matrix2cd& lo) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = hi(i, j) * lo;
  return out;
}

Eigen::Matrix4cd two_site_generator(const Coupling& c) {
  Eigen::Matrix4cd gen = Eigen::Matrix4cd::Zero();
  const std::array<std::pair<double, Axis>, 3> terms = {
      {{c.vec.x, Axis::X}, {c.vec.y, Axis::Y}, {c.vec.z, Axis::Z}}};
  for (const auto& [weight, axis] : terms) {
    if (weight == 0.0) continue;
    const Eigen::Matrix2cd p = pauli_matrix(axis);
    gen += weight * kron22(p, p);
  }
  return (c.strength / 4.0) * gen;
}

Eigen::Matrix4cd propagator(const Coupling& c, double tau) {
  const Eigen::Matrix4cd gen = two_site_generator(c);
  if (gen.isZero(0.0)) return Eigen::Matrix4cd::Identity();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(gen);
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k)
    phases(k) = std::exp(std::complex<double>(0.0, -solver.eigenvalues()(k) * tau));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

TrotterProgram compile_program(const LatticeSpec& spec, const FloquetSchedule& sched,
                               double chain_coupling, double rung_coupling,
                               const InteractionVector& rung_vec) {
  const auto violations = validate(spec);
  if (!violations.empty()) {
    std::string msg = "invalid lattice:";
    for (const auto& v : violations) msg += " [" + v + "]";
    throw std::invalid_argument(msg);
  }
  if (!(sched.tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (sched.steps < 0) throw std::invalid_argument("steps must be >= 0");

  TrotterProgram prog;
  prog.num_sites = spec.num_sites;
  prog.probe = spec.probe;
  prog.schedule = sched;

  for (Layer layer : {Layer::R, Layer::G, Layer::B}) {
    for (const Bond& bond : spec.bonds_in_layer(layer)) {
      Coupling c;
      if (bond.kind == BondKind::Chain) {
        c.strength = chain_coupling;
        c.vec = {1.0, 1.0, 1.0};
      } else {
        c.strength = rung_coupling;
        c.vec = rung_vec;
      }
      GateOp op;
      op.bond = bond;
      op.unitary = propagator(c, sched.tau);
      op.is_identity = two_site_generator(c).isZero(0.0);
      prog.step_gates.push_back(std::move(op));
    }
  }
  return prog;
}

std::vector<std::pair<std::array<int, 3>, Axis>> equivalent_experiments(
    const std::array<int, 3>& lambda, Axis axis) {
  for (int v : lambda)
    if (v != 0 && v != 1) throw std::invalid_argument("equivalent_experiments expects binary lambda");

  std::vector<std::pair<std::array<int, 3>, Axis>> out;
  out.emplace_back(lambda, axis);
  for (const Permutation& perm : kAxisPermutations) {
    std::array<int, 3> mapped{};
    for (int k = 0; k < 3; ++k) mapped[perm[k]] = lambda[k];
    const Axis mapped_axis = static_cast<Axis>(perm[static_cast<int>(axis)]);
    if (std::find(out.begin(), out.end(), std::make_pair(mapped, mapped_axis)) == out.end())
      out.emplace_back(mapped, mapped_axis);
  }
  return out;
}

SymmetryFlags symmetry_flags(const InteractionVector& rung_vec) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix4cd total_sz =
      kron22(pauli_matrix(Axis::Z), id) + kron22(id, pauli_matrix(Axis::Z));
  const Eigen::Matrix4cd parity_xx = kron22(pauli_matrix(Axis::X), pauli_matrix(Axis::X));

  const Eigen::Matrix4cd rung = two_site_generator({1.0, rung_vec});
  const Eigen::Matrix4cd chain = two_site_generator({1.0, {1.0, 1.0, 1.0}});

  auto commutes = [](const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
    return (a * b - b * a).norm() < kCommutatorTol;
  };

  SymmetryFlags flags;
  flags.conserves_total_sz = commutes(total_sz, rung) && commutes(total_sz, chain);
  flags.conserves_parity = commutes(parity_xx, rung) && commutes(parity_xx, chain);
  return flags;
}

}  // namespace spinkick
