#include "spinkick/engine.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace spinkick {

namespace {

int g_threads = 0;  // 0 = hardware default

int effective_threads() {
  if (g_threads > 0) return g_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

thread_local bool t_in_parallel_region = false;

// Runs fn(block) for block in [0, num_blocks). Blocks are claimed by an
// atomic counter, so any partial results must be indexed by block; the block
// partition itself never depends on the thread count. Nested calls (for
// instance gate kernels inside a parallel realization loop) run serially.
template <typename Fn>
void parallel_blocks(std::int64_t num_blocks, const Fn& fn) {
  const int workers = static_cast<int>(
      std::min<std::int64_t>(t_in_parallel_region ? 1 : effective_threads(), num_blocks));
  if (workers <= 1) {
    for (std::int64_t b = 0; b < num_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto drain = [&] {
    t_in_parallel_region = true;
    for (std::int64_t b; (b = next.fetch_add(1, std::memory_order_relaxed)) < num_blocks;) fn(b);
    t_in_parallel_region = false;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int k = 0; k < workers - 1; ++k) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
}

constexpr std::int64_t kGateGroupsPerBlock = std::int64_t{1} << 14;
constexpr std::int64_t kReduceAmpsPerBlock = std::int64_t{1} << 16;
constexpr int kParallelGateMinQubits = 17;

inline std::int64_t insert_two_zero_bits(std::int64_t g, int lo, int hi) {
  const std::int64_t low = g & ((std::int64_t{1} << lo) - 1);
  const std::int64_t mid = (g >> lo) & ((std::int64_t{1} << (hi - 1 - lo)) - 1);
  const std::int64_t high = g >> (hi - 1);
  return low | (mid << (lo + 1)) | (high << (hi + 1));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void check_sites(const StateVector& state, int a, int b) {
  if (a == b) throw std::invalid_argument("gate target sites must be distinct");
  if (a < 0 || b < 0 || a >= state.num_qubits || b >= state.num_qubits)
    throw std::invalid_argument("gate target site out of range");
}

std::complex<double> cross_pauli_element(const StateVector& bra, const StateVector& ket, int site,
                                         Axis axis) {
  const std::int64_t dim = bra.amplitudes.size();
  const std::int64_t mask = std::int64_t{1} << site;
  std::complex<double> sum = 0.0;
  switch (axis) {
    case Axis::Z:
      for (std::int64_t i = 0; i < dim; ++i)
        sum += ((i & mask) ? -1.0 : 1.0) * std::conj(bra.amplitudes[i]) * ket.amplitudes[i];
      break;
    case Axis::X:
      for (std::int64_t i = 0; i < dim; ++i)
        sum += std::conj(bra.amplitudes[i]) * ket.amplitudes[i ^ mask];
      break;
    case Axis::Y:
      for (std::int64_t i = 0; i < dim; ++i) {
        const std::complex<double> phase = (i & mask) ? std::complex<double>(0.0, 1.0)
                                                      : std::complex<double>(0.0, -1.0);
        // <i| sigma_y |i^mask> carries -i for |0><1| and +i for |1><0|
        sum += std::conj(bra.amplitudes[i]) * phase * ket.amplitudes[i ^ mask];
      }
      break;
  }
  return sum;
}

StateVector basis_state(int num_qubits, std::int64_t index) {
  StateVector st = StateVector::zero_state(num_qubits);
  st.amplitudes[0] = 0.0;
  st.amplitudes[index] = 1.0;
  return st;
}

}  // namespace

StateVector StateVector::zero_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 40) throw std::invalid_argument("qubit count out of range");
  StateVector st;
  st.num_qubits = num_qubits;
  st.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << num_qubits);
  st.amplitudes[0] = 1.0;
  return st;
}

void set_thread_count(int threads) {
  if (threads < 0) throw std::invalid_argument("thread count must be >= 0");
  g_threads = threads;
}

int thread_count() { return effective_threads(); }

std::uint64_t state_bytes(int num_qubits) {
  return sizeof(std::complex<double>) * (std::uint64_t{1} << num_qubits);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x51ED270EEDB1DC5Dull));
}

Eigen::Matrix4cd haar_random_unitary4(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      a(i, j) = std::complex<double>(re, im);
    }
  Eigen::HouseholderQR<Eigen::Matrix4cd> qr(a);
  Eigen::Matrix4cd q = qr.householderQ();
  const Eigen::Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 4; ++k) {
    const std::complex<double> d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

void apply_gate(StateVector& state, const Eigen::Matrix4cd& unitary, int site_a, int site_b) {
  check_sites(state, site_a, site_b);
  const int lo = std::min(site_a, site_b);
  const int hi = std::max(site_a, site_b);
  const std::int64_t mask_a = std::int64_t{1} << site_a;
  const std::int64_t mask_b = std::int64_t{1} << site_b;
  const std::int64_t groups = std::int64_t{1} << (state.num_qubits - 2);

  // split real/imag so the hot loops run on plain doubles
  double ur[4][4], ui[4][4];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      ur[r][c] = unitary(r, c).real();
      ui[r][c] = unitary(r, c).imag();
    }

  // Sz-conserving gates (every Heisenberg bond with lx == ly) are block
  // diagonal over {00}, {01,10}, {11}; skip the zero entries for those.
  bool sz_blocks = true;
  for (int r = 0; r < 4 && sz_blocks; ++r)
    for (int c = 0; c < 4; ++c) {
      const bool in_block = (r == 0 && c == 0) || (r == 3 && c == 3) ||
                            (r >= 1 && r <= 2 && c >= 1 && c <= 2);
      if (!in_block && (ur[r][c] != 0.0 || ui[r][c] != 0.0)) {
        sz_blocks = false;
        break;
      }
    }

  std::complex<double>* amp = state.amplitudes.data();
  double* raw = reinterpret_cast<double*>(amp);

  auto process_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t g = begin; g < end; ++g) {
      const std::int64_t i0 = insert_two_zero_bits(g, lo, hi);
      const std::int64_t j0 = 2 * i0;
      const std::int64_t j1 = 2 * (i0 | mask_a);
      const std::int64_t j2 = 2 * (i0 | mask_b);
      const std::int64_t j3 = 2 * (i0 | mask_a | mask_b);
      const double v0r = raw[j0], v0i = raw[j0 + 1];
      const double v1r = raw[j1], v1i = raw[j1 + 1];
      const double v2r = raw[j2], v2i = raw[j2 + 1];
      const double v3r = raw[j3], v3i = raw[j3 + 1];
      if (sz_blocks) {
        raw[j0] = ur[0][0] * v0r - ui[0][0] * v0i;
        raw[j0 + 1] = ur[0][0] * v0i + ui[0][0] * v0r;
        raw[j1] = ur[1][1] * v1r - ui[1][1] * v1i + ur[1][2] * v2r - ui[1][2] * v2i;
        raw[j1 + 1] = ur[1][1] * v1i + ui[1][1] * v1r + ur[1][2] * v2i + ui[1][2] * v2r;
        raw[j2] = ur[2][1] * v1r - ui[2][1] * v1i + ur[2][2] * v2r - ui[2][2] * v2i;
        raw[j2 + 1] = ur[2][1] * v1i + ui[2][1] * v1r + ur[2][2] * v2i + ui[2][2] * v2r;
        raw[j3] = ur[3][3] * v3r - ui[3][3] * v3i;
        raw[j3 + 1] = ur[3][3] * v3i + ui[3][3] * v3r;
      } else {
        raw[j0] = ur[0][0] * v0r - ui[0][0] * v0i + ur[0][1] * v1r - ui[0][1] * v1i +
                  ur[0][2] * v2r - ui[0][2] * v2i + ur[0][3] * v3r - ui[0][3] * v3i;
        raw[j0 + 1] = ur[0][0] * v0i + ui[0][0] * v0r + ur[0][1] * v1i + ui[0][1] * v1r +
                      ur[0][2] * v2i + ui[0][2] * v2r + ur[0][3] * v3i + ui[0][3] * v3r;
        raw[j1] = ur[1][0] * v0r - ui[1][0] * v0i + ur[1][1] * v1r - ui[1][1] * v1i +
                  ur[1][2] * v2r - ui[1][2] * v2i + ur[1][3] * v3r - ui[1][3] * v3i;
        raw[j1 + 1] = ur[1][0] * v0i + ui[1][0] * v0r + ur[1][1] * v1i + ui[1][1] * v1r +
                      ur[1][2] * v2i + ui[1][2] * v2r + ur[1][3] * v3i + ui[1][3] * v3r;
        raw[j2] = ur[2][0] * v0r - ui[2][0] * v0i + ur[2][1] * v1r - ui[2][1] * v1i +
                  ur[2][2] * v2r - ui[2][2] * v2i + ur[2][3] * v3r - ui[2][3] * v3i;
        raw[j2 + 1] = ur[2][0] * v0i + ui[2][0] * v0r + ur[2][1] * v1i + ui[2][1] * v1r +
                      ur[2][2] * v2i + ui[2][2] * v2r + ur[2][3] * v3i + ui[2][3] * v3r;
        raw[j3] = ur[3][0] * v0r - ui[3][0] * v0i + ur[3][1] * v1r - ui[3][1] * v1i +
                  ur[3][2] * v2r - ui[3][2] * v2i + ur[3][3] * v3r - ui[3][3] * v3i;
        raw[j3 + 1] = ur[3][0] * v0i + ui[3][0] * v0r + ur[3][1] * v1i + ui[3][1] * v1r +
                      ur[3][2] * v2i + ui[3][2] * v2r + ur[3][3] * v3i + ui[3][3] * v3r;
      }
    }
  };

  if (state.num_qubits < kParallelGateMinQubits || effective_threads() == 1 || t_in_parallel_region) {
    process_range(0, groups);
    return;
  }
  const std::int64_t num_blocks = (groups + kGateGroupsPerBlock - 1) / kGateGroupsPerBlock;
  parallel_blocks(num_blocks, [&](std::int64_t block) {
    const std::int64_t begin = block * kGateGroupsPerBlock;
    process_range(begin, std::min(groups, begin + kGateGroupsPerBlock));
  });
}

void apply_single_qubit_gate(StateVector& state, const Eigen::Matrix2cd& unitary, int site) {
  if (site < 0 || site >= state.num_qubits) throw std::invalid_argument("gate target site out of range");
  const std::int64_t mask = std::int64_t{1} << site;
  const std::int64_t groups = std::int64_t{1} << (state.num_qubits - 1);
  const std::complex<double> u00 = unitary(0, 0), u01 = unitary(0, 1);
  const std::complex<double> u10 = unitary(1, 0), u11 = unitary(1, 1);
  std::complex<double>* amp = state.amplitudes.data();
  for (std::int64_t g = 0; g < groups; ++g) {
    const std::int64_t low = g & (mask - 1);
    const std::int64_t i0 = ((g >> site) << (site + 1)) | low;
    const std::int64_t i1 = i0 | mask;
    const std::complex<double> v0 = amp[i0], v1 = amp[i1];
    amp[i0] = u00 * v0 + u01 * v1;
    amp[i1] = u10 * v0 + u11 * v1;
  }
}

double expect_pauli(const StateVector& state, int site, Axis axis) {
  if (site < 0 || site >= state.num_qubits) throw std::invalid_argument("site out of range");
  const std::int64_t mask = std::int64_t{1} << site;
  const std::complex<double>* amp = state.amplitudes.data();

  if (axis == Axis::Z) {
    const std::int64_t dim = state.amplitudes.size();
    const std::int64_t num_blocks = (dim + kReduceAmpsPerBlock - 1) / kReduceAmpsPerBlock;
    std::vector<double> partial(num_blocks, 0.0);
    parallel_blocks(num_blocks, [&](std::int64_t block) {
      const std::int64_t begin = block * kReduceAmpsPerBlock;
      const std::int64_t end = std::min(dim, begin + kReduceAmpsPerBlock);
      double acc = 0.0;
      for (std::int64_t i = begin; i < end; ++i)
        acc += ((i & mask) ? -1.0 : 1.0) * std::norm(amp[i]);
      partial[block] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
  }

  // X and Y reduce over (i0, i0|mask) pairs
  const std::int64_t groups = std::int64_t{1} << (state.num_qubits - 1);
  const std::int64_t num_blocks = (groups + kReduceAmpsPerBlock - 1) / kReduceAmpsPerBlock;
  std::vector<double> partial(num_blocks, 0.0);
  const bool want_real = axis == Axis::X;
  parallel_blocks(num_blocks, [&](std::int64_t block) {
    const std::int64_t begin = block * kReduceAmpsPerBlock;
    const std::int64_t end = std::min(groups, begin + kReduceAmpsPerBlock);
    double acc = 0.0;
    for (std::int64_t g = begin; g < end; ++g) {
      const std::int64_t low = g & (mask - 1);
      const std::int64_t i0 = ((g >> site) << (site + 1)) | low;
      const std::complex<double> z = std::conj(amp[i0]) * amp[i0 | mask];
      acc += want_real ? z.real() : z.imag();
    }
    partial[block] = 2.0 * acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

std::vector<double> expect_all_z(const StateVector& state) {
  const int n = state.num_qubits;
  const std::int64_t dim = state.amplitudes.size();
  const std::complex<double>* amp = state.amplitudes.data();
  const std::int64_t num_blocks = (dim + kReduceAmpsPerBlock - 1) / kReduceAmpsPerBlock;
  std::vector<std::vector<double>> partial(num_blocks, std::vector<double>(n, 0.0));
  parallel_blocks(num_blocks, [&](std::int64_t block) {
    const std::int64_t begin = block * kReduceAmpsPerBlock;
    const std::int64_t end = std::min(dim, begin + kReduceAmpsPerBlock);
    std::vector<double>& acc = partial[block];
    for (std::int64_t i = begin; i < end; ++i) {
      const double p = std::norm(amp[i]);
      for (int q = 0; q < n; ++q) acc[q] += ((i >> q) & 1) ? -p : p;
    }
  });
  std::vector<double> totals(n, 0.0);
  for (const auto& acc : partial)
    for (int q = 0; q < n; ++q) totals[q] += acc[q];
  return totals;
}

StateVector prepare_scrambled_background(const LatticeSpec& spec, const RandomizationConfig& rc) {
  if (rc.cycles < 0) throw std::invalid_argument("cycle count must be >= 0");
  StateVector state = StateVector::zero_state(spec.num_sites);
  std::mt19937_64 rng(derive_seed(rc.seed, rc.realization_index));

  for (int cycle = 0; cycle < rc.cycles; ++cycle) {
    for (Layer layer : {Layer::R, Layer::G, Layer::B}) {
      for (const Bond& bond : spec.bonds_in_layer(layer)) {
        if (bond.a == spec.probe || bond.b == spec.probe) continue;
        apply_gate(state, haar_random_unitary4(rng), bond.a, bond.b);
      }
    }
  }
  return state;
}

Eigen::Matrix2cd probe_preparation_gate(Axis axis, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("eigenstate sign must be +1 or -1");
  Eigen::Matrix2cd prep;
  const double s = 1.0 / std::sqrt(2.0);
  const double f = static_cast<double>(sign);
  switch (axis) {
    case Axis::Z:
      if (sign == 1)
        prep = Eigen::Matrix2cd::Identity();
      else
        prep << 0, 1, 1, 0;
      break;
    case Axis::X:
      prep << s, s, f * s, -f * s;
      break;
    case Axis::Y:
      prep << s, s, std::complex<double>(0.0, f * s), std::complex<double>(0.0, -f * s);
      break;
  }
  return prep;
}

StateVector prepare_probe_random_state(const LatticeSpec& spec, Axis axis,
                                       const RandomizationConfig& rc) {
  StateVector state = prepare_scrambled_background(spec, rc);
  if (axis != Axis::Z) apply_single_qubit_gate(state, probe_preparation_gate(axis, 1), spec.probe);
  return state;
}

void run_program(StateVector& state, const TrotterProgram& prog, const StepHook& hook) {
  if (prog.num_sites != state.num_qubits)
    throw std::invalid_argument("program and state qubit counts differ");
  for (int step = 1; step <= prog.schedule.steps; ++step) {
    apply_program_step(state, prog);
    if (hook) hook(step, state);
  }
}

void apply_program_step(StateVector& state, const TrotterProgram& prog) {
  for (const GateOp& op : prog.step_gates) {
    if (op.is_identity) continue;
    apply_gate(state, op.unitary, op.bond.a, op.bond.b);
  }
}

void parallel_for_index(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
  std::exception_ptr first_error;
  std::mutex error_mutex;
  parallel_blocks(count, [&](std::int64_t i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  });
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<ElementaryGate> decompose_propagator(const Coupling& c, double tau) {
  using K = ElementaryGate::Kind;
  const double j = c.strength;
  const double pi = std::acos(-1.0);
  return {
      {K::Cnot, 0, 0.0},
      {K::Rx, 0, j * c.vec.x * tau / 2.0},
      {K::Rz, 1, j * c.vec.z * tau / 2.0},
      {K::Hadamard, 0, 0.0},
      {K::Cnot, 0, 0.0},
      {K::Phase, 0, -pi / 2.0},
      {K::Rz, 1, -j * c.vec.y * tau / 2.0},
      {K::Hadamard, 0, 0.0},
      {K::Cnot, 0, 0.0},
      {K::Rx, 0, pi / 2.0},
      {K::Rx, 1, -pi / 2.0},
  };
}

Eigen::Matrix4cd compose_elementary(const std::vector<ElementaryGate>& gates) {
  using namespace std::complex_literals;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix4cd total = Eigen::Matrix4cd::Identity();
  for (const ElementaryGate& g : gates) {
    Eigen::Matrix4cd step;
    if (g.kind == ElementaryGate::Kind::Cnot) {
      step = Eigen::Matrix4cd::Zero();
      const std::int64_t cmask = g.wire == 0 ? 1 : 2;
      const std::int64_t tmask = g.wire == 0 ? 2 : 1;
      for (int i = 0; i < 4; ++i) step(((i & cmask) ? (i ^ tmask) : i), i) = 1.0;
    } else {
      Eigen::Matrix2cd one;
      switch (g.kind) {
        case ElementaryGate::Kind::Rx: {
          const double h = g.angle / 2.0;
          one << std::cos(h), -1i * std::sin(h), -1i * std::sin(h), std::cos(h);
          break;
        }
        case ElementaryGate::Kind::Rz: {
          const double h = g.angle / 2.0;
          one << std::exp(-1i * h), 0, 0, std::exp(1i * h);
          break;
        }
        case ElementaryGate::Kind::Phase:
          one << 1, 0, 0, std::exp(1i * g.angle);
          break;
        case ElementaryGate::Kind::Hadamard:
          one << 1, 1, 1, -1;
          one /= std::sqrt(2.0);
          break;
        default:
          throw std::logic_error("unreachable");
      }
      step = g.wire == 0 ? kron22(id, one) : kron22(one, id);
    }
    total = step * total;
  }
  return total;
}

std::vector<double> dense_trace_correlator(const LatticeSpec& spec, const TrotterProgram& prog,
                                           int site_i, int site_p, Axis axis, int max_qubits) {
  const int n = spec.num_sites;
  if (n > max_qubits)
    throw std::invalid_argument("dense trace oracle limited to " + std::to_string(max_qubits) +
                                " qubits (requested " + std::to_string(n) + ")");
  if (site_i < 0 || site_i >= n || site_p < 0 || site_p >= n)
    throw std::invalid_argument("correlator site out of range");
  if (prog.num_sites != n) throw std::invalid_argument("program does not match lattice");

  const int steps = prog.schedule.steps;
  const std::int64_t dim = std::int64_t{1} << n;
  const std::int64_t pmask = std::int64_t{1} << site_p;
  const double norm = 1.0 / static_cast<double>(dim);

  if (axis == Axis::Z) {
    // sigma_z^p is diagonal: one evolution per basis state
    constexpr std::int64_t kStatesPerBlock = 64;
    const std::int64_t num_blocks = (dim + kStatesPerBlock - 1) / kStatesPerBlock;
    std::vector<std::vector<double>> partial(num_blocks, std::vector<double>(steps + 1, 0.0));
    parallel_blocks(num_blocks, [&](std::int64_t block) {
      std::vector<double>& acc = partial[block];
      const std::int64_t begin = block * kStatesPerBlock;
      const std::int64_t end = std::min(dim, begin + kStatesPerBlock);
      for (std::int64_t b = begin; b < end; ++b) {
        const double sign = (b & pmask) ? -1.0 : 1.0;
        StateVector st = basis_state(n, b);
        acc[0] += sign * expect_pauli(st, site_i, axis);
        for (int step = 1; step <= steps; ++step) {
          apply_program_step(st, prog);
          acc[step] += sign * expect_pauli(st, site_i, axis);
        }
      }
    });
    std::vector<double> out(steps + 1, 0.0);
    for (const auto& acc : partial)
      for (int s = 0; s <= steps; ++s) out[s] += acc[s];
    for (double& v : out) v *= norm;
    return out;
  }

  // sigma_x^p / sigma_y^p pair basis states b and b^pmask: evolve both and
  // take cross elements. Pairs are enumerated by indices with the p bit clear.
  constexpr std::int64_t kPairsPerBlock = 32;
  const std::int64_t pairs = dim / 2;
  const std::int64_t num_blocks = (pairs + kPairsPerBlock - 1) / kPairsPerBlock;
  std::vector<std::vector<double>> partial(num_blocks, std::vector<double>(steps + 1, 0.0));
  parallel_blocks(num_blocks, [&](std::int64_t block) {
    std::vector<double>& acc = partial[block];
    const std::int64_t begin = block * kPairsPerBlock;
    const std::int64_t end = std::min(pairs, begin + kPairsPerBlock);
    for (std::int64_t g = begin; g < end; ++g) {
      const std::int64_t low = g & (pmask - 1);
      const std::int64_t b0 = ((g >> site_p) << (site_p + 1)) | low;
      StateVector lo_state = basis_state(n, b0);
      StateVector hi_state = basis_state(n, b0 | pmask);
      auto record = [&](int step) {
        const std::complex<double> z = cross_pauli_element(lo_state, hi_state, site_i, axis);
        // <b|U' sigma_i U sigma_p|b> + <b'|U' sigma_i U sigma_p|b'>
        acc[step] += axis == Axis::X ? 2.0 * z.real() : -2.0 * z.imag();
      };
      record(0);
      for (int step = 1; step <= steps; ++step) {
        apply_program_step(lo_state, prog);
        apply_program_step(hi_state, prog);
        record(step);
      }
    }
  });
  std::vector<double> out(steps + 1, 0.0);
  for (const auto& acc : partial)
    for (int s = 0; s <= steps; ++s) out[s] += acc[s];
  for (double& v : out) v *= norm;
  return out;
}

}  // namespace spinkick
