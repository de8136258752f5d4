#include "spinkick/correlator.hpp"

#include <cmath>
#include <stdexcept>

#include "spinkick/errors.hpp"

namespace spinkick {

namespace {

constexpr double kNormDriftTol = 1e-6;

ExperimentMeta make_meta(const LatticeSpec& spec, const TrotterProgram& prog, Axis axis,
                         const TypicalityProtocol& protocol) {
  ExperimentMeta meta;
  meta.tau = prog.schedule.tau;
  meta.cycles = protocol.cycles;
  meta.num_sites = spec.num_sites;
  meta.probe = spec.probe;
  meta.realizations = protocol.realizations;
  meta.master_seed = protocol.master_seed;
  meta.axis = axis;
  return meta;
}

void check_run_inputs(const LatticeSpec& spec, const TrotterProgram& prog,
                      const TypicalityProtocol& protocol) {
  if (protocol.realizations < 1) throw std::invalid_argument("realizations must be >= 1");
  if (prog.num_sites != spec.num_sites)
    throw std::invalid_argument("program does not match lattice site count");
}

void check_norm(const StateVector& state) {
  const double drift = std::abs(state.norm() - 1.0);
  if (!(drift <= kNormDriftTol))
    throw NumericError("state norm drifted by " + std::to_string(drift));
}

// mean and standard error of the mean over realizations (rows), reduced in
// fixed row order. sem is 0 for a single realization.
void reduce_rows(const Eigen::MatrixXd& samples, Eigen::VectorXd& mean, Eigen::VectorXd& sem) {
  const auto rows = samples.rows();
  const auto cols = samples.cols();
  mean = Eigen::VectorXd::Zero(cols);
  sem = Eigen::VectorXd::Zero(cols);
  for (Eigen::Index m = 0; m < rows; ++m) mean += samples.row(m).transpose();
  mean /= static_cast<double>(rows);
  if (rows < 2) return;
  for (Eigen::Index m = 0; m < rows; ++m) {
    const Eigen::VectorXd d = samples.row(m).transpose() - mean;
    sem += d.cwiseProduct(d);
  }
  sem = (sem / static_cast<double>(rows - 1)).cwiseSqrt() / std::sqrt(static_cast<double>(rows));
}

}  // namespace

CorrelationSeries run_autocorrelation(const LatticeSpec& spec, const TrotterProgram& prog,
                                      Axis axis, const TypicalityProtocol& protocol) {
  check_run_inputs(spec, prog, protocol);
  const int steps = prog.schedule.steps;
  const int m_count = protocol.realizations;
  Eigen::MatrixXd samples(m_count, steps + 1);

  parallel_for_index(m_count, [&](std::int64_t m) {
    RandomizationConfig rc{protocol.cycles, protocol.master_seed,
                           static_cast<std::uint64_t>(m)};
    if (protocol.estimator == EstimatorKind::ProbeState) {
      StateVector state = prepare_probe_random_state(spec, axis, rc);
      samples(m, 0) = expect_pauli(state, spec.probe, axis);
      run_program(state, prog, [&](int step, const StateVector& st) {
        samples(m, step) = expect_pauli(st, spec.probe, axis);
      });
      check_norm(state);
    } else {
      StateVector plus = prepare_scrambled_background(spec, rc);
      StateVector minus = plus;
      apply_single_qubit_gate(plus, probe_preparation_gate(axis, 1), spec.probe);
      apply_single_qubit_gate(minus, probe_preparation_gate(axis, -1), spec.probe);
      samples(m, 0) =
          0.5 * (expect_pauli(plus, spec.probe, axis) - expect_pauli(minus, spec.probe, axis));
      for (int step = 1; step <= steps; ++step) {
        apply_program_step(plus, prog);
        apply_program_step(minus, prog);
        samples(m, step) =
            0.5 * (expect_pauli(plus, spec.probe, axis) - expect_pauli(minus, spec.probe, axis));
      }
      check_norm(plus);
      check_norm(minus);
    }
  });

  CorrelationSeries series;
  series.realizations = m_count;
  series.axis = axis;
  series.meta = make_meta(spec, prog, axis, protocol);
  series.times.resize(steps + 1);
  for (int s = 0; s <= steps; ++s) series.times[s] = s * prog.schedule.tau;

  Eigen::VectorXd mean, sem;
  reduce_rows(samples, mean, sem);
  series.mean.assign(mean.data(), mean.data() + mean.size());
  series.sem.assign(sem.data(), sem.data() + sem.size());
  return series;
}

SpatialProfile run_spatial_profile(const LatticeSpec& spec, const TrotterProgram& prog,
                                   const TypicalityProtocol& protocol) {
  check_run_inputs(spec, prog, protocol);
  const int steps = prog.schedule.steps;
  const int m_count = protocol.realizations;
  const int n = spec.num_sites;

  // per-realization site profiles, flattened as (step * n + site)
  Eigen::MatrixXd samples(m_count, (steps + 1) * n);

  parallel_for_index(m_count, [&](std::int64_t m) {
    RandomizationConfig rc{protocol.cycles, protocol.master_seed,
                           static_cast<std::uint64_t>(m)};
    auto record = [&](int step, const std::vector<double>& z) {
      for (int q = 0; q < n; ++q) samples(m, step * n + q) = z[q];
    };
    if (protocol.estimator == EstimatorKind::ProbeState) {
      StateVector state = prepare_probe_random_state(spec, Axis::Z, rc);
      record(0, expect_all_z(state));
      run_program(state, prog,
                  [&](int step, const StateVector& st) { record(step, expect_all_z(st)); });
      check_norm(state);
    } else {
      StateVector plus = prepare_scrambled_background(spec, rc);
      StateVector minus = plus;
      apply_single_qubit_gate(minus, probe_preparation_gate(Axis::Z, -1), spec.probe);
      auto record_diff = [&](int step) {
        const std::vector<double> zp = expect_all_z(plus);
        const std::vector<double> zm = expect_all_z(minus);
        for (int q = 0; q < n; ++q) samples(m, step * n + q) = 0.5 * (zp[q] - zm[q]);
      };
      record_diff(0);
      for (int step = 1; step <= steps; ++step) {
        apply_program_step(plus, prog);
        apply_program_step(minus, prog);
        record_diff(step);
      }
      check_norm(plus);
      check_norm(minus);
    }
  });

  SpatialProfile profile;
  profile.realizations = m_count;
  profile.meta = make_meta(spec, prog, Axis::Z, protocol);
  profile.times.resize(steps + 1);
  for (int s = 0; s <= steps; ++s) profile.times[s] = s * prog.schedule.tau;

  Eigen::VectorXd mean, sem;
  reduce_rows(samples, mean, sem);
  profile.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                  Eigen::RowMajor>>(mean.data(), steps + 1, n);
  profile.sem = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                               Eigen::RowMajor>>(sem.data(), steps + 1, n);
  return profile;
}

ScatteringSeries scattering_coefficients(const SpatialProfile& profile, const LatticeSpec& spec) {
  if (!spec.site_partition)
    throw std::invalid_argument("scattering coefficients need a lattice with a site partition");
  if (profile.values.cols() != spec.num_sites)
    throw std::invalid_argument("profile does not match lattice site count");

  const auto& partition = *spec.site_partition;
  ScatteringSeries out;
  out.times = profile.times;
  const auto steps = profile.values.rows();
  out.reflection.resize(steps);
  out.trans_same.resize(steps);
  out.trans_cross.resize(steps);
  out.rung_weight.resize(steps);
  for (Eigen::Index t = 0; t < steps; ++t) {
    double r = 0.0, same = 0.0, cross = 0.0, rung = 0.0;
    for (int q = 0; q < spec.num_sites; ++q) {
      const double v = profile.values(t, q);
      switch (partition[q]) {
        case Region::BeforeRung: r += v; break;
        case Region::AfterRungSameChain: same += v; break;
        case Region::OtherChain: cross += v; break;
        case Region::RungSite: rung += v; break;
      }
    }
    out.reflection[t] = std::abs(r);
    out.trans_same[t] = std::abs(same);
    out.trans_cross[t] = std::abs(cross);
    out.rung_weight[t] = std::abs(rung);
  }
  return out;
}

CorrelationSeries reconstruct_directional(const CorrelationSeries& cxx, const CorrelationSeries& cyy,
                                          const CorrelationSeries& czz, const Eigen::Vector3d& n_hat) {
  if (std::abs(n_hat.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("direction vector must be unit length");
  const auto grids_match = [](const CorrelationSeries& a, const CorrelationSeries& b) {
    return a.times == b.times && a.mean.size() == b.mean.size();
  };
  if (!grids_match(cxx, cyy) || !grids_match(cxx, czz))
    throw std::invalid_argument("correlation series grids do not match");

  const double wx = n_hat.x() * n_hat.x();
  const double wy = n_hat.y() * n_hat.y();
  const double wz = n_hat.z() * n_hat.z();

  CorrelationSeries out = czz;
  out.meta.label = "directional reconstruction";
  for (std::size_t i = 0; i < out.mean.size(); ++i) {
    out.mean[i] = wx * cxx.mean[i] + wy * cyy.mean[i] + wz * czz.mean[i];
    out.sem[i] = std::sqrt(wx * wx * cxx.sem[i] * cxx.sem[i] + wy * wy * cyy.sem[i] * cyy.sem[i] +
                           wz * wz * czz.sem[i] * czz.sem[i]);
  }
  return out;
}

}  // namespace spinkick
