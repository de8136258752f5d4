#include <doctest.h>

#include <cmath>
#include <cstring>

#include "spinkick/correlator.hpp"
#include "spinkick/engine.hpp"

using namespace spinkick;

namespace {

TypicalityProtocol protocol(int realizations, std::uint64_t seed,
                            EstimatorKind kind = EstimatorKind::ProbeState, int cycles = 9) {
  TypicalityProtocol p;
  p.cycles = cycles;
  p.realizations = realizations;
  p.master_seed = seed;
  p.estimator = kind;
  return p;
}

}  // namespace

TEST_CASE("autocorrelation starts at exactly one and rejects M = 0") {
  const LatticeSpec spec = build_folded_chain(8, {{2, 5}}, RungStyle::DirectBond, 0);
  const TrotterProgram prog = compile_program(spec, {1.0, 4}, 1.0, 1.0, {0, 0, 1});

  for (EstimatorKind kind : {EstimatorKind::ProbeState, EstimatorKind::ProbeDifference}) {
    const CorrelationSeries series = run_autocorrelation(spec, prog, Axis::Z, protocol(6, 11, kind));
    REQUIRE(series.mean.size() == 5);
    CHECK(std::abs(series.mean[0] - 1.0) < 1e-12);
    CHECK(series.sem[0] < 1e-12);
    for (double s : series.sem) CHECK(s >= 0.0);
    CHECK(series.times[1] == 1.0);
  }
  CHECK_THROWS_AS(run_autocorrelation(spec, prog, Axis::Z, protocol(0, 11)), std::invalid_argument);
}

TEST_CASE("estimator matches the dense trace oracle within errors") {
  // reduced version of the oracle-equivalence gate: n=8, one rung, M=200
  const LatticeSpec spec = build_folded_chain(8, {{2, 5}}, RungStyle::DirectBond, 0);
  const TrotterProgram prog = compile_program(spec, {1.0, 8}, 1.0, 1.0, {0, 0, 1});
  const auto exact = dense_trace_correlator(spec, prog, 0, 0, Axis::Z);
  const CorrelationSeries est = run_autocorrelation(spec, prog, Axis::Z, protocol(200, 7));
  for (std::size_t s = 0; s < exact.size(); ++s) {
    const double bound = std::max(3.0 * est.sem[s], 0.02);
    CHECK(std::abs(est.mean[s] - exact[s]) <= bound);
  }
}

TEST_CASE("single-realization estimator stays within the typicality bound") {
  // |estimate - trace| <= 5 * 2^(-n/2) in sup norm over 10 steps for at least
  // 95 of 100 seeds at n = 10
  const LatticeSpec spec = build_folded_chain(10, {{3, 6}}, RungStyle::DirectBond, 0);
  const TrotterProgram prog = compile_program(spec, {1.0, 10}, 1.0, 1.0, {0, 0, 1});
  const auto exact = dense_trace_correlator(spec, prog, 0, 0, Axis::Z);
  const double bound = 5.0 * std::pow(2.0, -5.0);

  int hits = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const CorrelationSeries one =
        run_autocorrelation(spec, prog, Axis::Z, protocol(1, 50000 + seed));
    double sup = 0.0;
    for (std::size_t s = 0; s < exact.size(); ++s)
      sup = std::max(sup, std::abs(one.mean[s] - exact[s]));
    if (sup <= bound) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("standard error shrinks like one over sqrt(M)") {
  const LatticeSpec spec = build_folded_chain(10, {}, RungStyle::DirectBond, 0);
  const TrotterProgram prog = compile_program(spec, {1.0, 6}, 1.0, 0.0, {0, 0, 0});

  // average late-step sem over a few steps to stabilize the estimate
  auto late_sem = [&](int m) {
    const CorrelationSeries s = run_autocorrelation(spec, prog, Axis::Z, protocol(m, 2024));
    double acc = 0.0;
    for (std::size_t k = 3; k < s.sem.size(); ++k) acc += s.sem[k];
    return acc / (s.sem.size() - 3);
  };
  const double s5 = late_sem(5), s20 = late_sem(20), s80 = late_sem(80);
  const double slope = std::log(s80 / s5) / std::log(80.0 / 5.0);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.25));
  CHECK(s20 < s5);
  CHECK(s80 < s20);
}

TEST_CASE("spatial profile structure") {
  const LatticeSpec spec = build_scattering_geometry(5, 2, 2);
  const TrotterProgram prog = compile_program(spec, {1.0, 5}, 1.0, 4.0, {1, 1, 0});

  SUBCASE("step zero is one-hot at the probe (difference estimator is exact)") {
    const SpatialProfile profile =
        run_spatial_profile(spec, prog, protocol(4, 5, EstimatorKind::ProbeDifference));
    CHECK(profile.values(0, spec.probe) == doctest::Approx(1.0).epsilon(1e-12));
    for (int q = 0; q < spec.num_sites; ++q)
      if (q != spec.probe) CHECK(std::abs(profile.values(0, q)) < 1e-12);
  }
  SUBCASE("probe column bitwise equals the autocorrelation from the same seeds") {
    for (EstimatorKind kind : {EstimatorKind::ProbeState, EstimatorKind::ProbeDifference}) {
      const auto p = protocol(3, 77, kind);
      const SpatialProfile profile = run_spatial_profile(spec, prog, p);
      const CorrelationSeries series = run_autocorrelation(spec, prog, Axis::Z, p);
      for (std::size_t t = 0; t < series.mean.size(); ++t) {
        CHECK(std::memcmp(&profile.values(t, spec.probe), &series.mean[t], sizeof(double)) == 0);
        CHECK(std::memcmp(&profile.sem(t, spec.probe), &series.sem[t], sizeof(double)) == 0);
      }
    }
  }
  SUBCASE("per-realization total magnetization is conserved for lx == ly") {
    const SpatialProfile profile =
        run_spatial_profile(spec, prog, protocol(1, 3, EstimatorKind::ProbeState));
    for (std::size_t t = 0; t < profile.times.size(); ++t)
      CHECK(profile.values.row(t).sum() ==
            doctest::Approx(profile.values.row(0).sum()).epsilon(1e-10));
  }
}

TEST_CASE("uncoupled chains leave the other chain at machine zero") {
  const LatticeSpec spec = build_scattering_geometry(5, 2, 2);
  const TrotterProgram prog = compile_program(spec, {1.0, 6}, 1.0, 0.0, {0, 0, 0});
  const SpatialProfile profile =
      run_spatial_profile(spec, prog, protocol(5, 9, EstimatorKind::ProbeDifference));
  REQUIRE(spec.site_partition.has_value());
  for (int q = 0; q < spec.num_sites; ++q) {
    if ((*spec.site_partition)[q] != Region::OtherChain) continue;
    for (std::size_t t = 0; t < profile.times.size(); ++t)
      CHECK(std::abs(profile.values(t, q)) < 1e-12);
  }
}

TEST_CASE("scattering coefficients") {
  const LatticeSpec spec = build_scattering_geometry(5, 2, 2);

  SUBCASE("step zero: all weight reflected") {
    const TrotterProgram prog = compile_program(spec, {1.0, 3}, 1.0, 4.0, {1, 1, 0});
    const SpatialProfile profile =
        run_spatial_profile(spec, prog, protocol(4, 5, EstimatorKind::ProbeDifference));
    const ScatteringSeries scat = scattering_coefficients(profile, spec);
    CHECK(scat.reflection[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scat.trans_same[0] < 1e-12);
    CHECK(scat.trans_cross[0] < 1e-12);
  }
  SUBCASE("zz rung blocks cross transmission; xx+yy lets it through") {
    const TrotterProgram zz = compile_program(spec, {1.0, 8}, 1.0, 4.0, {0, 0, 1});
    const SpatialProfile pzz =
        run_spatial_profile(spec, zz, protocol(4, 5, EstimatorKind::ProbeDifference));
    const ScatteringSeries szz = scattering_coefficients(pzz, spec);
    for (double v : szz.trans_cross) CHECK(v <= 1e-10);

    const TrotterProgram xy = compile_program(spec, {1.0, 8}, 1.0, 4.0, {1, 1, 0});
    const SpatialProfile pxy =
        run_spatial_profile(spec, xy, protocol(4, 5, EstimatorKind::ProbeDifference));
    const ScatteringSeries sxy = scattering_coefficients(pxy, spec);
    double max_cross = 0.0;
    for (double v : sxy.trans_cross) max_cross = std::max(max_cross, v);
    CHECK(max_cross > 1e-8);
  }
  SUBCASE("missing partition is rejected") {
    const LatticeSpec chain = build_folded_chain(6, {}, RungStyle::DirectBond, 0);
    const TrotterProgram prog = compile_program(chain, {1.0, 2}, 1.0, 0.0, {0, 0, 0});
    const SpatialProfile profile = run_spatial_profile(chain, prog, protocol(2, 1));
    CHECK_THROWS_AS(scattering_coefficients(profile, chain), std::invalid_argument);
  }
}

TEST_CASE("directional reconstruction") {
  const LatticeSpec spec = build_folded_chain(8, {{2, 5}}, RungStyle::DirectBond, 0);
  const TrotterProgram prog = compile_program(spec, {1.0, 5}, 1.0, 1.0, {0, 0, 1});
  const CorrelationSeries cxx = run_autocorrelation(spec, prog, Axis::X, protocol(5, 31));
  const CorrelationSeries cyy = run_autocorrelation(spec, prog, Axis::Y, protocol(5, 32));
  const CorrelationSeries czz = run_autocorrelation(spec, prog, Axis::Z, protocol(5, 33));

  SUBCASE("z direction returns Czz unchanged") {
    const CorrelationSeries r = reconstruct_directional(cxx, cyy, czz, {0, 0, 1});
    for (std::size_t i = 0; i < r.mean.size(); ++i) {
      CHECK(r.mean[i] == czz.mean[i]);
      CHECK(r.sem[i] == doctest::Approx(czz.sem[i]).epsilon(1e-14));
    }
  }
  SUBCASE("diagonal direction is the midpoint of Cxx and Czz") {
    const double s = 1.0 / std::sqrt(2.0);
    const CorrelationSeries r = reconstruct_directional(cxx, cyy, czz, {s, 0, s});
    for (std::size_t i = 0; i < r.mean.size(); ++i)
      CHECK(r.mean[i] == doctest::Approx(0.5 * (cxx.mean[i] + czz.mean[i])).epsilon(1e-12));
  }
  SUBCASE("error propagation in quadrature with fourth-power weights") {
    const double s = 1.0 / std::sqrt(2.0);
    const CorrelationSeries r = reconstruct_directional(cxx, cyy, czz, {s, 0, s});
    for (std::size_t i = 0; i < r.sem.size(); ++i)
      CHECK(r.sem[i] == doctest::Approx(0.5 * std::sqrt(cxx.sem[i] * cxx.sem[i] +
                                                        czz.sem[i] * czz.sem[i]))
                            .epsilon(1e-12));
  }
  SUBCASE("bad inputs rejected") {
    CHECK_THROWS_AS(reconstruct_directional(cxx, cyy, czz, {0.5, 0.5, 0.5}), std::invalid_argument);
    CorrelationSeries truncated = cyy;
    truncated.times.pop_back();
    truncated.mean.pop_back();
    truncated.sem.pop_back();
    CHECK_THROWS_AS(reconstruct_directional(cxx, truncated, czz, {0, 0, 1}), std::invalid_argument);
  }
}

TEST_CASE("axis-permutation equivalence holds for the estimator within errors") {
  // <0,0,1>_zz vs <1,0,0>_xx at modest size; independent noise, 3 sigma band
  const LatticeSpec spec = build_folded_chain(12, {{3, 8}}, RungStyle::DirectBond, 0);
  const TrotterProgram zz_prog = compile_program(spec, {1.0, 8}, 1.0, 1.0, {0, 0, 1});
  const TrotterProgram xx_prog = compile_program(spec, {1.0, 8}, 1.0, 1.0, {1, 0, 0});
  const CorrelationSeries zz = run_autocorrelation(spec, zz_prog, Axis::Z, protocol(24, 8001));
  const CorrelationSeries xx = run_autocorrelation(spec, xx_prog, Axis::X, protocol(24, 8002));
  for (std::size_t s = 0; s < zz.mean.size(); ++s) {
    const double combined = std::sqrt(zz.sem[s] * zz.sem[s] + xx.sem[s] * xx.sem[s]);
    CHECK(std::abs(zz.mean[s] - xx.mean[s]) <= std::max(3.0 * combined, 1e-12));
  }
}
