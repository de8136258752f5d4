#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "spinkick/engine.hpp"
#include "spinkick/model.hpp"

// Test-side linear algebra, kept independent of the engine's bit kernels so
// it can serve as an oracle for them.
namespace testutil {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// high ⊗ low (same bit convention as the engine: B indexes the low bit)
inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Full 2^n x 2^n matrix of a two-site gate, built entry by entry from basis
// bit manipulation (independent of the engine's group-loop kernel).
inline MatrixXcd embed_two_site(const Eigen::Matrix4cd& u, int site_a, int site_b, int n) {
  const std::int64_t dim = std::int64_t{1} << n;
  MatrixXcd out = MatrixXcd::Zero(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    const int la = (col >> site_a) & 1;
    const int lb = (col >> site_b) & 1;
    const int l = la + 2 * lb;
    for (int k = 0; k < 4; ++k) {
      std::int64_t row = col;
      row &= ~(std::int64_t{1} << site_a);
      row &= ~(std::int64_t{1} << site_b);
      row |= std::int64_t{k & 1} << site_a;
      row |= std::int64_t{(k >> 1) & 1} << site_b;
      out(row, col) += u(k, l);
    }
  }
  return out;
}

inline MatrixXcd embed_single_site(const Eigen::Matrix2cd& u, int site, int n) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q)
    out = kron(out, q == site ? MatrixXcd(u) : MatrixXcd(Eigen::Matrix2cd::Identity()));
  return out;
}

// max elementwise |A * phase - B| with the phase chosen from B's largest entry
inline double phase_aligned_distance(const MatrixXcd& a, const MatrixXcd& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(a(r, c)) < 1e-14) return std::numeric_limits<double>::infinity();
  const std::complex<double> phase = b(r, c) / a(r, c);
  if (std::abs(std::abs(phase) - 1.0) > 1e-6) return std::numeric_limits<double>::infinity();
  return ((a * phase) - b).cwiseAbs().maxCoeff();
}

inline spinkick::StateVector random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  spinkick::StateVector st = spinkick::StateVector::zero_state(n);
  for (Eigen::Index i = 0; i < st.amplitudes.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    st.amplitudes[i] = std::complex<double>(re, im);
  }
  st.amplitudes.normalize();
  return st;
}

inline Eigen::Matrix4cd heisenberg_matrix(double j, double lx, double ly, double lz) {
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  sz << 1, 0, 0, -1;
  const MatrixXcd m =
      lx * kron(sx, sx) + ly * kron(sy, sy) + lz * kron(sz, sz);
  return (j / 4.0) * Eigen::Matrix4cd(m);
}

}  // namespace testutil
