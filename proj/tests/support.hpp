#pragma once

// Random instance generators and independent oracles shared by the test
// binaries. Nothing here calls into the eigensolver.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hv/bell.hpp"
#include "hv/hidden.hpp"
#include "hv/linalg.hpp"
#include "hv/quantum.hpp"

namespace hv::testing {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::HermitianOperator;
using linalg::Projector;
using quantum::BorelSet;
using quantum::Interval;
using quantum::PiecewiseAffineFunction;
using quantum::PureState;

using Rng = std::mt19937_64;

inline double gauss(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }
inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
inline int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

inline ComplexVector random_vector(Rng& rng, std::size_t n) {
  ComplexVector v(n);
  for (auto& z : v) z = Complex(gauss(rng), gauss(rng));
  return v;
}

inline PureState random_state(Rng& rng, std::size_t n) { return PureState(random_vector(rng, n)); }

inline HermitianOperator random_hermitian(Rng& rng, std::size_t n) {
  ComplexMatrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return HermitianOperator((g + g.adjoint()) * Complex(0.5));
}

/// Haar-ish unitary: Gram-Schmidt on Gaussian columns. Column k is vecs[k].
inline std::vector<ComplexVector> random_orthonormal_basis(Rng& rng, std::size_t n) {
  std::vector<ComplexVector> basis;
  while (basis.size() < n) {
    ComplexVector v = random_vector(rng, n);
    for (const auto& b : basis) {
      const Complex c = linalg::inner(b, v);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
    }
    const double nv = linalg::norm(v);
    if (nv < 1e-6) continue;
    for (auto& z : v) z /= nv;
    basis.push_back(std::move(v));
  }
  return basis;
}

/// U diag(d) U^* for a random unitary U.
inline ComplexMatrix rotated_diagonal(const std::vector<ComplexVector>& basis, const std::vector<double>& d) {
  ComplexMatrix m(basis.size());
  for (std::size_t k = 0; k < d.size(); ++k) m += ComplexMatrix::outer(basis[k]) * d[k];
  return m;
}

/// Hermitian operator with small-integer spectrum, so eigenvalues repeat.
inline HermitianOperator random_degenerate_hermitian(Rng& rng, std::size_t n) {
  std::vector<double> d(n);
  for (auto& x : d) x = uniform_int(rng, -2, 2);
  return HermitianOperator(rotated_diagonal(random_orthonormal_basis(rng, n), d));
}

inline Projector random_projector(Rng& rng, std::size_t n) {
  const auto basis = random_orthonormal_basis(rng, n);
  const auto rank = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(n)));
  return Projector::onto(std::span<const ComplexVector>(basis.data(), rank), n);
}

/// Commuting pair: diagonal 0/1 patterns in one random basis.
inline std::pair<Projector, Projector> random_commuting_pair(Rng& rng, std::size_t n) {
  const auto basis = random_orthonormal_basis(rng, n);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = uniform_int(rng, 0, 1);
    b[i] = uniform_int(rng, 0, 1);
  }
  return {Projector(rotated_diagonal(basis, a)), Projector(rotated_diagonal(basis, b))};
}

/// Random piecewise-affine map with 0-3 breakpoints; slopes are sometimes 0
/// and point values sometimes jump, so the map is often non-injective.
inline PiecewiseAffineFunction random_piecewise(Rng& rng) {
  const int r = uniform_int(rng, 0, 3);
  std::vector<double> br;
  for (int i = 0; i < r; ++i) br.push_back(uniform(rng, -3.0, 3.0));
  std::sort(br.begin(), br.end());
  std::vector<quantum::AffinePiece> pieces;
  for (int i = 0; i <= r; ++i) {
    const double slope = uniform_int(rng, 0, 3) == 0 ? 0.0 : uniform(rng, -2.0, 2.0);
    pieces.push_back({slope, uniform(rng, -2.0, 2.0)});
  }
  std::vector<double> vals;
  for (int i = 0; i < r; ++i) vals.push_back(uniform_int(rng, 0, 1) ? pieces[i](br[i]) : uniform(rng, -2.0, 2.0));
  return {br, pieces, vals};
}

inline Interval random_interval(Rng& rng, double lo, double hi) {
  double a = uniform(rng, lo, hi), b = uniform(rng, lo, hi);
  if (a > b) std::swap(a, b);
  Interval iv{a, b, uniform_int(rng, 0, 1) == 1, uniform_int(rng, 0, 1) == 1};
  switch (uniform_int(rng, 0, 5)) {
    case 0: iv.lo = -quantum::kInf; break;
    case 1: iv.hi = quantum::kInf; break;
    case 2: iv.hi = iv.lo; iv.lo_closed = iv.hi_closed = true; break;
    default: break;
  }
  return iv;
}

inline BorelSet random_borel(Rng& rng, double lo = -4.0, double hi = 4.0) {
  std::vector<Interval> parts;
  const int k = uniform_int(rng, 0, 3);
  for (int i = 0; i < k; ++i) parts.push_back(random_interval(rng, lo, hi));
  return BorelSet(std::move(parts));
}

/// Spin-up projector along angle a in the x-z plane of one qubit.
inline ComplexMatrix spin_projector(double a) {
  ComplexMatrix p(2);
  p(0, 0) = 0.5 * (1 + std::cos(a));
  p(1, 1) = 0.5 * (1 - std::cos(a));
  p(0, 1) = 0.5 * std::sin(a);
  p(1, 0) = 0.5 * std::sin(a);
  return p;
}

inline ComplexMatrix pauli_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
inline ComplexMatrix pauli_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

inline PureState singlet() { return PureState({0.0, 1.0, -1.0, 0.0}); }

/// Singlet CHSH configuration with E at 0, pi/2 and F at pi/4, 3pi/4.
inline bell::ChshConfig singlet_chsh() {
  const auto id = ComplexMatrix::identity(2);
  const double pi = std::numbers::pi;
  return {Projector(linalg::kron(spin_projector(0.0), id)), Projector(linalg::kron(spin_projector(pi / 2), id)),
          Projector(linalg::kron(id, spin_projector(pi / 4))), Projector(linalg::kron(id, spin_projector(3 * pi / 4))),
          singlet()};
}

}  // namespace hv::testing
