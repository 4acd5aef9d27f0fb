#pragma once

// Dense complex linear algebra for small Hilbert spaces: Hermitian
// eigendecomposition by complex Jacobi rotations and the projector lattice.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hv::linalg {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Square n x n complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n);
  ComplexMatrix(std::size_t n, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }
  static ComplexMatrix diagonal(std::span<const double> d);
  /// |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t dim() const { return n_; }
  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const Complex> entries() const { return a_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// max_ij |a_ij|
  double max_abs() const;
  ComplexVector apply(std::span<const Complex> v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> a_;
};

/// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // <a,b>, antilinear in a
double norm(std::span<const Complex> v);

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kProjectorTol = 1e-9;
inline constexpr double kClusterTol = 1e-8;
inline constexpr double kMeetTol = 1e-8;
inline constexpr double kCommuteTol = 1e-9;

/// Self-adjoint operator. The stored matrix is symmetrized, (M + M^*)/2,
/// after the Hermitian check passes.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m, double hermitian_tol = kHermitianTol);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }

 private:
  ComplexMatrix m_;
};

/// Orthogonal projector: Hermitian and idempotent.
class Projector {
 public:
  explicit Projector(const ComplexMatrix& m, double proj_tol = kProjectorTol);

  static Projector identity(std::size_t n);
  static Projector zero(std::size_t n);
  /// Projector onto the span of orthonormal vectors.
  static Projector onto(std::span<const ComplexVector> orthonormal, std::size_t n);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }
  std::size_t rank() const { return rank_; }
  /// I - P
  Projector orthocomplement() const;

 private:
  struct Unchecked {};
  Projector(Unchecked, ComplexMatrix m, std::size_t rank) : m_(std::move(m)), rank_(rank) {}

  ComplexMatrix m_;
  std::size_t rank_ = 0;
};

/// Distinct eigenvalues in increasing order with their eigenprojectors.
struct SpectralDecomposition {
  std::size_t dim = 0;
  std::vector<double> eigenvalues;
  std::vector<Projector> projectors;

  std::vector<std::size_t> multiplicities() const;
  /// sum_k lambda_k P_k
  ComplexMatrix reconstruct() const;
  friend bool operator==(const SpectralDecomposition& a, const SpectralDecomposition& b);
};

/// Raw eigensystem: ascending eigenvalues and orthonormal eigenvectors.
struct EigenSystem {
  std::vector<double> values;
  std::vector<ComplexVector> vectors;
};

struct EighOptions {
  double cluster_tol = kClusterTol;
  int max_sweeps = 100;
  /// Off-diagonal Frobenius norm target, relative to max(1, ||T||_F).
  double offdiag_tol = 1e-12;
};

/// Cyclic complex Jacobi. Throws ConvergenceFailure when the sweep budget runs out.
EigenSystem jacobi_eigensystem(const HermitianOperator& t, const EighOptions& opts = {});

/// Spectral decomposition with eigenvalues closer than cluster_tol merged
/// into one eigenvalue (multiplicity-weighted mean, summed projector).
SpectralDecomposition eigh(const HermitianOperator& t, const EighOptions& opts = {});

/// Projector onto range(E) ∩ range(F): the null space of (I-E)+(I-F).
Projector projector_meet(const Projector& e, const Projector& f, double meet_tol = kMeetTol);
/// I - meet(I-E, I-F)
Projector projector_join(const Projector& e, const Projector& f, double meet_tol = kMeetTol);
/// ||EF - FE||_max <= tol
bool commutes(const Projector& e, const Projector& f, double tol = kCommuteTol);
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace hv::linalg
