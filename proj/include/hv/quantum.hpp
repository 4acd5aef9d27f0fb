#pragma once

// The quantum statistical system over a finite-dimensional Hilbert space:
// rays as states, Hermitian matrices as observables, and the spectral
// probability pi(T, [h], B) = <h, E_B h> / <h, h>.

#include "hv/borel.hpp"
#include "hv/linalg.hpp"

namespace hv::quantum {

using linalg::Complex;
using linalg::ComplexVector;
using linalg::HermitianOperator;
using linalg::Projector;
using linalg::SpectralDecomposition;

inline constexpr double kSnapTol = 1e-9;
inline constexpr double kRayTol = 1e-9;

/// A ray [h], stored as a unit vector.
class PureState {
 public:
  explicit PureState(ComplexVector h);

  static PureState basis(std::size_t n, std::size_t i);

  const ComplexVector& vector() const { return h_; }
  std::size_t dim() const { return h_.size(); }

  /// |<h,k>| = 1 within tol.
  bool same_ray(const PureState& other, double tol = kRayTol) const;

 private:
  ComplexVector h_;
};

/// <h, M h> for a unit vector h.
double quadratic_form(const linalg::ComplexMatrix& m, const PureState& h);
/// <E>_h
double expectation_of(const Projector& e, const PureState& h);

/// E_B^T: sum of eigenprojectors whose eigenvalue lies in B. Eigenvalues
/// within snap_tol of a finite endpoint are treated as sitting on it.
Projector spectral_projector(const SpectralDecomposition& dec, const BorelSet& b, double snap_tol = kSnapTol);

/// <E_B^T>_h, in [0, 1].
double prob(const SpectralDecomposition& dec, const PureState& h, const BorelSet& b,
            double snap_tol = kSnapTol);

/// sum_k lambda_k <P_k>_h
double expectation(const SpectralDecomposition& dec, const PureState& h);

/// F_[h](u) = <E_(-inf,u]>_h, right-continuous in u.
double cdf(const SpectralDecomposition& dec, const PureState& h, double u, double snap_tol = kSnapTol);

/// g(T) = sum_k g(lambda_k) P_k
HermitianOperator functional_calculus(const SpectralDecomposition& dec, const PiecewiseAffineFunction& g);

}  // namespace hv::quantum
