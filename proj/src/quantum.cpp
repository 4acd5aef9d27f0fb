#include "hv/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "hv/errors.hpp"

namespace hv::quantum {

PureState::PureState(ComplexVector h) : h_(std::move(h)) {
  if (h_.empty()) throw DimensionMismatch("state of dimension 0");
  const double n = linalg::norm(h_);
  if (!(n > 0.0) || !std::isfinite(n)) throw OutOfDomain("state vector must be nonzero and finite");
  for (auto& z : h_) z /= n;
}

PureState PureState::basis(std::size_t n, std::size_t i) {
  ComplexVector v(n);
  v.at(i) = 1.0;
  return PureState(std::move(v));
}

bool PureState::same_ray(const PureState& other, double tol) const {
  require_same_dim(dim(), other.dim(), "same_ray");
  return std::abs(std::abs(linalg::inner(h_, other.h_)) - 1.0) <= tol;
}

double quadratic_form(const linalg::ComplexMatrix& m, const PureState& h) {
  require_same_dim(m.dim(), h.dim(), "quadratic_form");
  return linalg::inner(h.vector(), m.apply(h.vector())).real();
}

double expectation_of(const Projector& e, const PureState& h) {
  return std::clamp(quadratic_form(e.matrix(), h), 0.0, 1.0);
}

Projector spectral_projector(const SpectralDecomposition& dec, const BorelSet& b, double snap_tol) {
  linalg::ComplexMatrix m(dec.dim);
  std::size_t rank = 0;
  bool any = false;
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    if (b.contains_snapped(dec.eigenvalues[k], snap_tol)) {
      m += dec.projectors[k].matrix();
      rank += dec.projectors[k].rank();
      any = true;
    }
  }
  if (!any) return Projector::zero(dec.dim);
  if (rank == dec.dim) return Projector::identity(dec.dim);
  return Projector(m);
}

double prob(const SpectralDecomposition& dec, const PureState& h, const BorelSet& b, double snap_tol) {
  require_same_dim(dec.dim, h.dim(), "prob");
  double p = 0.0;
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    if (b.contains_snapped(dec.eigenvalues[k], snap_tol)) p += quadratic_form(dec.projectors[k].matrix(), h);
  }
  return std::clamp(p, 0.0, 1.0);
}

double expectation(const SpectralDecomposition& dec, const PureState& h) {
  require_same_dim(dec.dim, h.dim(), "expectation");
  double e = 0.0;
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k)
    e += dec.eigenvalues[k] * quadratic_form(dec.projectors[k].matrix(), h);
  return e;
}

double cdf(const SpectralDecomposition& dec, const PureState& h, double u, double snap_tol) {
  return prob(dec, h, BorelSet::at_most(u), snap_tol);
}

HermitianOperator functional_calculus(const SpectralDecomposition& dec, const PiecewiseAffineFunction& g) {
  linalg::ComplexMatrix m(dec.dim);
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) m += dec.projectors[k].matrix() * g(dec.eigenvalues[k]);
  return HermitianOperator(m);
}

}  // namespace hv::quantum
