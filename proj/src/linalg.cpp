#include "hv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hv/errors.hpp"

namespace hv::linalg {

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<Complex> entries)
    : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n) {
    throw DimensionMismatch("matrix needs " + std::to_string(n * n) + " entries, got " +
                            std::to_string(a_.size()));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : a_) m = std::max(m, std::abs(z));
  return m;
}

ComplexVector ComplexMatrix::apply(std::span<const Complex> v) const {
  require_same_dim(n_, v.size(), "matrix-vector product");
  ComplexVector out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_dim(n_, o.n_, "matrix sum");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_dim(n_, o.n_, "matrix difference");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : a_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.n_, b.n_, "matrix product");
  const std::size_t n = a.n_;
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) m = std::max(m, std::abs(ea[k] - eb[k]));
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  ComplexMatrix c(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) c(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return c;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  require_same_dim(a.size(), b.size(), "inner product");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs_diff(a * b, b * a);
}

// ---------------------------------------------------------------------------

namespace {

double hermitian_defect(const ComplexMatrix& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  ComplexMatrix s = m;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    s(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.dim(); ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  return s;
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double hermitian_tol) {
  if (m.dim() == 0) throw DimensionMismatch("operator of dimension 0");
  const double d = hermitian_defect(m);
  if (!(d <= hermitian_tol)) {
    throw NotHermitian("||M - M^*||_max = " + std::to_string(d) + " exceeds " +
                       std::to_string(hermitian_tol));
  }
  m_ = symmetrized(m);
}

Projector::Projector(const ComplexMatrix& m, double proj_tol) {
  const double d = hermitian_defect(m);
  if (!(d <= proj_tol)) throw NotProjector("projector is not Hermitian (defect " + std::to_string(d) + ")");
  m_ = symmetrized(m);
  const double idem = max_abs_diff(m_ * m_, m_);
  if (!(idem <= proj_tol)) {
    throw NotProjector("||P^2 - P||_max = " + std::to_string(idem) + " exceeds " + std::to_string(proj_tol));
  }
  const double tr = m_.trace().real();
  const double r = std::round(tr);
  if (std::abs(tr - r) > 1e-6) throw NotProjector("projector trace " + std::to_string(tr) + " is not integral");
  rank_ = static_cast<std::size_t>(std::max(0.0, r));
}

Projector Projector::identity(std::size_t n) { return {Unchecked{}, ComplexMatrix::identity(n), n}; }

Projector Projector::zero(std::size_t n) { return {Unchecked{}, ComplexMatrix::zero(n), 0}; }

Projector Projector::onto(std::span<const ComplexVector> orthonormal, std::size_t n) {
  ComplexMatrix m(n);
  for (const auto& v : orthonormal) {
    require_same_dim(v.size(), n, "Projector::onto");
    m += ComplexMatrix::outer(v);
  }
  return {Unchecked{}, symmetrized(m), orthonormal.size()};
}

Projector Projector::orthocomplement() const {
  return {Unchecked{}, ComplexMatrix::identity(dim()) - m_, dim() - rank_};
}

std::vector<std::size_t> SpectralDecomposition::multiplicities() const {
  std::vector<std::size_t> out;
  out.reserve(projectors.size());
  for (const auto& p : projectors) out.push_back(p.rank());
  return out;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  ComplexMatrix m(dim);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) m += projectors[k].matrix() * eigenvalues[k];
  return m;
}

bool operator==(const SpectralDecomposition& a, const SpectralDecomposition& b) {
  if (a.dim != b.dim || a.eigenvalues != b.eigenvalues) return false;
  for (std::size_t k = 0; k < a.projectors.size(); ++k)
    if (!(a.projectors[k].matrix() == b.projectors[k].matrix())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for complex Hermitian matrices. Each rotation is U = D R where
// D = diag(1, e^{-i phi}) on (p,q) makes a_pq real and R is the real Jacobi
// rotation that annihilates it; A <- U^* A U, V <- V U.

EigenSystem jacobi_eigensystem(const HermitianOperator& t, const EighOptions& opts) {
  const std::size_t n = t.dim();
  ComplexMatrix a = t.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  double frob = 0.0;
  for (const auto& z : a.entries()) frob += std::norm(z);
  frob = std::sqrt(frob);
  const double target = opts.offdiag_tol * std::max(1.0, frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  bool converged = off_norm() < target;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Complex phase = std::conj(apq) / mag;  // e^{-i phi}

        const double theta = (aqq - app) / (2.0 * mag);
        const double tt = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;

        // U block: [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const Complex upp = c, upq = s, uqp = -s * phase, uqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {  // A <- A U
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- U^* A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {  // V <- V U
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - tt * mag;
        a(q, q) = aqq + tt * mag;
      }
    }
    converged = off_norm() < target;
  }
  if (!converged) {
    throw ConvergenceFailure("Jacobi did not converge in " + std::to_string(opts.max_sweeps) +
                             " sweeps (off-diagonal norm " + std::to_string(off_norm()) + ")");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t idx : order) {
    out.values.push_back(a(idx, idx).real());
    ComplexVector col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v(k, idx);
    out.vectors.push_back(std::move(col));
  }
  return out;
}

SpectralDecomposition eigh(const HermitianOperator& t, const EighOptions& opts) {
  if (!(opts.cluster_tol > 0)) throw OutOfDomain("cluster_tol must be positive");
  const EigenSystem es = jacobi_eigensystem(t, opts);
  const std::size_t n = t.dim();

  SpectralDecomposition dec;
  dec.dim = n;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && es.values[end] - es.values[end - 1] <= opts.cluster_tol) ++end;
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) sum += es.values[k];
    dec.eigenvalues.push_back(sum / static_cast<double>(end - start));
    dec.projectors.push_back(Projector::onto(
        std::span<const ComplexVector>(es.vectors.data() + start, end - start), n));
    start = end;
  }
  return dec;
}

Projector projector_meet(const Projector& e, const Projector& f, double meet_tol) {
  require_same_dim(e.dim(), f.dim(), "projector_meet");
  const std::size_t n = e.dim();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const HermitianOperator sum((id - e.matrix()) + (id - f.matrix()), 1e-8);
  const EigenSystem es = jacobi_eigensystem(sum);
  std::vector<ComplexVector> kernel;
  for (std::size_t k = 0; k < n; ++k)
    if (es.values[k] < meet_tol) kernel.push_back(es.vectors[k]);
  return Projector::onto(kernel, n);
}

Projector projector_join(const Projector& e, const Projector& f, double meet_tol) {
  return projector_meet(e.orthocomplement(), f.orthocomplement(), meet_tol).orthocomplement();
}

bool commutes(const Projector& e, const Projector& f, double tol) {
  require_same_dim(e.dim(), f.dim(), "commutes");
  return commutator_norm(e.matrix(), f.matrix()) <= tol;
}

}  // namespace hv::linalg
