#include "hv/bell.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hv/errors.hpp"

namespace hv::bell {

using linalg::ComplexMatrix;
using quantum::BorelSet;

ChshConfig::ChshConfig(Projector e1_, Projector e2_, Projector f1_, Projector f2_, PureState state_)
    : e1(std::move(e1_)), e2(std::move(e2_)), f1(std::move(f1_)), f2(std::move(f2_)), state(std::move(state_)) {
  const std::size_t n = state.dim();
  for (const Projector* p : {&e1, &e2, &f1, &f2}) require_same_dim(p->dim(), n, "ChshConfig");
}

HermitianOperator t_ij(const Projector& e, const Projector& f) {
  require_same_dim(e.dim(), f.dim(), "t_ij");
  const Projector ne = e.orthocomplement();
  const Projector nf = f.orthocomplement();
  ComplexMatrix t = linalg::projector_meet(e, f).matrix();
  t += linalg::projector_meet(ne, nf).matrix();
  t -= linalg::projector_meet(ne, f).matrix();
  t -= linalg::projector_meet(e, nf).matrix();
  return HermitianOperator(t);
}

ChshResult chsh(const ChshConfig& cfg) {
  const std::array<const Projector*, 2> es{&cfg.e1, &cfg.e2};
  const std::array<const Projector*, 2> fs{&cfg.f1, &cfg.f2};
  ChshResult r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.correlations[i][j] = quantum::quadratic_form(t_ij(*es[i], *fs[j]).matrix(), cfg.state);
  const auto& c = r.correlations;
  r.value = std::abs(c[0][0] - c[0][1]) + std::abs(c[1][0] + c[1][1]);
  return r;
}

double chsh_value(const ChshConfig& cfg) { return chsh(cfg).value; }

// ---------------------------------------------------------------------------

PropositionQuadruple::PropositionQuadruple(Proposition a1, Proposition a2, Proposition b1, Proposition b2)
    : a1_(std::move(a1)), a2_(std::move(a2)), b1_(std::move(b1)), b2_(std::move(b2)) {
  if (!a1_.shares_backing(a2_) || !a1_.shares_backing(b1_) || !a1_.shares_backing(b2_)) {
    throw BackingMismatch("proposition quadruple needs one shared backing operator");
  }
}

double FiberStepFunction::operator()(double t) const {
  if (!(t > 0.0 && t < 1.0)) throw OutOfDomain("fiber point must lie in (0,1)");
  const auto it = std::lower_bound(cuts.begin() + 1, cuts.end(), t);
  return values[static_cast<std::size_t>(it - (cuts.begin() + 1))];
}

double FiberStepFunction::integral() const {
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) s += values[k] * (cuts[k + 1] - cuts[k]);
  return s;
}

namespace {

struct SignedParts {
  BorelSet pp, mm, mp, pm;  // A∩B, ∁A∩∁B, ∁A∩B, A∩∁B on the fiber

  double at(double t) const {
    return (pp.contains(t) ? 1.0 : 0.0) + (mm.contains(t) ? 1.0 : 0.0) - (mp.contains(t) ? 1.0 : 0.0) -
           (pm.contains(t) ? 1.0 : 0.0);
  }
};

SignedParts signed_parts(const Proposition& a, const Proposition& b, const PureState& h) {
  const Proposition na = a.complement();
  const Proposition nb = b.complement();
  return {hidden::fiber_subset(a.intersect(b), h), hidden::fiber_subset(na.intersect(nb), h),
          hidden::fiber_subset(na.intersect(b), h), hidden::fiber_subset(a.intersect(nb), h)};
}

}  // namespace

std::array<std::array<FiberStepFunction, 2>, 2> classical_chsh_functions(const PropositionQuadruple& q,
                                                                         const PureState& h) {
  std::array<std::array<SignedParts, 2>, 2> parts;
  std::vector<double> cuts{0.0, 1.0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      parts[i][j] = signed_parts(q.a(i + 1), q.b(j + 1), h);
      for (const BorelSet* s : {&parts[i][j].pp, &parts[i][j].mm, &parts[i][j].mp, &parts[i][j].pm})
        for (const auto& iv : s->intervals()) {
          cuts.push_back(iv.lo);
          cuts.push_back(iv.hi);
        }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::array<std::array<FiberStepFunction, 2>, 2> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      FiberStepFunction f{cuts, {}};
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) f.values.push_back(parts[i][j].at(0.5 * (cuts[k] + cuts[k + 1])));
      out[i][j] = std::move(f);
    }
  }
  return out;
}

double classical_chsh_pointwise(const PropositionQuadruple& q, const PureState& h, int i, int j, double t) {
  return signed_parts(q.a(i), q.b(j), h).at(t);
}

// ---------------------------------------------------------------------------

std::vector<Proposition> joint_family(std::span<const Projector> family) {
  if (family.empty()) return {};
  const std::size_t n = family.front().dim();
  for (std::size_t a = 0; a < family.size(); ++a) {
    require_same_dim(family[a].dim(), n, "joint_family");
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      if (!linalg::commutes(family[a], family[b])) {
        throw NotCommuting("projectors " + std::to_string(a) + " and " + std::to_string(b) +
                           " do not commute (||[E,F]||_max = " +
                           std::to_string(linalg::commutator_norm(family[a].matrix(), family[b].matrix())) + ")");
      }
    }
  }

  ComplexMatrix m(n);
  for (std::size_t k = 0; k < family.size(); ++k) m += family[k].matrix() * static_cast<double>(1u << k);
  linalg::SpectralDecomposition dec = linalg::eigh(HermitianOperator(m, 1e-8));

  const auto labels = static_cast<double>(1u << family.size());
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    const double r = std::round(dec.eigenvalues[k]);
    if (std::abs(dec.eigenvalues[k] - r) > kLabelSnapTol || r < 0 || r >= labels ||
        (k > 0 && r == dec.eigenvalues[k - 1])) {
      throw DegenerateLabeling("joint eigenvalue " + std::to_string(dec.eigenvalues[k]) +
                               " does not sit on a distinct sector label");
    }
    dec.eigenvalues[k] = r;
  }
  auto backing = std::make_shared<const linalg::SpectralDecomposition>(std::move(dec));

  std::vector<Proposition> out;
  for (std::size_t k = 0; k < family.size(); ++k) {
    std::vector<double> sector;
    for (double label : backing->eigenvalues)
      if (static_cast<unsigned>(label) & (1u << k)) sector.push_back(label);
    out.emplace_back(backing, BorelSet::points(sector));
  }
  return out;
}

std::pair<Proposition, Proposition> joint_propositions(const Projector& e, const Projector& f) {
  const std::array<Projector, 2> fam{e, f};
  auto props = joint_family(fam);
  return {props[0], props[1]};
}

PropositionQuadruple joint_quadruple(const Projector& e1, const Projector& e2, const Projector& f1,
                                     const Projector& f2) {
  const std::array<Projector, 4> fam{e1, e2, f1, f2};
  auto props = joint_family(fam);
  return {props[0], props[1], props[2], props[3]};
}

HomomorphismCheck check_boolean_homomorphism(const Proposition& a, const Proposition& b, double tol) {
  if (!a.shares_backing(b)) throw BackingMismatch("check_boolean_homomorphism needs a shared backing");

  const std::array<Proposition, 4> atoms{a.intersect(b), a.intersect(b.complement()),
                                         a.complement().intersect(b),
                                         a.complement().intersect(b.complement())};
  std::vector<Proposition> algebra;
  std::vector<Projector> images;
  for (unsigned mask = 0; mask < 16; ++mask) {
    Proposition x(a.backing_ptr(), BorelSet::empty_set());
    for (unsigned k = 0; k < 4; ++k)
      if (mask & (1u << k)) x = x.unite(atoms[k]);
    images.push_back(hidden::epsilon(x));
    algebra.push_back(std::move(x));
  }

  HomomorphismCheck out;
  auto note = [&](const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    out.max_residual = std::max(out.max_residual, linalg::max_abs_diff(lhs, rhs));
  };
  for (std::size_t x = 0; x < algebra.size(); ++x) {
    note(hidden::epsilon(algebra[x].complement()).matrix(), images[x].orthocomplement().matrix());
    for (std::size_t y = x; y < algebra.size(); ++y) {
      note(hidden::epsilon(algebra[x].intersect(algebra[y])).matrix(),
           linalg::projector_meet(images[x], images[y]).matrix());
      note(hidden::epsilon(algebra[x].unite(algebra[y])).matrix(),
           linalg::projector_join(images[x], images[y]).matrix());
    }
  }
  // The generators themselves.
  note(hidden::epsilon(a.intersect(b)).matrix(),
       linalg::projector_meet(hidden::epsilon(a), hidden::epsilon(b)).matrix());
  note(hidden::epsilon(a.unite(b)).matrix(), linalg::projector_join(hidden::epsilon(a), hidden::epsilon(b)).matrix());

  out.homomorphism = out.max_residual <= tol;
  out.commutes = linalg::commutes(hidden::epsilon(a), hidden::epsilon(b));
  return out;
}

}  // namespace hv::bell
