#pragma once

// CHSH quantities built from projector meets, their classical counterparts on
// the hidden fibers, and the commuting-projector construction of jointly
// represented propositions.

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "hv/hidden.hpp"

namespace hv::bell {

using hidden::Proposition;
using linalg::HermitianOperator;
using linalg::Projector;
using quantum::PureState;

inline constexpr double kLabelSnapTol = 1e-6;
inline constexpr double kClassicalBoundTol = 1e-9;

/// Two couples of projectors and the state they are evaluated at.
struct ChshConfig {
  Projector e1, e2, f1, f2;
  PureState state;

  ChshConfig(Projector e1, Projector e2, Projector f1, Projector f2, PureState state);
};

/// E∧F + (I-E)∧(I-F) - (I-E)∧F - E∧(I-F)
HermitianOperator t_ij(const Projector& e, const Projector& f);

struct ChshResult {
  /// <T_ij>_h, indexed [i-1][j-1]
  std::array<std::array<double, 2>, 2> correlations{};
  double value = 0.0;
  bool classical_bound_respected() const { return value <= 2.0 + kClassicalBoundTol; }
};

/// |<T11> - <T12>| + |<T21> + <T22>|
ChshResult chsh(const ChshConfig& cfg);
double chsh_value(const ChshConfig& cfg);

/// Four propositions over one shared backing operator, so that every
/// boolean combination is again a proposition.
class PropositionQuadruple {
 public:
  PropositionQuadruple(Proposition a1, Proposition a2, Proposition b1, Proposition b2);

  const Proposition& a(int i) const { return i == 1 ? a1_ : a2_; }
  const Proposition& b(int j) const { return j == 1 ? b1_ : b2_; }

 private:
  Proposition a1_, a2_, b1_, b2_;
};

/// Step function on the fiber (0,1): value v_k on (p_k, p_{k+1}].
struct FiberStepFunction {
  std::vector<double> cuts;
  std::vector<double> values;

  double operator()(double t) const;
  double integral() const;
};

/// chi_{A∩B} + chi_{∁A∩∁B} - chi_{∁A∩B} - chi_{A∩∁B} on the fiber over h,
/// indexed [i-1][j-1]. All four share one partition of (0,1).
std::array<std::array<FiberStepFunction, 2>, 2> classical_chsh_functions(const PropositionQuadruple& q,
                                                                         const PureState& h);

/// The same function evaluated pointwise from the fiber subsets.
double classical_chsh_pointwise(const PropositionQuadruple& q, const PureState& h, int i, int j, double t);

/// Propositions A_k over the single operator M = sum_k 2^k E_k of a pairwise
/// commuting family, with epsilon(A_k) = E_k. Throws NotCommuting if some
/// pair fails commutes(., ., 1e-9), DegenerateLabeling if a joint eigenvalue
/// of M is not within kLabelSnapTol of an integer label.
std::vector<Proposition> joint_family(std::span<const Projector> family);

std::pair<Proposition, Proposition> joint_propositions(const Projector& e, const Projector& f);

/// joint_family over {E1, E2, F1, F2}.
PropositionQuadruple joint_quadruple(const Projector& e1, const Projector& e2, const Projector& f1,
                                     const Projector& f2);

struct HomomorphismCheck {
  bool homomorphism = false;
  /// Only meaningful when homomorphism holds.
  bool commutes = false;
  double max_residual = 0.0;
};

/// Checks that epsilon maps the boolean algebra generated by A and B into the
/// projector lattice (intersections to meets, unions to joins, complements to
/// orthocomplements), and then whether epsilon(A), epsilon(B) commute.
/// Throws BackingMismatch unless A and B share a backing.
HomomorphismCheck check_boolean_homomorphism(const Proposition& a, const Proposition& b, double tol = 1e-8);

}  // namespace hv::bell
