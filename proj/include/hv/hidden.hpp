#pragma once

// The classical (deterministic) system whose reduction is the quantum
// system. Every ray [h] carries a hidden fiber (0,1) with Lebesgue measure;
// an observable T becomes the function (h, t) -> F_[h]^{-1}(t), the
// generalized inverse of the spectral distribution function of T at h.
// Propositions are fiber-wise preimages of Borel sets, and the quotient maps
// epsilon (propositions -> projectors) and tau (observables -> operators)
// recover the quantum description.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hv/quantum.hpp"

namespace hv::hidden {

using linalg::HermitianOperator;
using linalg::Projector;
using linalg::SpectralDecomposition;
using quantum::BorelSet;
using quantum::PiecewiseAffineFunction;
using quantum::PureState;

inline constexpr double kWeightFloor = 1e-12;

/// Right-continuous-in-measure step function on (0,1): value v_k on (c_{k-1}, c_k].
class QuantileStep {
 public:
  QuantileStep(std::vector<double> cuts, std::vector<double> values);

  const std::vector<double>& cuts() const { return cuts_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t atoms() const { return values_.size(); }
  /// Lebesgue length of the k-th step.
  double weight(std::size_t k) const { return cuts_[k + 1] - cuts_[k]; }
  /// Index k with t in (c_k, c_{k+1}]; t must lie in (0,1).
  std::size_t cell(double t) const;
  /// min{ v_k : c_k >= t }
  double operator()(double t) const { return values_[cell(t)]; }

 private:
  std::vector<double> cuts_;
  std::vector<double> values_;
};

/// Quasi-inverse of u -> <E_(-inf,u]>_h. Eigenvalues whose weight at h is
/// at most weight_floor get no step.
QuantileStep quantile_function(const SpectralDecomposition& dec, const PureState& h,
                               double weight_floor = kWeightFloor);

/// One fiber of an observable: the quantile step of the backing operator,
/// optionally followed by g.
struct FiberObservable {
  QuantileStep step;
  std::optional<PiecewiseAffineFunction> post;

  double operator()(double t) const { return post ? (*post)(step(t)) : step(t); }
};

/// Observable function on the hidden state space, realized as g ∘ f_T.
class ClassicalObservable {
 public:
  explicit ClassicalObservable(const HermitianOperator& t);
  explicit ClassicalObservable(std::shared_ptr<const SpectralDecomposition> backing,
                               std::optional<PiecewiseAffineFunction> post = std::nullopt);

  const SpectralDecomposition& backing() const { return *backing_; }
  const std::shared_ptr<const SpectralDecomposition>& backing_ptr() const { return backing_; }
  const std::optional<PiecewiseAffineFunction>& post() const { return post_; }

  /// The function t -> g(f_T(h, t)) on the fiber over h.
  FiberObservable at(const PureState& h, double weight_floor = kWeightFloor) const;
  /// Distribution of the observable on the fiber over h as a sorted quantile
  /// step; atoms with equal images under g are merged.
  QuantileStep law(const PureState& h, double weight_floor = kWeightFloor) const;
  /// Distinct values the observable can take (state independent), ascending.
  std::vector<double> outcomes() const;

 private:
  std::shared_ptr<const SpectralDecomposition> backing_;
  std::optional<PiecewiseAffineFunction> post_;
};

/// f(h, t) for t in (0,1); throws OutOfDomain otherwise.
double eval(const ClassicalObservable& obs, const PureState& h, double t);

/// g ∘ obs. A prior post-map is folded in by composing the two maps.
ClassicalObservable compose(const PiecewiseAffineFunction& g, const ClassicalObservable& obs);

/// ∫_0^1 g(f(h, t)) dt by exact step integration.
double integrate_fiber(const PiecewiseAffineFunction& g, const ClassicalObservable& obs, const PureState& h);

struct HiddenSampleReport {
  PureState state;
  std::string observable_id;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> outcomes;
  std::vector<std::uint64_t> counts;
  std::vector<double> empirical;
  std::vector<double> predicted;
  double max_abs_deviation = 0.0;
  double chi_square = 0.0;
};

/// Draws hidden states t ~ U(0,1) on the fiber over h and tabulates the
/// observed outcomes against pi(T, [h], .). Draws are generated in fixed
/// blocks, each from its own stream seeded by (seed, block index), so the
/// report does not depend on the number of workers.
HiddenSampleReport sample(const ClassicalObservable& obs, const PureState& h, std::uint64_t n,
                          std::uint64_t seed, std::string observable_id = {}, unsigned workers = 1);

/// The uniform (0,1) draw with global index i of the stream for seed.
double hidden_draw(std::uint64_t seed, std::uint64_t i);

/// Subset L of the hidden state space whose fiber over h is f_T(h, .)^{-1}(B).
class Proposition {
 public:
  Proposition(std::shared_ptr<const SpectralDecomposition> backing, BorelSet borel);

  const SpectralDecomposition& backing() const { return *backing_; }
  const std::shared_ptr<const SpectralDecomposition>& backing_ptr() const { return backing_; }
  const BorelSet& borel() const { return borel_; }

  bool shares_backing(const Proposition& o) const;
  /// S \ L
  Proposition complement() const { return {backing_, borel_.complement()}; }
  /// Both throw BackingMismatch unless the backings agree.
  Proposition intersect(const Proposition& o) const;
  Proposition unite(const Proposition& o) const;

 private:
  std::shared_ptr<const SpectralDecomposition> backing_;
  BorelSet borel_;
};

Proposition proposition_from(std::shared_ptr<const SpectralDecomposition> dec, const BorelSet& b);
Proposition proposition_from(const SpectralDecomposition& dec, const BorelSet& b);

/// epsilon(L): the projector E with mu_[h](L ∩ S_[h]) = <E>_h for every h.
Projector epsilon(const Proposition& l, double snap_tol = quantum::kSnapTol);

/// L ∩ S_[h] as a finite union of intervals inside (0,1).
BorelSet fiber_subset(const Proposition& l, const PureState& h, double weight_floor = kWeightFloor);

/// Lebesgue measure of L ∩ S_[h].
double fiber_measure(const Proposition& l, const PureState& h, double weight_floor = kWeightFloor);

/// E_t = epsilon(f^{-1}(-inf, t]).
Projector spectral_family(const ClassicalObservable& obs, double t);

/// The operator with spectral family E_t, rebuilt from threshold propositions.
HermitianOperator tau(const ClassicalObservable& obs);

/// Ray equality, equivalently equal fiber measures for every proposition.
bool states_confusion_equivalent(const PureState& h, const PureState& k, double tol = quantum::kRayTol);

/// tau(a) = tau(b) within tol (max norm).
bool observables_confusion_equivalent(const ClassicalObservable& a, const ClassicalObservable& b,
                                      double tol = 1e-8);

}  // namespace hv::hidden
