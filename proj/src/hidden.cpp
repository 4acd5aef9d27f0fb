#include "hv/hidden.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "hv/errors.hpp"

namespace hv::hidden {

QuantileStep::QuantileStep(std::vector<double> cuts, std::vector<double> values)
    : cuts_(std::move(cuts)), values_(std::move(values)) {
  if (values_.empty() || cuts_.size() != values_.size() + 1) {
    throw OutOfDomain("quantile step needs m >= 1 values and m+1 cuts");
  }
  if (cuts_.front() != 0.0 || cuts_.back() != 1.0) throw OutOfDomain("quantile cuts must run from 0 to 1");
  for (std::size_t k = 1; k < cuts_.size(); ++k)
    if (!(cuts_[k - 1] < cuts_[k])) throw OutOfDomain("quantile cuts must be strictly increasing");
  for (std::size_t k = 1; k < values_.size(); ++k)
    if (!(values_[k - 1] < values_[k])) throw OutOfDomain("quantile values must be strictly increasing");
}

std::size_t QuantileStep::cell(double t) const {
  const auto it = std::lower_bound(cuts_.begin() + 1, cuts_.end(), t);
  const auto idx = static_cast<std::size_t>(it - (cuts_.begin() + 1));
  return std::min(idx, values_.size() - 1);
}

namespace {

QuantileStep step_from_weights(const std::vector<std::pair<double, double>>& value_weight, double weight_floor) {
  std::vector<double> cuts{0.0};
  std::vector<double> values;
  double run = 0.0;
  for (const auto& [v, w] : value_weight) {
    if (!(w > weight_floor)) continue;
    run += w;
    cuts.push_back(run);
    values.push_back(v);
  }
  if (values.empty()) throw OutOfDomain("no outcome carries weight above the floor");
  cuts.back() = 1.0;
  return {std::move(cuts), std::move(values)};
}

}  // namespace

QuantileStep quantile_function(const SpectralDecomposition& dec, const PureState& h, double weight_floor) {
  require_same_dim(dec.dim, h.dim(), "quantile_function");
  std::vector<std::pair<double, double>> vw;
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k)
    vw.emplace_back(dec.eigenvalues[k], quantum::quadratic_form(dec.projectors[k].matrix(), h));
  return step_from_weights(vw, weight_floor);
}

// ---------------------------------------------------------------------------

ClassicalObservable::ClassicalObservable(const HermitianOperator& t)
    : backing_(std::make_shared<const SpectralDecomposition>(linalg::eigh(t))) {}

ClassicalObservable::ClassicalObservable(std::shared_ptr<const SpectralDecomposition> backing,
                                         std::optional<PiecewiseAffineFunction> post)
    : backing_(std::move(backing)), post_(std::move(post)) {
  if (!backing_) throw OutOfDomain("observable without backing operator");
}

FiberObservable ClassicalObservable::at(const PureState& h, double weight_floor) const {
  return {quantile_function(*backing_, h, weight_floor), post_};
}

QuantileStep ClassicalObservable::law(const PureState& h, double weight_floor) const {
  const QuantileStep step = quantile_function(*backing_, h, weight_floor);
  std::map<double, double> merged;
  for (std::size_t k = 0; k < step.atoms(); ++k) {
    const double v = post_ ? (*post_)(step.values()[k]) : step.values()[k];
    merged[v] += step.weight(k);
  }
  return step_from_weights({merged.begin(), merged.end()}, 0.0);
}

std::vector<double> ClassicalObservable::outcomes() const {
  std::vector<double> out;
  for (double lambda : backing_->eigenvalues) out.push_back(post_ ? (*post_)(lambda) : lambda);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double eval(const ClassicalObservable& obs, const PureState& h, double t) {
  if (!(t > 0.0 && t < 1.0)) throw OutOfDomain("hidden variable must lie in (0,1)");
  return obs.at(h)(t);
}

ClassicalObservable compose(const PiecewiseAffineFunction& g, const ClassicalObservable& obs) {
  if (!obs.post()) return ClassicalObservable(obs.backing_ptr(), g);
  return ClassicalObservable(obs.backing_ptr(), quantum::compose(g, *obs.post()));
}

double integrate_fiber(const PiecewiseAffineFunction& g, const ClassicalObservable& obs, const PureState& h) {
  const FiberObservable f = obs.at(h);
  double total = 0.0;
  for (std::size_t k = 0; k < f.step.atoms(); ++k) {
    const double v = f.post ? (*f.post)(f.step.values()[k]) : f.step.values()[k];
    total += g(v) * f.step.weight(k);
  }
  return total;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kBlock = std::uint64_t{1} << 16;

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

// Strictly inside (0,1): midpoints of the 2^53 equal subintervals.
double to_open_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

double hidden_draw(std::uint64_t seed, std::uint64_t i) {
  auto eng = block_engine(seed, i / kBlock);
  eng.discard(i % kBlock);
  return to_open_unit(eng());
}

HiddenSampleReport sample(const ClassicalObservable& obs, const PureState& h, std::uint64_t n,
                          std::uint64_t seed, std::string observable_id, unsigned workers) {
  if (n == 0) throw OutOfDomain("sample count must be positive");
  workers = std::max(1u, workers);

  const FiberObservable fiber = obs.at(h);
  const QuantileStep law = obs.law(h);
  const std::vector<double>& outcomes = law.values();

  // Step cell of the backing quantile -> outcome index.
  std::vector<std::size_t> cell_outcome(fiber.step.atoms());
  for (std::size_t k = 0; k < fiber.step.atoms(); ++k) {
    const double v = fiber.post ? (*fiber.post)(fiber.step.values()[k]) : fiber.step.values()[k];
    cell_outcome[k] = static_cast<std::size_t>(std::lower_bound(outcomes.begin(), outcomes.end(), v) -
                                               outcomes.begin());
  }

  const std::uint64_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(outcomes.size()));
  auto run = [&](unsigned w) {
    auto& counts = partial[w];
    for (std::uint64_t b = w; b < blocks; b += workers) {
      auto eng = block_engine(seed, b);
      const std::uint64_t len = std::min(kBlock, n - b * kBlock);
      for (std::uint64_t i = 0; i < len; ++i) ++counts[cell_outcome[fiber.step.cell(to_open_unit(eng()))]];
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  HiddenSampleReport rep{h, std::move(observable_id), n, seed, outcomes, {}, {}, {}, 0.0, 0.0};
  rep.counts.assign(outcomes.size(), 0);
  for (const auto& c : partial)
    for (std::size_t k = 0; k < c.size(); ++k) rep.counts[k] += c[k];

  const auto nd = static_cast<double>(n);
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const BorelSet atom = BorelSet::point(outcomes[k]);
    const double p = quantum::prob(obs.backing(), h, obs.post() ? quantum::borel_preimage(*obs.post(), atom) : atom);
    const double freq = static_cast<double>(rep.counts[k]) / nd;
    rep.empirical.push_back(freq);
    rep.predicted.push_back(p);
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(freq - p));
    if (p > 0.0) {
      const double d = static_cast<double>(rep.counts[k]) - nd * p;
      rep.chi_square += d * d / (nd * p);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

Proposition::Proposition(std::shared_ptr<const SpectralDecomposition> backing, BorelSet borel)
    : backing_(std::move(backing)), borel_(std::move(borel)) {
  if (!backing_) throw OutOfDomain("proposition without backing operator");
}

bool Proposition::shares_backing(const Proposition& o) const {
  return backing_ == o.backing_ || *backing_ == *o.backing_;
}

Proposition Proposition::intersect(const Proposition& o) const {
  if (!shares_backing(o)) throw BackingMismatch("propositions over different backing operators");
  return {backing_, borel_.intersect(o.borel_)};
}

Proposition Proposition::unite(const Proposition& o) const {
  if (!shares_backing(o)) throw BackingMismatch("propositions over different backing operators");
  return {backing_, borel_.unite(o.borel_)};
}

Proposition proposition_from(std::shared_ptr<const SpectralDecomposition> dec, const BorelSet& b) {
  return {std::move(dec), b};
}

Proposition proposition_from(const SpectralDecomposition& dec, const BorelSet& b) {
  return {std::make_shared<const SpectralDecomposition>(dec), b};
}

Projector epsilon(const Proposition& l, double snap_tol) {
  return quantum::spectral_projector(l.backing(), l.borel(), snap_tol);
}

BorelSet fiber_subset(const Proposition& l, const PureState& h, double weight_floor) {
  const QuantileStep step = quantile_function(l.backing(), h, weight_floor);
  std::vector<quantum::Interval> cells;
  for (std::size_t k = 0; k < step.atoms(); ++k) {
    if (l.borel().contains_snapped(step.values()[k], quantum::kSnapTol))
      cells.push_back({step.cuts()[k], step.cuts()[k + 1], false, true});
  }
  return BorelSet(std::move(cells)).intersect(BorelSet::open(0.0, 1.0));
}

double fiber_measure(const Proposition& l, const PureState& h, double weight_floor) {
  return fiber_subset(l, h, weight_floor).measure();
}

Projector spectral_family(const ClassicalObservable& obs, double t) {
  const BorelSet below = BorelSet::at_most(t);
  return epsilon(Proposition(obs.backing_ptr(), obs.post() ? quantum::borel_preimage(*obs.post(), below) : below));
}

HermitianOperator tau(const ClassicalObservable& obs) {
  const std::size_t n = obs.backing().dim;
  linalg::ComplexMatrix m(n);
  linalg::ComplexMatrix prev(n);
  for (double w : obs.outcomes()) {
    const Projector e = spectral_family(obs, w);
    m += (e.matrix() - prev) * w;
    prev = e.matrix();
  }
  return HermitianOperator(m);
}

bool states_confusion_equivalent(const PureState& h, const PureState& k, double tol) {
  return h.same_ray(k, tol);
}

bool observables_confusion_equivalent(const ClassicalObservable& a, const ClassicalObservable& b, double tol) {
  require_same_dim(a.backing().dim, b.backing().dim, "observables_confusion_equivalent");
  return linalg::max_abs_diff(tau(a).matrix(), tau(b).matrix()) <= tol;
}

}  // namespace hv::hidden
