#pragma once

// Finite unions of real intervals and piecewise-affine maps of the line.
// Together they stand in for Borel sets and Borel functions: every event
// over a finite spectrum is such a union, and preimages under
// piecewise-affine maps stay inside the class.

#include <limits>
#include <span>
#include <vector>

namespace hv::quantum {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One interval of the line. Infinite endpoints are always open.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  bool empty() const;
  bool contains(double x) const;
  /// Membership where points within snap_tol of a finite endpoint count as the endpoint.
  bool contains_snapped(double x, double snap_tol) const;
  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Canonical finite union of intervals: sorted, pairwise disjoint, and no two
/// neighbours that could be merged into one interval.
class BorelSet {
 public:
  BorelSet() = default;
  explicit BorelSet(std::vector<Interval> parts);

  static BorelSet real_line() { return BorelSet({Interval{}}); }
  static BorelSet empty_set() { return {}; }
  static BorelSet point(double x) { return BorelSet({Interval{x, x, true, true}}); }
  static BorelSet points(std::span<const double> xs);
  static BorelSet closed(double a, double b) { return BorelSet({Interval{a, b, true, true}}); }
  static BorelSet open(double a, double b) { return BorelSet({Interval{a, b, false, false}}); }
  /// (a, b]
  static BorelSet left_open(double a, double b) { return BorelSet({Interval{a, b, false, true}}); }
  /// [a, b)
  static BorelSet right_open(double a, double b) { return BorelSet({Interval{a, b, true, false}}); }
  /// (-inf, u]
  static BorelSet at_most(double u) { return BorelSet({Interval{-kInf, u, false, true}}); }
  /// (u, +inf)
  static BorelSet above(double u) { return BorelSet({Interval{u, kInf, false, false}}); }

  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(double x) const;
  bool contains_snapped(double x, double snap_tol) const;
  /// Total length; infinite if unbounded.
  double measure() const;

  BorelSet complement() const;
  BorelSet intersect(const BorelSet& o) const;
  BorelSet unite(const BorelSet& o) const;
  BorelSet minus(const BorelSet& o) const { return intersect(o.complement()); }

  friend bool operator==(const BorelSet&, const BorelSet&) = default;

 private:
  std::vector<Interval> parts_;
};

struct AffinePiece {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double x) const { return slope * x + intercept; }
  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// g: R -> R affine on each open cell between consecutive breakpoints, with
/// an explicit value at every breakpoint (so jumps and point values are exact).
/// Cell 0 is (-inf, x_0), cell i is (x_{i-1}, x_i), cell r+1 is (x_r, +inf).
class PiecewiseAffineFunction {
 public:
  PiecewiseAffineFunction(std::vector<double> breakpoints, std::vector<AffinePiece> pieces,
                          std::vector<double> point_values);

  static PiecewiseAffineFunction identity() { return affine(1.0, 0.0); }
  static PiecewiseAffineFunction affine(double slope, double intercept);
  static PiecewiseAffineFunction constant(double c) { return affine(0.0, c); }
  /// Continuous linear interpolant through (xs[i], ys[i]); the two end
  /// segments extend affinely to infinity. xs strictly increasing, size >= 2.
  static PiecewiseAffineFunction interpolate(std::span<const double> xs, std::span<const double> ys);
  /// below on (-inf, at), at_value at the point, above on (at, +inf).
  static PiecewiseAffineFunction step(double at, double below, double at_value, double above);

  double operator()(double x) const;

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const std::vector<double>& point_values() const { return values_; }

  friend bool operator==(const PiecewiseAffineFunction&, const PiecewiseAffineFunction&) = default;

 private:
  std::vector<double> breaks_;
  std::vector<AffinePiece> pieces_;
  std::vector<double> values_;
};

/// outer ∘ inner, again piecewise affine.
PiecewiseAffineFunction compose(const PiecewiseAffineFunction& outer, const PiecewiseAffineFunction& inner);

/// Exact preimage g^{-1}(B).
BorelSet borel_preimage(const PiecewiseAffineFunction& g, const BorelSet& b);

}  // namespace hv::quantum
