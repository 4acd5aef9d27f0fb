#include "hv/borel.hpp"

#include <algorithm>
#include <cmath>

#include "hv/errors.hpp"

namespace hv::quantum {

bool Interval::empty() const {
  if (std::isnan(lo) || std::isnan(hi)) return true;
  if (lo > hi) return true;
  if (lo == hi) return !(lo_closed && hi_closed) || std::isinf(lo);
  return false;
}

bool Interval::contains(double x) const {
  if (empty()) return false;
  const bool above_lo = lo_closed ? x >= lo : x > lo;
  const bool below_hi = hi_closed ? x <= hi : x < hi;
  return above_lo && below_hi;
}

bool Interval::contains_snapped(double x, double snap_tol) const {
  if (empty()) return false;
  if (std::isfinite(lo) && std::abs(x - lo) <= snap_tol) return lo_closed;
  if (std::isfinite(hi) && std::abs(x - hi) <= snap_tol) return hi_closed;
  return x > lo && x < hi;
}

namespace {

Interval normalized(Interval iv) {
  if (std::isinf(iv.lo)) iv.lo_closed = false;
  if (std::isinf(iv.hi)) iv.hi_closed = false;
  return iv;
}

// Two sorted intervals a <= b (by left end) whose union is a single interval.
bool mergeable(const Interval& a, const Interval& b) {
  if (b.lo < a.hi) return true;
  return b.lo == a.hi && (a.hi_closed || b.lo_closed);
}

}  // namespace

BorelSet::BorelSet(std::vector<Interval> parts) {
  std::vector<Interval> live;
  live.reserve(parts.size());
  for (auto& p : parts) {
    Interval iv = normalized(p);
    if (!iv.empty()) live.push_back(iv);
  }
  std::sort(live.begin(), live.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  for (const auto& iv : live) {
    if (!parts_.empty() && mergeable(parts_.back(), iv)) {
      Interval& cur = parts_.back();
      if (iv.lo == cur.lo) cur.lo_closed = cur.lo_closed || iv.lo_closed;
      if (iv.hi > cur.hi) {
        cur.hi = iv.hi;
        cur.hi_closed = iv.hi_closed;
      } else if (iv.hi == cur.hi) {
        cur.hi_closed = cur.hi_closed || iv.hi_closed;
      }
    } else {
      parts_.push_back(iv);
    }
  }
}

BorelSet BorelSet::points(std::span<const double> xs) {
  std::vector<Interval> parts;
  for (double x : xs) parts.push_back({x, x, true, true});
  return BorelSet(std::move(parts));
}

bool BorelSet::contains(double x) const {
  return std::any_of(parts_.begin(), parts_.end(), [x](const Interval& iv) { return iv.contains(x); });
}

bool BorelSet::contains_snapped(double x, double snap_tol) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [=](const Interval& iv) { return iv.contains_snapped(x, snap_tol); });
}

double BorelSet::measure() const {
  double m = 0.0;
  for (const auto& iv : parts_) m += iv.length();
  return m;
}

BorelSet BorelSet::complement() const {
  std::vector<Interval> gaps;
  double cursor = -kInf;
  bool cursor_closed = false;
  for (const auto& iv : parts_) {
    gaps.push_back({cursor, iv.lo, cursor_closed, !iv.lo_closed});
    cursor = iv.hi;
    cursor_closed = !iv.hi_closed;
  }
  gaps.push_back({cursor, kInf, cursor_closed, false});
  return BorelSet(std::move(gaps));
}

BorelSet BorelSet::intersect(const BorelSet& o) const {
  std::vector<Interval> out;
  for (const auto& a : parts_) {
    for (const auto& b : o.parts_) {
      Interval c;
      if (a.lo > b.lo) {
        c.lo = a.lo;
        c.lo_closed = a.lo_closed;
      } else if (b.lo > a.lo) {
        c.lo = b.lo;
        c.lo_closed = b.lo_closed;
      } else {
        c.lo = a.lo;
        c.lo_closed = a.lo_closed && b.lo_closed;
      }
      if (a.hi < b.hi) {
        c.hi = a.hi;
        c.hi_closed = a.hi_closed;
      } else if (b.hi < a.hi) {
        c.hi = b.hi;
        c.hi_closed = b.hi_closed;
      } else {
        c.hi = a.hi;
        c.hi_closed = a.hi_closed && b.hi_closed;
      }
      out.push_back(c);
    }
  }
  return BorelSet(std::move(out));
}

BorelSet BorelSet::unite(const BorelSet& o) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return BorelSet(std::move(all));
}

// ---------------------------------------------------------------------------

PiecewiseAffineFunction::PiecewiseAffineFunction(std::vector<double> breakpoints,
                                                 std::vector<AffinePiece> pieces,
                                                 std::vector<double> point_values)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)), values_(std::move(point_values)) {
  if (pieces_.size() != breaks_.size() + 1 || values_.size() != breaks_.size()) {
    throw OutOfDomain("piecewise-affine function needs r breakpoints, r+1 pieces and r point values");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!std::isfinite(breaks_[i]) || (i > 0 && !(breaks_[i - 1] < breaks_[i]))) {
      throw OutOfDomain("breakpoints must be finite and strictly increasing");
    }
  }
}

PiecewiseAffineFunction PiecewiseAffineFunction::affine(double slope, double intercept) {
  return {{}, {AffinePiece{slope, intercept}}, {}};
}

PiecewiseAffineFunction PiecewiseAffineFunction::interpolate(std::span<const double> xs,
                                                             std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw OutOfDomain("interpolate needs at least two matching nodes");
  }
  std::vector<AffinePiece> segs;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    segs.push_back({s, ys[i] - s * xs[i]});
  }
  std::vector<AffinePiece> pieces;
  pieces.push_back(segs.front());
  pieces.insert(pieces.end(), segs.begin(), segs.end());
  pieces.push_back(segs.back());
  return {std::vector<double>(xs.begin(), xs.end()), std::move(pieces),
          std::vector<double>(ys.begin(), ys.end())};
}

PiecewiseAffineFunction PiecewiseAffineFunction::step(double at, double below, double at_value,
                                                      double above) {
  return {{at}, {AffinePiece{0.0, below}, AffinePiece{0.0, above}}, {at_value}};
}

double PiecewiseAffineFunction::operator()(double x) const {
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  const auto idx = static_cast<std::size_t>(it - breaks_.begin());
  if (it != breaks_.end() && *it == x) return values_[idx];
  return pieces_[idx](x);
}

PiecewiseAffineFunction compose(const PiecewiseAffineFunction& outer, const PiecewiseAffineFunction& inner) {
  const auto& ib = inner.breakpoints();
  std::vector<double> breaks = ib;
  for (std::size_t cell = 0; cell <= ib.size(); ++cell) {
    const AffinePiece p = inner.pieces()[cell];
    if (p.slope == 0.0) continue;
    const double a = cell == 0 ? -kInf : ib[cell - 1];
    const double b = cell == ib.size() ? kInf : ib[cell];
    for (double ob : outer.breakpoints()) {
      const double x = (ob - p.intercept) / p.slope;
      if (x > a && x < b) breaks.push_back(x);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto outer_piece_at = [&](double y) {
    const auto& ob = outer.breakpoints();
    const auto idx = static_cast<std::size_t>(std::lower_bound(ob.begin(), ob.end(), y) - ob.begin());
    return outer.pieces()[idx];
  };
  auto inner_piece_at = [&](double x) {
    const auto idx = static_cast<std::size_t>(std::lower_bound(ib.begin(), ib.end(), x) - ib.begin());
    return inner.pieces()[idx];
  };

  std::vector<AffinePiece> pieces;
  for (std::size_t cell = 0; cell <= breaks.size(); ++cell) {
    double mid;
    if (breaks.empty()) {
      mid = 0.0;
    } else if (cell == 0) {
      mid = breaks.front() - 1.0;
    } else if (cell == breaks.size()) {
      mid = breaks.back() + 1.0;
    } else {
      mid = 0.5 * (breaks[cell - 1] + breaks[cell]);
    }
    const AffinePiece ip = inner_piece_at(mid);
    if (ip.slope == 0.0) {
      pieces.push_back({0.0, outer(ip.intercept)});
    } else {
      const AffinePiece op = outer_piece_at(ip(mid));
      pieces.push_back({op.slope * ip.slope, op.slope * ip.intercept + op.intercept});
    }
  }
  std::vector<double> values;
  for (double x : breaks) values.push_back(outer(inner(x)));

  // Drop breakpoints where nothing actually changes.
  std::vector<double> kb;
  std::vector<AffinePiece> kp{pieces.front()};
  std::vector<double> kv;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const AffinePiece& next = pieces[i + 1];
    if (next == kp.back() && kp.back()(breaks[i]) == values[i]) continue;
    kb.push_back(breaks[i]);
    kv.push_back(values[i]);
    kp.push_back(next);
  }
  return {std::move(kb), std::move(kp), std::move(kv)};
}

BorelSet borel_preimage(const PiecewiseAffineFunction& g, const BorelSet& b) {
  const auto& br = g.breakpoints();
  std::vector<Interval> out;
  for (std::size_t i = 0; i < br.size(); ++i) {
    if (b.contains(g.point_values()[i])) out.push_back({br[i], br[i], true, true});
  }
  for (std::size_t cell = 0; cell <= br.size(); ++cell) {
    const double a = cell == 0 ? -kInf : br[cell - 1];
    const double z = cell == br.size() ? kInf : br[cell];
    const AffinePiece p = g.pieces()[cell];
    const BorelSet domain({Interval{a, z, false, false}});
    if (p.slope == 0.0) {
      if (b.contains(p.intercept)) out.push_back({a, z, false, false});
      continue;
    }
    std::vector<Interval> pre;
    for (const auto& iv : b.intervals()) {
      const double x1 = (iv.lo - p.intercept) / p.slope;
      const double x2 = (iv.hi - p.intercept) / p.slope;
      if (p.slope > 0) {
        pre.push_back({x1, x2, iv.lo_closed, iv.hi_closed});
      } else {
        pre.push_back({x2, x1, iv.hi_closed, iv.lo_closed});
      }
    }
    const BorelSet piece = BorelSet(std::move(pre)).intersect(domain);
    out.insert(out.end(), piece.intervals().begin(), piece.intervals().end());
  }
  return BorelSet(std::move(out));
}

}  // namespace hv::quantum
