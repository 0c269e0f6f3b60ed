#include "isp1d/source.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isp1d/errors.hpp"

namespace isp1d {

namespace {

SourceFunction::NodeSpan closed_span(const SpatialGrid& grid, Support s) {
  const std::size_t first = grid.first_at_or_above(s.a);
  const std::size_t last = grid.last_at_or_below(s.b);
  if (first >= grid.size() || last == SpatialGrid::npos || first > last) return {1, 0};
  return {first, last};
}

}  // namespace

SourceFunction::SourceFunction(const SpatialGrid& grid, std::vector<cplx> values, Support support)
    : SourceFunction(grid, std::move(values), support, closed_span(grid, support), false) {}

SourceFunction::SourceFunction(const SpatialGrid& grid, std::vector<cplx> values, Support support,
                               NodeSpan span)
    : SourceFunction(grid, std::move(values), support, span, false) {}

SourceFunction::SourceFunction(const SpatialGrid& grid, std::vector<cplx> values, Support support,
                               NodeSpan span, bool full)
    : grid_(grid), values_(std::move(values)), support_(support), span_(span), full_(full) {
  if (values_.size() != grid_.size())
    throw ArgumentError("SourceFunction: value count does not match grid");
  if (!(support_.a < support_.b)) throw ArgumentError("SourceFunction: support needs a < b");
  if (full_) {
    if (support_.a != -1.0 || support_.b != 1.0)
      throw ArgumentError("SourceFunction: full-interval support must be [-1, 1]");
  } else if (!(support_.a > -1.0) || !(support_.b < 1.0)) {
    throw ArgumentError("SourceFunction: support must be strictly inside (-1, 1)");
  }
  const double tol = 1e-9 * grid_.spacing();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag()))
      throw ArgumentError("SourceFunction: non-finite sample");
    const double y = grid_.node(i);
    if ((y < support_.a - tol || y > support_.b + tol) && values_[i] != cplx{})
      throw ArgumentError("SourceFunction: nonzero sample outside the declared support");
  }
  if (span_.first <= span_.last) {
    if (span_.last >= grid_.size()) throw ArgumentError("SourceFunction: node span out of range");
    if (grid_.node(span_.first) < support_.a - tol || grid_.node(span_.last) > support_.b + tol)
      throw ArgumentError("SourceFunction: node span leaves the support");
    // Samples outside the span are not part of the represented function.
    for (std::size_t i = 0; i < values_.size(); ++i)
      if ((i < span_.first || i > span_.last) && values_[i] != cplx{})
        throw ArgumentError("SourceFunction: nonzero sample outside the node span");
  }
  finish();
}

void SourceFunction::finish() {
  rule_ = std::make_shared<const InterpolatoryRule>(grid_, span_.first, span_.last, support_.a,
                                                    support_.b);
  weighted_ = rule_->interpolate(values_);
  const auto w = rule_->weights();
  for (std::size_t q = 0; q < weighted_.size(); ++q) weighted_[q] *= w[q];
}

SourceFunction SourceFunction::on_full_interval(const SpatialGrid& grid, std::vector<cplx> values) {
  return SourceFunction(grid, std::move(values), Support{-1.0, 1.0}, NodeSpan{0, grid.size() - 1},
                        true);
}

SourceFunction SourceFunction::zero(const SpatialGrid& grid, Support support) {
  return SourceFunction(grid, std::vector<cplx>(grid.size()), support);
}

bool SourceFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](cplx v) { return v == cplx{}; });
}

double SourceFunction::max_abs() const {
  double m = 0.0;
  for (cplx v : values_) m = std::max(m, std::abs(v));
  return m;
}

cplx SourceFunction::evaluate(double y) const {
  if (y < support_.a || y > support_.b || span_.first > span_.last) return 0.0;
  const std::size_t width = std::min(kDefaultStencil, span_.last - span_.first + 1);
  const std::size_t start = stencil_start(grid_, span_.first, span_.last, width, y);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    double l = 1.0;
    const double xi = grid_.node(start + i);
    for (std::size_t k = 0; k < width; ++k)
      if (k != i) l *= (y - grid_.node(start + k)) / (xi - grid_.node(start + k));
    acc += l * values_[start + i];
  }
  return acc;
}

cplx SourceFunction::transform(cplx kappa) const { return rule_->exp_sum(weighted_, kappa); }

SourceFunction SourceFunction::scaled(cplx alpha) const {
  std::vector<cplx> v(values_);
  for (auto& x : v) x *= alpha;
  return SourceFunction(grid_, std::move(v), support_, span_, full_);
}

SourceFunction SourceFunction::mirrored() const {
  const std::size_t n = grid_.size();
  std::vector<cplx> v(values_.rbegin(), values_.rend());
  NodeSpan span = span_.first <= span_.last ? NodeSpan{n - 1 - span_.last, n - 1 - span_.first}
                                            : span_;
  return SourceFunction(grid_, std::move(v), Support{-support_.b, -support_.a}, span, full_);
}

SourceFunction make_bump(const SpatialGrid& grid, const BumpParams& p) {
  if (!(p.width > 0.0)) throw DomainError("make_bump: width must be positive");
  if (p.power < 1) throw DomainError("make_bump: power must be >= 1");
  const Support s{p.center - 0.5 * p.width, p.center + 0.5 * p.width};
  std::vector<cplx> v(grid.size());
  const double tol = 1e-9 * grid.spacing();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.node(i);
    if (y < s.a - tol || y > s.b + tol) continue;
    const double c = std::cos(std::numbers::pi * (y - p.center) / p.width);
    // Edge nodes are exact zeros rather than cos(pi/2) rounding noise.
    v[i] = (std::abs(std::abs(y - p.center) - 0.5 * p.width) <= tol)
               ? 0.0
               : p.amplitude * std::pow(c, p.power);
  }
  return SourceFunction(grid, std::move(v), s);
}

SourceFunction make_indicator(const SpatialGrid& grid, Support support, cplx value) {
  std::vector<cplx> v(grid.size());
  const auto span = closed_span(grid, support);
  for (std::size_t i = span.first; i <= span.last && span.first <= span.last; ++i) v[i] = value;
  return SourceFunction(grid, std::move(v), support);
}

double l2_norm_sq(const SourceFunction& f) {
  std::vector<double> sq(f.values().size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(f.values()[i]);
  return f.rule().integrate(std::span<const double>(sq));
}

H1Norm h1_norm_sq(const SourceFunction& f) {
  const double l2 = l2_norm_sq(f);
  const auto span = f.span();
  if (span.first > span.last) return {l2, false};
  const auto v = f.values();
  const double h = f.grid().spacing();
  std::vector<double> dsq(v.size(), 0.0);
  const std::size_t lo = span.first;
  const std::size_t hi = span.last;
  if (hi > lo) {
    for (std::size_t i = lo; i <= hi; ++i) {
      cplx d;
      if (hi - lo == 1) {
        d = (v[hi] - v[lo]) / h;
      } else if (i == lo) {
        d = (-3.0 * v[i] + 4.0 * v[i + 1] - v[i + 2]) / (2.0 * h);
      } else if (i == hi) {
        d = (3.0 * v[i] - 4.0 * v[i - 1] + v[i - 2]) / (2.0 * h);
      } else {
        d = (v[i + 1] - v[i - 1]) / (2.0 * h);
      }
      dsq[i] = std::norm(d);
    }
  }
  const double grad = f.rule().integrate(std::span<const double>(dsq));
  const bool jump = !f.full_interval() && (std::abs(v[lo]) > 1e-9 || std::abs(v[hi]) > 1e-9);
  return {l2 + grad, jump};
}

std::pair<SourceFunction, SourceFunction> split_source(const SourceFunction& f) {
  const auto& grid = f.grid();
  const std::size_t n = grid.size();
  const std::size_t mid = (n - 1) / 2;  // node at y = 0
  const auto s = f.support();
  const auto span = f.span();

  std::vector<cplx> v1(n);
  std::vector<cplx> v2(n);
  // Node 0 belongs to the y >= 0 part unless the support has no y > 0 portion.
  const bool positive_part = s.b > 0.0;
  const std::size_t cut = positive_part ? mid : mid + 1;
  for (std::size_t i = 0; i < n; ++i) (i >= cut ? v1 : v2)[i] = f.values()[i];

  auto part = [&](std::vector<cplx> v, double a, double b, SourceFunction::NodeSpan sp) {
    if (!(a < b) || sp.first > sp.last) {
      return f.full_interval() ? SourceFunction::on_full_interval(grid, std::vector<cplx>(n))
                               : SourceFunction::zero(grid, s);
    }
    if (f.full_interval() && a == -1.0 && b == 1.0)
      return SourceFunction::on_full_interval(grid, std::move(v));
    // Full-interval sources split into parts touching +-1; shrink to the open interval.
    a = std::max(a, std::nextafter(-1.0, 0.0));
    b = std::min(b, std::nextafter(1.0, 0.0));
    return SourceFunction(grid, std::move(v), Support{a, b}, sp);
  };

  const bool empty = span.first > span.last;
  SourceFunction::NodeSpan sp1{std::max(span.first, cut), span.last};
  SourceFunction::NodeSpan sp2{span.first, std::min(span.last, cut - 1)};
  if (empty) sp1 = sp2 = span;

  auto f1 = part(std::move(v1), std::max(s.a, 0.0), s.b, sp1);
  auto f2 = part(std::move(v2), s.a, std::min(s.b, 0.0), sp2);
  return {std::move(f1), std::move(f2)};
}

}  // namespace isp1d
