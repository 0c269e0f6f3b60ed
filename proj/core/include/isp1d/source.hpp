#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "isp1d/grid.hpp"
#include "isp1d/quadrature.hpp"

namespace isp1d {

struct Support {
  double a;
  double b;
};

/// Complex source samples on a SpatialGrid with declared support (a, b).
///
/// The represented function is the piecewise interpolant of the samples at the
/// nodes inside [a, b], continued polynomially out to a and b and zero outside.
/// This makes indicators of node-aligned intervals exact and keeps smooth
/// sources high-order accurate up to their support edges.
class SourceFunction {
 public:
  /// Node span: inclusive index range of the samples the interpolant uses.
  struct NodeSpan {
    std::size_t first;
    std::size_t last;
  };

  /// Requires -1 < a < b < 1 and zero samples at every node outside [a, b].
  SourceFunction(const SpatialGrid& grid, std::vector<cplx> values, Support support);
  SourceFunction(const SpatialGrid& grid, std::vector<cplx> values, Support support, NodeSpan span);

  /// Source living on all of [-1, 1] (reconstruction estimates with no known support).
  static SourceFunction on_full_interval(const SpatialGrid& grid, std::vector<cplx> values);
  static SourceFunction zero(const SpatialGrid& grid, Support support);

  const SpatialGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  Support support() const { return support_; }
  NodeSpan span() const { return span_; }
  bool full_interval() const { return full_; }
  bool is_zero() const;
  double max_abs() const;

  const InterpolatoryRule& rule() const { return *rule_; }
  /// Quadrature weight times interpolated value at each rule point.
  std::span<const cplx> weighted_points() const { return weighted_; }

  /// Value of the represented function at y (zero outside the support).
  cplx evaluate(double y) const;

  /// Integral of e^{-i kappa y} f(y) over the support; kappa may be complex.
  cplx transform(cplx kappa) const;

  SourceFunction scaled(cplx alpha) const;
  /// y -> f(-y).
  SourceFunction mirrored() const;

 private:
  SourceFunction(const SpatialGrid& grid, std::vector<cplx> values, Support support, NodeSpan span,
                 bool full);
  void finish();

  SpatialGrid grid_;
  std::vector<cplx> values_;
  Support support_;
  NodeSpan span_;
  bool full_ = false;
  std::shared_ptr<const InterpolatoryRule> rule_;
  std::vector<cplx> weighted_;
};

/// A cos^p(pi (y - c) / w) on (c - w/2, c + w/2). H^1 for p >= 1, C^1 for p = 2.
struct BumpParams {
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
  int power = 2;
};

SourceFunction make_bump(const SpatialGrid& grid, const BumpParams& params);

/// `value` on the closed node set inside [a, b].
SourceFunction make_indicator(const SpatialGrid& grid, Support support, cplx value = 1.0);

/// Integral of |f|^2.
double l2_norm_sq(const SourceFunction& f);

struct H1Norm {
  double value;
  /// Set when f does not vanish at its support edges (e.g. indicators), so the
  /// discrete value ignores a jump and f is not in H^1.
  bool not_h1;
};

/// ||f||_0^2 + ||f'||_0^2 with f' from finite differences inside the support.
H1Norm h1_norm_sq(const SourceFunction& f);

/// Part of f on y >= 0 (first) and on y < 0 (second). Samples add back to f exactly.
std::pair<SourceFunction, SourceFunction> split_source(const SourceFunction& f);

}  // namespace isp1d
