#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "isp1d/grid.hpp"

namespace isp1d {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
const GaussRule& gauss_legendre(std::size_t n);

/// Stencil width of the piecewise interpolant used for sampled functions.
inline constexpr std::size_t kDefaultStencil = 8;

/// First node of the `width`-point interpolation stencil used on the grid
/// interval containing y, kept inside the node range [first, last].
std::size_t stencil_start(const SpatialGrid& grid, std::size_t first, std::size_t last,
                          std::size_t width, double y);

/// Quadrature for functions known only by samples on a SpatialGrid.
///
/// The sampled function is represented by its piecewise Lagrange interpolant over
/// the node range [first, last]: every grid interval (plus the partial pieces out
/// to `lower`/`upper` when those are not nodes) is a panel carrying `stencil`
/// Gauss-Legendre points, and the interpolant on a panel uses the `stencil` nodes
/// nearest to it without leaving [first, last]. Integrating kernel * interpolant
/// with the panel points keeps smooth kernels (including e^{-i w y}) exact to
/// rounding, so discretisation error comes only from interpolating the samples.
class InterpolatoryRule {
 public:
  InterpolatoryRule(const SpatialGrid& grid, std::size_t first, std::size_t last, double lower,
                    double upper, std::size_t stencil = kDefaultStencil);

  /// Whole-grid rule on [-1, 1].
  explicit InterpolatoryRule(const SpatialGrid& grid, std::size_t stencil = kDefaultStencil);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t grid_size() const { return grid_size_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  /// Interpolant of `samples` (one per grid node) at the quadrature points.
  std::vector<cplx> interpolate(std::span<const cplx> samples) const;
  std::vector<double> interpolate(std::span<const double> samples) const;

  /// Adjoint of `interpolate`: scatters point values back onto grid nodes.
  std::vector<cplx> scatter(std::span<const cplx> point_values) const;

  /// Effective per-node weights: integral of the interpolant = dot(node_weights, samples).
  std::vector<double> node_weights() const;

  cplx integrate(std::span<const cplx> samples) const;
  double integrate(std::span<const double> samples) const;

  /// Fourier-type sum  sum_q c_q e^{-i kappa y_q}  for precomputed point
  /// coefficients c_q (weights times values). kappa may be complex.
  cplx exp_sum(std::span<const cplx> coeffs, cplx kappa) const;

 private:
  struct Panel {
    double center;
    double half_width;
    std::size_t offset;    // first point index
    std::size_t stencil;   // first node of the interpolation stencil
  };

  void build(const SpatialGrid& grid, std::size_t first, std::size_t last);

  std::size_t grid_size_ = 0;
  std::size_t width_ = 0;   // stencil width actually used
  std::size_t order_ = 0;   // points per panel
  double lower_ = 0.0;
  double upper_ = 0.0;
  double regular_half_width_ = 0.0;
  std::vector<Panel> panels_;
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> basis_;  // width_ Lagrange values per point
};

/// Integral over [-1, 1] of sampled values (piecewise interpolation, Gauss panels).
cplx integrate(std::span<const cplx> samples, const SpatialGrid& grid);
double integrate(std::span<const double> samples, const SpatialGrid& grid);

/// Composite Simpson on the same grid; an independent cross-check.
cplx integrate_simpson(std::span<const cplx> samples, const SpatialGrid& grid);

}  // namespace isp1d
