#include "isp1d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "isp1d/errors.hpp"

namespace isp1d {

namespace {

GaussRule compute_gauss_legendre(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
  if (n == 0) throw ArgumentError("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    if (n == 1) {
      slot = std::make_unique<GaussRule>(GaussRule{{0.0}, {2.0}});
    } else {
      slot = std::make_unique<GaussRule>(compute_gauss_legendre(n));
    }
  }
  return *slot;
}

std::size_t stencil_start(const SpatialGrid& grid, std::size_t first, std::size_t last,
                          std::size_t width, double y) {
  const double h = grid.spacing();
  auto j = static_cast<std::ptrdiff_t>(std::floor((y + 1.0) / h));
  j = std::clamp<std::ptrdiff_t>(j, static_cast<std::ptrdiff_t>(first),
                                 static_cast<std::ptrdiff_t>(std::max(first, last - 1)));
  auto start = j + 1 - static_cast<std::ptrdiff_t>(width / 2);
  start = std::clamp<std::ptrdiff_t>(start, static_cast<std::ptrdiff_t>(first),
                                     static_cast<std::ptrdiff_t>(last + 1 - width));
  return static_cast<std::size_t>(start);
}

InterpolatoryRule::InterpolatoryRule(const SpatialGrid& grid, std::size_t first, std::size_t last,
                                     double lower, double upper, std::size_t stencil)
    : grid_size_(grid.size()), order_(std::max<std::size_t>(stencil, 2)), lower_(lower),
      upper_(upper) {
  if (stencil == 0) throw ArgumentError("InterpolatoryRule: stencil must be positive");
  if (!(lower < upper)) throw ArgumentError("InterpolatoryRule: need lower < upper");
  if (lower < -1.0 - 1e-12 || upper > 1.0 + 1e-12)
    throw ArgumentError("InterpolatoryRule: interval must lie in [-1, 1]");
  if (first > last || last >= grid.size()) return;  // no nodes: zero function
  width_ = std::min(stencil, last - first + 1);
  build(grid, first, last);
}

InterpolatoryRule::InterpolatoryRule(const SpatialGrid& grid, std::size_t stencil)
    : InterpolatoryRule(grid, 0, grid.size() - 1, -1.0, 1.0, stencil) {}

void InterpolatoryRule::build(const SpatialGrid& grid, std::size_t first, std::size_t last) {
  const double h = grid.spacing();
  const double tol = 1e-9 * h;
  regular_half_width_ = 0.5 * h;

  std::vector<double> breaks{lower_};
  for (double y : grid.nodes())
    if (y > lower_ + tol && y < upper_ - tol) breaks.push_back(y);
  breaks.push_back(upper_);

  const auto& gl = gauss_legendre(order_);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double mid = 0.5 * (a + b);
    Panel panel{mid, 0.5 * (b - a), points_.size(), stencil_start(grid, first, last, width_, mid)};
    if (std::abs(panel.half_width - regular_half_width_) < 1e-13 * h)
      panel.half_width = regular_half_width_;
    panels_.push_back(panel);

    for (std::size_t r = 0; r < order_; ++r) {
      const double x = panel.center + panel.half_width * gl.nodes[r];
      points_.push_back(x);
      weights_.push_back(panel.half_width * gl.weights[r]);
      for (std::size_t i = 0; i < width_; ++i) {
        const double xi = grid.node(panel.stencil + i);
        double l = 1.0;
        for (std::size_t k = 0; k < width_; ++k) {
          if (k == i) continue;
          const double xk = grid.node(panel.stencil + k);
          l *= (x - xk) / (xi - xk);
        }
        basis_.push_back(l);
      }
    }
  }
}

template <typename T>
static std::vector<T> interpolate_impl(const std::vector<double>& basis, std::size_t width,
                                       std::size_t order, std::size_t grid_size,
                                       std::size_t npoints, const auto& panels,
                                       std::span<const T> samples) {
  if (samples.size() != grid_size)
    throw ArgumentError("InterpolatoryRule: sample count does not match grid");
  std::vector<T> out(npoints, T{});
  for (const auto& panel : panels) {
    for (std::size_t r = 0; r < order; ++r) {
      const std::size_t q = panel.offset + r;
      const double* l = &basis[q * width];
      T acc{};
      for (std::size_t i = 0; i < width; ++i) acc += l[i] * samples[panel.stencil + i];
      out[q] = acc;
    }
  }
  return out;
}

std::vector<cplx> InterpolatoryRule::interpolate(std::span<const cplx> samples) const {
  return interpolate_impl<cplx>(basis_, width_, order_, grid_size_, size(), panels_, samples);
}

std::vector<double> InterpolatoryRule::interpolate(std::span<const double> samples) const {
  return interpolate_impl<double>(basis_, width_, order_, grid_size_, size(), panels_, samples);
}

std::vector<cplx> InterpolatoryRule::scatter(std::span<const cplx> point_values) const {
  if (point_values.size() != size())
    throw ArgumentError("InterpolatoryRule::scatter: point count mismatch");
  std::vector<cplx> out(grid_size_, cplx{});
  for (const auto& panel : panels_) {
    for (std::size_t r = 0; r < order_; ++r) {
      const std::size_t q = panel.offset + r;
      const double* l = &basis_[q * width_];
      for (std::size_t i = 0; i < width_; ++i) out[panel.stencil + i] += l[i] * point_values[q];
    }
  }
  return out;
}

std::vector<double> InterpolatoryRule::node_weights() const {
  std::vector<cplx> w(weights_.begin(), weights_.end());
  const auto scattered = scatter(w);
  std::vector<double> out(scattered.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scattered[i].real();
  return out;
}

cplx InterpolatoryRule::integrate(std::span<const cplx> samples) const {
  const auto v = interpolate(samples);
  cplx acc = 0.0;
  for (std::size_t q = 0; q < v.size(); ++q) acc += weights_[q] * v[q];
  return acc;
}

double InterpolatoryRule::integrate(std::span<const double> samples) const {
  const auto v = interpolate(samples);
  double acc = 0.0;
  for (std::size_t q = 0; q < v.size(); ++q) acc += weights_[q] * v[q];
  return acc;
}

cplx InterpolatoryRule::exp_sum(std::span<const cplx> coeffs, cplx kappa) const {
  if (coeffs.size() != size()) throw ArgumentError("InterpolatoryRule::exp_sum: size mismatch");
  if (panels_.empty()) return 0.0;
  const auto& gl = gauss_legendre(order_);
  const cplx minus_i_kappa = cplx(0.0, -1.0) * kappa;

  // Phase factors within a regular panel are shared by all of them.
  std::vector<cplx> regular(order_);
  for (std::size_t r = 0; r < order_; ++r)
    regular[r] = std::exp(minus_i_kappa * (regular_half_width_ * gl.nodes[r]));

  cplx total = 0.0;
  for (const auto& panel : panels_) {
    cplx local = 0.0;
    const cplx* c = &coeffs[panel.offset];
    if (panel.half_width == regular_half_width_) {
      for (std::size_t r = 0; r < order_; ++r) local += c[r] * regular[r];
    } else {
      for (std::size_t r = 0; r < order_; ++r)
        local += c[r] * std::exp(minus_i_kappa * (panel.half_width * gl.nodes[r]));
    }
    total += std::exp(minus_i_kappa * panel.center) * local;
  }
  return total;
}

cplx integrate(std::span<const cplx> samples, const SpatialGrid& grid) {
  if (samples.size() != grid.size()) throw ArgumentError("integrate: length mismatch");
  return InterpolatoryRule(grid).integrate(samples);
}

double integrate(std::span<const double> samples, const SpatialGrid& grid) {
  if (samples.size() != grid.size()) throw ArgumentError("integrate: length mismatch");
  return InterpolatoryRule(grid).integrate(samples);
}

cplx integrate_simpson(std::span<const cplx> samples, const SpatialGrid& grid) {
  if (samples.size() != grid.size()) throw ArgumentError("integrate_simpson: length mismatch");
  const std::size_t n = grid.size();
  cplx acc = samples[0] + samples[n - 1];
  for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * samples[i];
  return acc * (grid.spacing() / 3.0);
}

}  // namespace isp1d
