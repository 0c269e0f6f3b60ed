#include "isp1d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isp1d/errors.hpp"
#include "isp1d/quadrature.hpp"

namespace isp1d {

SpatialGrid::SpatialGrid(std::size_t n) : n_(n) {
  if (n < 3) throw ArgumentError("SpatialGrid: n must be at least 3");
  if (n % 2 == 0) throw ArgumentError("SpatialGrid: n must be odd");
  h_ = 2.0 / static_cast<double>(n - 1);
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = node(i);
}

double SpatialGrid::node(std::size_t i) const {
  if (i == n_ - 1) return 1.0;
  return -1.0 + static_cast<double>(i) * h_;
}

std::size_t SpatialGrid::first_at_or_above(double y) const {
  const double tol = 1e-9 * h_;
  for (std::size_t i = 0; i < n_; ++i)
    if (nodes_[i] >= y - tol) return i;
  return n_;
}

std::size_t SpatialGrid::last_at_or_below(double y) const {
  const double tol = 1e-9 * h_;
  for (std::size_t i = n_; i-- > 0;)
    if (nodes_[i] <= y + tol) return i;
  return npos;
}

FrequencyGrid::FrequencyGrid(double omega_max, std::size_t m) : FrequencyGrid(0.0, omega_max, m) {}

FrequencyGrid::FrequencyGrid(double omega_min, double omega_max, std::size_t m)
    : lo_(omega_min), hi_(omega_max) {
  if (!(omega_min >= 0.0) || !(omega_max > omega_min) || !std::isfinite(omega_max))
    throw DomainError("FrequencyGrid: need 0 <= omega_min < omega_max < inf");
  if (m < kPanelPoints || m % kPanelPoints != 0)
    throw ArgumentError("FrequencyGrid: m must be a positive multiple of 4");
  const auto& gl = gauss_legendre(kPanelPoints);
  const std::size_t panels = m / kPanelPoints;
  const double width = (hi_ - lo_) / static_cast<double>(panels);
  nodes_.reserve(m);
  weights_.reserve(m);
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo_ + static_cast<double>(p) * width;
    for (std::size_t r = 0; r < kPanelPoints; ++r) {
      nodes_.push_back(a + 0.5 * width * (gl.nodes[r] + 1.0));
      weights_.push_back(0.5 * width * gl.weights[r]);
    }
  }
}

FrequencyGrid FrequencyGrid::with_density(double omega_min, double omega_max, double per_unit) {
  if (!(per_unit > 0.0)) throw DomainError("FrequencyGrid: density must be positive");
  const double panels = std::ceil((omega_max - omega_min) * per_unit / kPanelPoints - 1e-9);
  return FrequencyGrid(omega_min, omega_max,
                       kPanelPoints * std::max<std::size_t>(1, static_cast<std::size_t>(panels)));
}

std::vector<double> FrequencyGrid::weights_between(double lo, double hi) const {
  const double tol = 1e-12 * std::max(1.0, hi_);
  if (lo < lo_ - tol || hi > hi_ + tol || hi < lo - tol)
    throw DomainError("FrequencyGrid: integration band outside grid");
  lo = std::clamp(lo, lo_, hi_);
  hi = std::clamp(hi, lo, hi_);

  std::vector<double> out(size(), 0.0);
  const auto& gl = gauss_legendre(kPanelPoints);
  const double width = panel_width();
  for (std::size_t p = 0; p < panels(); ++p) {
    const double a = lo_ + static_cast<double>(p) * width;
    const double b = (p + 1 == panels()) ? hi_ : a + width;
    const double c = std::max(a, lo);
    const double d = std::min(b, hi);
    if (d - c <= tol) continue;
    const std::size_t off = p * kPanelPoints;
    if (c - a <= tol && b - d <= tol) {
      for (std::size_t r = 0; r < kPanelPoints; ++r) out[off + r] += weights_[off + r];
      continue;
    }
    // Partial panel: integrate the cubic through the panel's nodes over [c, d].
    for (std::size_t q = 0; q < kPanelPoints; ++q) {
      const double x = c + 0.5 * (d - c) * (gl.nodes[q] + 1.0);
      const double wq = 0.5 * (d - c) * gl.weights[q];
      for (std::size_t r = 0; r < kPanelPoints; ++r) {
        double basis = 1.0;
        for (std::size_t s = 0; s < kPanelPoints; ++s)
          if (s != r) basis *= (x - nodes_[off + s]) / (nodes_[off + r] - nodes_[off + s]);
        out[off + r] += wq * basis;
      }
    }
  }
  return out;
}

double FrequencyGrid::integrate(std::span<const double> values, double lo, double hi) const {
  if (values.size() != size()) throw ArgumentError("FrequencyGrid::integrate: length mismatch");
  const auto w = weights_between(lo, hi);
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * values[j];
  return acc;
}

cplx FrequencyGrid::integrate(std::span<const cplx> values, double lo, double hi) const {
  if (values.size() != size()) throw ArgumentError("FrequencyGrid::integrate: length mismatch");
  const auto w = weights_between(lo, hi);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * values[j];
  return acc;
}

SectorWavenumber::SectorWavenumber(double k1, double k2) : k1_(k1), k2_(k2) {
  if (!(k1 > 0.0) || !(std::abs(k2) <= k1 * (1.0 + 1e-14)))
    throw DomainError("SectorWavenumber: k must satisfy k1 > 0 and |k2| <= k1");
}

SectorWavenumber SectorWavenumber::polar(double r, double theta) {
  return SectorWavenumber(r * std::cos(theta), r * std::sin(theta));
}

}  // namespace isp1d
