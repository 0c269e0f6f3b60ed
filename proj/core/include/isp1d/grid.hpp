#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace isp1d {

using cplx = std::complex<double>;

/// Uniform grid on [-1, 1] with an odd number of nodes.
class SpatialGrid {
 public:
  explicit SpatialGrid(std::size_t n);

  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  double node(std::size_t i) const;
  std::span<const double> nodes() const { return nodes_; }

  /// Index of the first node >= y (size() if none).
  std::size_t first_at_or_above(double y) const;
  /// Index of the last node <= y, or npos if none.
  std::size_t last_at_or_below(double y) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) { return a.n_ == b.n_; }

 private:
  std::size_t n_;
  double h_;
  std::vector<double> nodes_;
};

/// Composite Gauss-Legendre rule on (omega_min, omega_max] with four points per panel.
///
/// Every frequency-domain integral in the library is a dot product of node values
/// with weights from `weights_between`, so sub-band integrals such as (0, K) with
/// K inside a panel are handled by interpolating within that panel.
class FrequencyGrid {
 public:
  static constexpr std::size_t kPanelPoints = 4;

  FrequencyGrid(double omega_max, std::size_t m);
  FrequencyGrid(double omega_min, double omega_max, std::size_t m);

  /// Grid with `per_unit` nodes per unit frequency, rounded up to whole panels.
  static FrequencyGrid with_density(double omega_min, double omega_max, double per_unit);

  double omega_min() const { return lo_; }
  double omega_max() const { return hi_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t panels() const { return nodes_.size() / kPanelPoints; }
  double panel_width() const { return (hi_ - lo_) / static_cast<double>(panels()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Node weights W such that sum_j W_j g(omega_j) approximates the integral of g
  /// over [lo, hi]. Requires omega_min <= lo <= hi <= omega_max.
  std::vector<double> weights_between(double lo, double hi) const;

  double integrate(std::span<const double> values, double lo, double hi) const;
  cplx integrate(std::span<const cplx> values, double lo, double hi) const;

  friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.nodes_.size() == b.nodes_.size();
  }

 private:
  double lo_;
  double hi_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Complex wavenumber in the closed sector |arg k| <= pi/4.
class SectorWavenumber {
 public:
  SectorWavenumber(double k1, double k2);
  static SectorWavenumber polar(double r, double theta);

  double re() const { return k1_; }
  double im() const { return k2_; }
  cplx value() const { return {k1_, k2_}; }
  double modulus() const { return std::abs(value()); }

 private:
  double k1_;
  double k2_;
};

}  // namespace isp1d
