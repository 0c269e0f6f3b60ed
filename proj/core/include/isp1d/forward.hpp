#pragma once

#include <cstdint>
#include <vector>

#include "isp1d/grid.hpp"
#include "isp1d/source.hpp"

namespace isp1d {

/// Outgoing Green's function i e^{ik|x|} / (2k) of u'' + k^2 u.
cplx green(double x, double k);

/// u(x, omega) = integral of green(x - y, omega) f(y) dy.
cplx solve_field(const SourceFunction& f, double omega, double x);

/// u(., omega) at every node of f's grid, in one sweep over the quadrature points.
std::vector<cplx> field_on_grid(const SourceFunction& f, double omega);

/// Endpoint data stored pre-multiplied by omega: d+ = omega u(1), d- = omega u(-1).
class BoundaryData {
 public:
  BoundaryData(FrequencyGrid freq, std::vector<cplx> d_plus, std::vector<cplx> d_minus,
               double noise_sigma = 0.0, std::uint64_t seed = 0);

  const FrequencyGrid& freq() const { return freq_; }
  std::span<const cplx> d_plus() const { return d_plus_; }
  std::span<const cplx> d_minus() const { return d_minus_; }
  double noise_sigma() const { return noise_sigma_; }
  std::uint64_t seed() const { return seed_; }

  /// Largest |d| over both endpoints.
  double max_abs() const;

 private:
  FrequencyGrid freq_;
  std::vector<cplx> d_plus_;
  std::vector<cplx> d_minus_;
  double noise_sigma_;
  std::uint64_t seed_;
};

/// d+(w) = (i/2) e^{iw} F(w), d-(w) = (i/2) e^{iw} F(-w) with F(w) = int e^{-iwy} f(y) dy.
BoundaryData boundary_data(const SourceFunction& f, const FrequencyGrid& freq);

struct Residuals {
  /// max over interior nodes of |u'' + w^2 u + f|. The Green's function
  /// i e^{ik|x|} / (2k) has G'' + k^2 G = -delta, so u solves u'' + w^2 u = -f.
  double pde;
  double bc;   ///< max of the two outgoing-condition defects at x = -1, 1
};

Residuals residual_check(const SourceFunction& f, double omega);

/// Adds complex Gaussian noise with per-component standard deviation
/// sigma * max|d|. Node j draws from its own stream seeded by (seed, j), so the
/// result does not depend on evaluation order.
BoundaryData add_noise(const BoundaryData& data, double sigma, std::uint64_t seed);

}  // namespace isp1d
