#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "isp1d/quadrature.hpp"
#include "isp1d/source.hpp"

namespace testing {

using isp1d::cplx;
inline constexpr double pi = std::numbers::pi;
inline const cplx I{0.0, 1.0};

inline double rel(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline cplx random_complex(std::mt19937_64& g) { return {uniform(g, -2, 2), uniform(g, -2, 2)}; }

/// Random member of the cos^p family with support inside (-1, 1).
inline isp1d::BumpParams random_bump(std::mt19937_64& g) {
  isp1d::BumpParams p;
  p.width = uniform(g, 0.3, 1.2);
  const double room = 1.0 - p.width / 2 - 0.05;
  p.center = uniform(g, -room, room);
  p.amplitude = uniform(g, 0.5, 2.0);
  p.power = uniform(g, 0, 1) < 0.5 ? 1 : 2;
  return p;
}

/// cos^2 bump on (-1/2, 1/2) and its transform.
inline double bump_value(double y) {
  return std::abs(y) < 0.5 ? std::pow(std::cos(pi * y), 2) : 0.0;
}
inline double bump_transform(double w) {
  if (std::abs(w) < 1e-6) return 0.5;
  return 4 * pi * pi * std::sin(w / 2) / (w * (4 * pi * pi - w * w));
}

/// Transform of a bump by high-order Gauss quadrature on its support, independent of the
/// grid samples.
inline cplx direct_transform(const isp1d::BumpParams& p, cplx kappa) {
  const auto& gl = isp1d::gauss_legendre(40);
  const double a = p.center - p.width / 2;
  const double b = p.center + p.width / 2;
  const int pieces = 16;
  cplx acc = 0.0;
  for (int s = 0; s < pieces; ++s) {
    const double lo = a + (b - a) * s / pieces;
    const double hi = a + (b - a) * (s + 1) / pieces;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[q];
      const double v = p.amplitude * std::pow(std::cos(pi * (y - p.center) / p.width), p.power);
      acc += 0.5 * (hi - lo) * gl.weights[q] * v * std::exp(-I * kappa * y);
    }
  }
  return acc;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("isp1d_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
