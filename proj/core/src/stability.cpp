#include "isp1d/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "isp1d/errors.hpp"
#include "isp1d/functionals.hpp"
#include "isp1d/reconstruction.hpp"

namespace isp1d {

namespace {

// K^{2/3} E^{1/4}, exact for perfect cubes and fourth powers.
double split_scale(double K, double E) {
  const double c = std::cbrt(K);
  return c * c * std::sqrt(std::sqrt(E));
}

double data_density_integral(const BoundaryData& data, double lo, double hi) {
  const auto& freq = data.freq();
  std::vector<double> density(freq.size());
  for (std::size_t j = 0; j < density.size(); ++j)
    density[j] = std::norm(data.d_plus()[j]) + std::norm(data.d_minus()[j]);
  return freq.integrate(std::span<const double>(density), lo, hi);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite ") + what);
}

}  // namespace

double epsilon_sq(const BoundaryData& data, double K) {
  if (!(K > 0.0)) throw DomainError("epsilon_sq: K must be positive");
  if (K > data.freq().omega_max() * (1.0 + 1e-12))
    throw DomainError("epsilon_sq: K exceeds the data bandwidth");
  return data_density_integral(data, data.freq().omega_min(), std::min(K, data.freq().omega_max()));
}

bool continuation_branch(double K, double E) {
  return std::sqrt(std::sqrt(2.0)) * std::cbrt(K) < std::sqrt(std::sqrt(E));
}

double choose_k(double K, double E) {
  if (!(K > 1.0)) throw DomainError("choose_k: K must exceed 1");
  if (!(E > 0.0)) throw DomainError("choose_k: E must be positive");
  if (continuation_branch(K, E)) return split_scale(K, E);
  return K;
}

double choose_k_jump(double K) { return (std::pow(2.0, 0.25) - 1.0) * K; }

TailEstimate tail_integral(const SourceFunction& f, double k, double omega_max,
                           double nodes_per_unit) {
  if (!(k >= 0.0) || !(k < omega_max)) throw DomainError("tail_integral: need 0 <= k < omega_max");
  const auto freq = FrequencyGrid::with_density(k, omega_max, nodes_per_unit);
  const auto data = boundary_data(f, freq);
  TailEstimate t{data_density_integral(data, k, omega_max), 0.0, 0.0};
  if (t.integral == 0.0) return t;

  const double W = omega_max;
  const double mid = std::max(k, 0.5 * W);
  const double low = std::max(k, 0.25 * W);
  const double upper_part = data_density_integral(data, mid, W);
  const double lower_part = data_density_integral(data, low, mid);
  if (!(upper_part > 0.0) || !(lower_part > 0.0) || mid <= low) return t;
  // Energy in [a, b] for density C w^{-p}: C (a^{1-p} - b^{1-p}) / (p - 1).
  // Windows are [W/4, W/2] and [W/2, W] when k <= W/4, which gives ratio 2^{1-p}.
  if (low == 0.25 * W && mid == 0.5 * W) {
    t.decay_exponent = 1.0 - std::log2(upper_part / lower_part);
  } else {
    // Fit p from the window ratio by bisection.
    const double target = upper_part / lower_part;
    auto ratio = [&](double p) {
      if (std::abs(p - 1.0) < 1e-9) return std::log(W / mid) / std::log(mid / low);
      const double e = 1.0 - p;
      return (std::pow(W, e) - std::pow(mid, e)) / (std::pow(mid, e) - std::pow(low, e));
    };
    double a = -10.0;
    double b = 50.0;
    for (int i = 0; i < 200; ++i) {
      const double c = 0.5 * (a + b);
      (ratio(c) > target ? a : b) = c;
    }
    t.decay_exponent = 0.5 * (a + b);
  }
  const double p = t.decay_exponent;
  if (p > 1.0) {
    // int_W^inf C w^{-p} relative to the upper window's energy.
    t.remainder = upper_part * std::pow(W, 1.0 - p) / (std::pow(mid, 1.0 - p) - std::pow(W, 1.0 - p));
  } else {
    t.remainder = std::numeric_limits<double>::infinity();
  }
  return t;
}

TheoremRhs theorem_rhs(double eps_sq, double K, double M_sq) {
  if (!(eps_sq > 0.0)) throw DomainError("theorem_rhs: epsilon_sq must be positive");
  if (!(K > 0.0)) throw DomainError("theorem_rhs: K must be positive");
  if (!(M_sq >= 0.0)) throw DomainError("theorem_rhs: M_sq must be nonnegative");
  TheoremRhs r{};
  r.vacuous = eps_sq >= 1.0;
  r.E = -0.5 * std::log(eps_sq);
  const double E = r.vacuous ? 0.0 : r.E;
  r.value = eps_sq + M_sq / (split_scale(K, E) + 1.0);
  return r;
}

FrequencyGrid data_grid(double K, const StabilityOptions& opts) {
  return FrequencyGrid::with_density(0.0, K, opts.nodes_per_unit);
}

StabilityReport stability_report(const SourceFunction& f, const BoundaryData& data, double K,
                                 const StabilityOptions& opts) {
  if (!(K > 1.0)) throw DomainError("stability_report: K must exceed 1");
  StabilityReport r;
  r.K = K;
  r.sigma = data.noise_sigma();
  r.seed = data.seed();
  r.lhs = l2_norm_sq(f);
  const auto h1 = h1_norm_sq(f);
  r.not_h1 = h1.not_h1;
  r.M_sq_h1 = std::pow(std::max(h1.value, 1.0), 2);
  r.M_sq_l2 = std::pow(std::max(r.lhs, 1.0), 2);
  r.epsilon_sq = epsilon_sq(data, K);
  require_finite(r.M_sq_h1, "source norm");
  require_finite(r.epsilon_sq, "data discrepancy");

  if (r.epsilon_sq == 0.0) {
    // Zero data: E is infinite, the bound collapses to 0 = ||f||^2.
    r.E = std::numeric_limits<double>::infinity();
    r.k_chosen = K;
    r.mu_at_k = mu_lower(K, K);
    r.rhs_core = 0.0;
    r.fitted_C = 0.0;
    return r;
  }

  const auto rhs = theorem_rhs(r.epsilon_sq, K, r.M_sq_h1);
  r.E = rhs.E;
  r.vacuous = rhs.vacuous;
  r.k_chosen = r.vacuous ? K : choose_k(K, r.E);
  r.mu_at_k = mu_lower(r.k_chosen, K);
  r.rhs_core = rhs.value;
  r.fitted_C = r.lhs / r.rhs_core;
  const auto tail = tail_integral(f, r.k_chosen, opts.tail_factor * r.k_chosen,
                                  opts.tail_nodes_per_unit);
  r.tail_at_k = tail.total();
  r.tail_remainder = tail.remainder;

  require_finite(r.fitted_C, "fitted constant");
  require_finite(r.tail_at_k, "tail estimate");
  return r;
}

StabilityReport verify_theorem(const SourceFunction& f, double K, double sigma, std::uint64_t seed,
                               const StabilityOptions& opts) {
  if (!(K > 1.0)) throw DomainError("verify_theorem: K must exceed 1");
  const auto clean = boundary_data(f, data_grid(K, opts));
  return stability_report(f, add_noise(clean, sigma, seed), K, opts);
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t k_index, std::size_t sigma_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k_index), static_cast<std::uint32_t>(sigma_index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SweepResult sweep(const SourceFunction& f, std::span<const double> K_list,
                  std::span<const double> sigma_list, std::uint64_t seed, const SweepOptions& opts) {
  for (double K : K_list)
    if (!(K > 1.0)) throw DomainError("sweep: every K must exceed 1");
  for (double s : sigma_list)
    if (!(s >= 0.0)) throw DomainError("sweep: every sigma must be >= 0");
  auto has_duplicates = [](std::span<const double> xs) {
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (has_duplicates(K_list)) throw ArgumentError("sweep: duplicate K value");
  if (has_duplicates(sigma_list)) throw ArgumentError("sweep: duplicate sigma value");

  SweepResult result;
  for (std::size_t i = 0; i < K_list.size(); ++i) {
    const double K = K_list[i];
    const auto clean = boundary_data(f, data_grid(K, opts.stability));
    for (std::size_t j = 0; j < sigma_list.size(); ++j) {
      const auto data = add_noise(clean, sigma_list[j], cell_seed(seed, i, j));
      const auto report = stability_report(f, data, K, opts.stability);
      ReconstructOptions ro;
      ro.truth = &f;
      const auto bl = bandlimited_reconstruct(spectrum_from_data(data), K, f.grid(), ro);
      const auto tik = tikhonov_reconstruct(data, K, opts.alpha, f.grid(), ro);
      result.rows.push_back({K, sigma_list[j], report.epsilon_sq, report.lhs, report.rhs_core,
                             report.fitted_C, *bl.l2_error_sq, *tik.l2_error_sq});
    }
  }
  return result;
}

}  // namespace isp1d
