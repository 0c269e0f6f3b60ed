#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isp1d/forward.hpp"
#include "isp1d/source.hpp"

namespace isp1d {

/// Data discrepancy: integral over (0, K) of |d+|^2 + |d-|^2 (= w^2 |u|^2 summed).
double epsilon_sq(const BoundaryData& data, double K);

/// True when the continuation branch applies: 2^{1/4} K^{1/3} < E^{1/4}.
bool continuation_branch(double K, double E);

/// Frequency split point: K^{2/3} E^{1/4} on the continuation branch, K otherwise.
double choose_k(double K, double E);

/// Size of the jump of choose_k across E = 2 K^{4/3}: (2^{1/4} - 1) K.
double choose_k_jump(double K);

struct TailEstimate {
  double integral;        ///< int_k^{omega_max} of |d+|^2 + |d-|^2
  double remainder;       ///< power-law estimate of the part beyond omega_max
  double decay_exponent;  ///< fitted p in density ~ omega^{-p}
  double total() const { return integral + remainder; }
};

/// High-frequency data energy above k. The remainder assumes the density decays
/// like omega^{-p} with p measured from the energy in [W/4, W/2] and [W/2, W].
TailEstimate tail_integral(const SourceFunction& f, double k, double omega_max,
                           double nodes_per_unit = 64.0);

struct TheoremRhs {
  double value;
  double E;
  bool vacuous;  ///< epsilon_sq >= 1: E <= 0 and the bound says nothing
};

/// epsilon_sq + M_sq / (K^{2/3} E^{1/4} + 1), E = -ln(epsilon_sq) / 2, without
/// the generic constant. A vacuous input uses E = 0.
TheoremRhs theorem_rhs(double epsilon_sq, double K, double M_sq);

struct StabilityReport {
  double epsilon_sq = 0.0;
  double E = 0.0;
  double M_sq_h1 = 0.0;  ///< max(||f||_1^2, 1)^2
  double M_sq_l2 = 0.0;  ///< max(||f||_0^2, 1)^2
  double K = 0.0;
  double k_chosen = 0.0;
  double mu_at_k = 0.0;
  double rhs_core = 0.0;
  double lhs = 0.0;  ///< ||f||_0^2
  double fitted_C = 0.0;
  double tail_at_k = 0.0;
  double tail_remainder = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  bool vacuous = false;
  bool not_h1 = false;
};

struct StabilityOptions {
  /// Frequency nodes per unit bandwidth for the synthesised data.
  double nodes_per_unit = 512.0;
  /// Tail integrals run to tail_factor * k and are extrapolated beyond.
  double tail_factor = 10.0;
  double tail_nodes_per_unit = 64.0;
};

/// Frequency grid (0, K] with opts.nodes_per_unit nodes per unit, whole panels.
FrequencyGrid data_grid(double K, const StabilityOptions& opts = {});

/// Report for given (possibly noisy) data whose grid covers (0, K].
StabilityReport stability_report(const SourceFunction& f, const BoundaryData& data, double K,
                                 const StabilityOptions& opts = {});

/// Synthesises data on (0, K], adds noise and evaluates every theorem quantity.
StabilityReport verify_theorem(const SourceFunction& f, double K, double sigma, std::uint64_t seed,
                               const StabilityOptions& opts = {});

struct SweepRow {
  double K;
  double sigma;
  double epsilon_sq;
  double lhs;
  double rhs_core;
  double fitted_C;
  double recon_error_bl;
  double recon_error_tik;
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< ordered by (K index, sigma index)
};

struct SweepOptions {
  StabilityOptions stability;
  double alpha = 1e-6;
};

/// Seed for sweep cell (K index, sigma index).
std::uint64_t cell_seed(std::uint64_t seed, std::size_t k_index, std::size_t sigma_index);

SweepResult sweep(const SourceFunction& f, std::span<const double> K_list,
                  std::span<const double> sigma_list, std::uint64_t seed,
                  const SweepOptions& opts = {});

}  // namespace isp1d
