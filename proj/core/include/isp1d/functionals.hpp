#pragma once

#include <span>
#include <vector>

#include "isp1d/grid.hpp"
#include "isp1d/source.hpp"

namespace isp1d {

/// Which endpoint kernels the data functionals use.
enum class KernelForm {
  /// Full source with the exact Green's-function phases: I1 continues
  /// |omega u(1, omega)|^2 and I2 continues |omega u(-1, omega)|^2 for any support.
  exact,
  /// Literal one-sided form: I1 from f restricted to y >= 0 with e^{i ks (1-y)},
  /// I2 from f restricted to y < 0 with e^{i ks (-1-y)}.
  one_sided,
};

struct SectorOptions {
  KernelForm form = KernelForm::exact;
  /// Gauss-Legendre nodes per path panel; panels cover at most 20 units of
  /// path length, so |k| > 20 at least doubles the count.
  std::size_t nodes = 64;
  double panel_length = 20.0;
};

/// I1, I2 and their sum at one wavenumber.
struct FunctionalSample {
  SectorWavenumber k;
  cplx I1;
  cplx I2;
  cplx I;  // I1 + I2 as stored
  /// Relative change of I when the path quadrature is doubled.
  double refinement_change;
};

/// Integral along 0 -> k of the analytic continuation w(z) conj(w(conj z)) of the
/// right-endpoint data density |omega u(1, omega)|^2.
cplx I1_sector(const SectorWavenumber& k, const SourceFunction& f, const SectorOptions& opts = {});
/// Same for the left endpoint.
cplx I2_sector(const SectorWavenumber& k, const SourceFunction& f, const SectorOptions& opts = {});

enum class Endpoint { right, left, both };

/// Functional along the piecewise-linear path through `vertices` (first vertex
/// is normally 0). Every vertex must lie in the closed sector.
cplx functional_along_path(const SourceFunction& f, std::span<const cplx> vertices, Endpoint which,
                           const SectorOptions& opts = {});

FunctionalSample sample_functionals(const SectorWavenumber& k, const SourceFunction& f,
                                    const SectorOptions& opts = {});

/// |I1 + I2| / (|k| ||f||_0^2 e^{2|k2|}).
double lemma21_ratio(const SectorWavenumber& k, const SourceFunction& f,
                     const SectorOptions& opts = {});

struct SectorSweepRow {
  cplx k;
  cplx I;
  double ratio;
};

/// lemma21_ratio on the tensor grid k = r e^{i theta}.
std::vector<SectorSweepRow> sector_sweep(const SourceFunction& f, std::span<const double> radii,
                                         std::span<const double> angles,
                                         const SectorOptions& opts = {});

/// Closed-form lower bound for the harmonic measure of [0, K] in the sector
/// minus [0, K]: 1/2 below 2^{1/4} K, (1/pi)((k/K)^4 - 1)^{-1/2} above it, and
/// 1/pi exactly at the branch point.
double mu_lower(double k, double K);

struct ContinuationReport {
  std::vector<double> k;
  std::vector<double> mu;
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

/// For each real k: |I(k) e^{-2k}| / (epsilon^{2 mu(k)} M_sq). Samples at or
/// below K use mu = 1 (the data interval itself).
ContinuationReport continuation_check(const SourceFunction& f, double K,
                                      std::span<const double> k_samples, double epsilon,
                                      double M_sq, const SectorOptions& opts = {});

/// ||f||_0^2 over the integral of the data density on (0, omega_max); tends to 2/pi.
double lemma23_constant(const SourceFunction& f, double omega_max, double nodes_per_unit = 64.0);

struct Lemma24Sample {
  double omega;
  double numerator_minus;    // omega^2 |u(-1)|^2
  double denominator_minus;  // |int_{-1}^0 e^{2 omega y} f2|^2
  double numerator_plus;     // omega^2 |u(1)|^2
  double denominator_plus;   // |int_0^1 e^{2 omega y} f1|^2
  double ratio_minus;        // NaN when indeterminate
  double ratio_plus;
  bool indeterminate_minus;
  bool indeterminate_plus;
};

struct Lemma24Report {
  std::vector<Lemma24Sample> samples;
  /// Largest determinate ratio; the common constant the samples share.
  double fitted_C = 0.0;
  bool bounded = true;
};

Lemma24Report lemma24_check(const SourceFunction& f, std::span<const double> omega_samples);

}  // namespace isp1d
