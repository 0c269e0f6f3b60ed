#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "isp1d/forward.hpp"
#include "isp1d/grid.hpp"
#include "isp1d/source.hpp"

namespace isp1d {

/// Fourier transform of the source recovered from endpoint data:
/// hat_pos[j] = f^(omega_j), hat_neg[j] = f^(-omega_j), f^(w) = int e^{-iwy} f(y) dy.
struct SpectrumEstimate {
  FrequencyGrid freq;
  std::vector<cplx> hat_pos;
  std::vector<cplx> hat_neg;
  cplx hat_zero;  ///< linear extrapolation of hat_pos from the two lowest nodes
};

SpectrumEstimate spectrum_from_data(const BoundaryData& data);

enum class Method { bandlimited, tikhonov };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct ReconstructionResult {
  SourceFunction estimate;
  double K_used;
  Method method;
  double alpha;                        ///< 0 for band-limited inversion
  std::optional<double> l2_error_sq;   ///< set when a truth source was supplied
};

struct ReconstructOptions {
  /// Zero the estimate outside this support (and declare it) when given.
  std::optional<Support> support;
  /// Reference source for l2_error_sq.
  const SourceFunction* truth = nullptr;
};

/// (1/2pi) int_{-K}^{K} f^(w) e^{iwy} dw at every node of `grid`.
ReconstructionResult bandlimited_reconstruct(const SpectrumEstimate& spec, double K,
                                             const SpatialGrid& grid,
                                             const ReconstructOptions& opts = {});

/// Minimiser of ||A f - d||_W^2 + alpha ||f||_H^2 over node samples on `grid`,
/// where A maps samples to (d+, d-) at the data nodes up to K, W holds the
/// frequency quadrature weights and H the trapezoid weights of the grid.
ReconstructionResult tikhonov_reconstruct(const BoundaryData& data, double K, double alpha,
                                          const SpatialGrid& grid,
                                          const ReconstructOptions& opts = {});

/// The discretised forward operator used by tikhonov_reconstruct: rows are d+
/// at each frequency node <= K followed by d- at the same nodes.
std::vector<cplx> apply_data_operator(const FrequencyGrid& freq, double K, const SpatialGrid& grid,
                                      std::span<const cplx> samples);

/// Integral of |truth - estimate|^2 over [-1, 1].
double l2_error(const SourceFunction& truth, const SourceFunction& estimate);

}  // namespace isp1d
