#include "isp1d/reconstruction.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "isp1d/errors.hpp"
#include "isp1d/quadrature.hpp"

namespace isp1d {

namespace {

constexpr cplx kI{0.0, 1.0};

using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

SourceFunction finish_estimate(const SpatialGrid& grid, std::vector<cplx> values,
                               const ReconstructOptions& opts) {
  if (!opts.support) return SourceFunction::on_full_interval(grid, std::move(values));
  const double tol = 1e-9 * grid.spacing();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double y = grid.node(i);
    if (y < opts.support->a - tol || y > opts.support->b + tol) values[i] = 0.0;
  }
  return SourceFunction(grid, std::move(values), *opts.support);
}

// Number of leading frequency nodes at or below K.
std::size_t rows_up_to(const FrequencyGrid& freq, double K) {
  const auto nodes = freq.nodes();
  const double tol = 1e-12 * std::max(1.0, K);
  return static_cast<std::size_t>(
      std::upper_bound(nodes.begin(), nodes.end(), K + tol) - nodes.begin());
}

// Row j of the operator for node omega: (i/2) e^{iw} int e^{-i s w y} phi_l(y) dy.
void fill_operator_rows(const InterpolatoryRule& rule, double omega, Matrix& A, Eigen::Index plus,
                        Eigen::Index minus, double scale) {
  const auto y = rule.points();
  const auto w = rule.weights();
  std::vector<cplx> kp(y.size());
  std::vector<cplx> km(y.size());
  for (std::size_t q = 0; q < y.size(); ++q) {
    const cplx e = std::exp(-kI * (omega * y[q]));
    kp[q] = w[q] * e;
    km[q] = w[q] * std::conj(e);
  }
  const cplx pre = scale * 0.5 * kI * std::exp(kI * omega);
  const auto sp = rule.scatter(kp);
  const auto sm = rule.scatter(km);
  for (std::size_t l = 0; l < sp.size(); ++l) {
    A(plus, static_cast<Eigen::Index>(l)) = pre * sp[l];
    A(minus, static_cast<Eigen::Index>(l)) = pre * sm[l];
  }
}

}  // namespace

std::string_view to_string(Method m) {
  return m == Method::bandlimited ? "bandlimited" : "tikhonov";
}

Method method_from_string(std::string_view name) {
  if (name == "bandlimited") return Method::bandlimited;
  if (name == "tikhonov") return Method::tikhonov;
  throw ArgumentError("unknown reconstruction method '" + std::string(name) + "'");
}

SpectrumEstimate spectrum_from_data(const BoundaryData& data) {
  const auto& freq = data.freq();
  const auto nodes = freq.nodes();
  SpectrumEstimate s{freq, std::vector<cplx>(nodes.size()), std::vector<cplx>(nodes.size()), 0.0};
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const cplx factor = -2.0 * kI * std::exp(-kI * nodes[j]);
    s.hat_pos[j] = factor * data.d_plus()[j];
    s.hat_neg[j] = factor * data.d_minus()[j];
  }
  if (nodes.size() >= 2) {
    const double w1 = nodes[0];
    const double w2 = nodes[1];
    s.hat_zero = (w2 * s.hat_pos[0] - w1 * s.hat_pos[1]) / (w2 - w1);
  } else {
    s.hat_zero = s.hat_pos.empty() ? cplx{} : s.hat_pos[0];
  }
  return s;
}

ReconstructionResult bandlimited_reconstruct(const SpectrumEstimate& spec, double K,
                                             const SpatialGrid& grid,
                                             const ReconstructOptions& opts) {
  if (!(K > 0.0)) throw DomainError("bandlimited_reconstruct: K must be positive");
  if (K > spec.freq.omega_max() * (1.0 + 1e-12))
    throw DomainError("bandlimited_reconstruct: K exceeds the data bandwidth");
  const auto weights = spec.freq.weights_between(spec.freq.omega_min(), std::min(K, spec.freq.omega_max()));
  const auto nodes = spec.freq.nodes();

  std::vector<cplx> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.node(i);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (weights[j] == 0.0) continue;
      const cplx e = std::exp(kI * (nodes[j] * y));
      acc += weights[j] * (spec.hat_pos[j] * e + spec.hat_neg[j] * std::conj(e));
    }
    values[i] = acc / (2.0 * std::numbers::pi);
  }
  ReconstructionResult result{finish_estimate(grid, std::move(values), opts), K,
                              Method::bandlimited, 0.0, std::nullopt};
  if (opts.truth) result.l2_error_sq = l2_error(*opts.truth, result.estimate);
  return result;
}

std::vector<cplx> apply_data_operator(const FrequencyGrid& freq, double K, const SpatialGrid& grid,
                                      std::span<const cplx> samples) {
  if (samples.size() != grid.size()) throw ArgumentError("apply_data_operator: length mismatch");
  const std::size_t rows = rows_up_to(freq, K);
  const InterpolatoryRule rule(grid);
  const auto v = rule.interpolate(samples);
  const auto y = rule.points();
  const auto w = rule.weights();
  std::vector<cplx> out(2 * rows);
  for (std::size_t j = 0; j < rows; ++j) {
    const double omega = freq.nodes()[j];
    cplx fp = 0.0;
    cplx fm = 0.0;
    for (std::size_t q = 0; q < y.size(); ++q) {
      const cplx e = std::exp(-kI * (omega * y[q]));
      fp += w[q] * v[q] * e;
      fm += w[q] * v[q] * std::conj(e);
    }
    const cplx pre = 0.5 * kI * std::exp(kI * omega);
    out[j] = pre * fp;
    out[rows + j] = pre * fm;
  }
  return out;
}

ReconstructionResult tikhonov_reconstruct(const BoundaryData& data, double K, double alpha,
                                          const SpatialGrid& grid,
                                          const ReconstructOptions& opts) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("tikhonov_reconstruct: alpha must be positive");
  if (!(K > 0.0)) throw DomainError("tikhonov_reconstruct: K must be positive");
  const auto& freq = data.freq();
  if (K > freq.omega_max() * (1.0 + 1e-12))
    throw DomainError("tikhonov_reconstruct: K exceeds the data bandwidth");
  const std::size_t rows = rows_up_to(freq, K);
  if (rows == 0) throw DomainError("tikhonov_reconstruct: no frequency nodes below K");

  const auto n = static_cast<Eigen::Index>(grid.size());
  const InterpolatoryRule rule(grid);
  // Square-root weighted operator and data, stacked (d+ rows, then d- rows),
  // accumulated into the normal equations a block of frequencies at a time.
  constexpr std::size_t kBlock = 512;
  Matrix normal = Matrix::Zero(n, n);
  Vector rhs = Vector::Zero(n);
  for (std::size_t j0 = 0; j0 < rows; j0 += kBlock) {
    const std::size_t count = std::min(kBlock, rows - j0);
    const auto c = static_cast<Eigen::Index>(count);
    Matrix A(2 * c, n);
    Vector d(2 * c);
    for (std::size_t t = 0; t < count; ++t) {
      const std::size_t j = j0 + t;
      const auto r = static_cast<Eigen::Index>(t);
      const double sw = std::sqrt(freq.weights()[j]);
      fill_operator_rows(rule, freq.nodes()[j], A, r, r + c, sw);
      d(r) = sw * data.d_plus()[j];
      d(r + c) = sw * data.d_minus()[j];
    }
    normal.selfadjointView<Eigen::Lower>().rankUpdate(A.adjoint());
    rhs.noalias() += A.adjoint() * d;
  }
  const double h = grid.spacing();
  for (Eigen::Index i = 0; i < n; ++i)
    normal(i, i) += alpha * ((i == 0 || i == n - 1) ? 0.5 * h : h);

  Eigen::LLT<Matrix, Eigen::Lower> llt(normal);
  if (llt.info() != Eigen::Success)
    throw NumericalError("tikhonov_reconstruct: normal matrix is not positive definite");
  const Vector x = llt.solve(rhs);

  std::vector<cplx> values(grid.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = x(i);
    if (!std::isfinite(x(i).real()) || !std::isfinite(x(i).imag()))
      throw NumericalError("tikhonov_reconstruct: non-finite solution");
  }
  ReconstructionResult result{finish_estimate(grid, std::move(values), opts), K, Method::tikhonov,
                              alpha, std::nullopt};
  if (opts.truth) result.l2_error_sq = l2_error(*opts.truth, result.estimate);
  return result;
}

double l2_error(const SourceFunction& truth, const SourceFunction& estimate) {
  if (!(truth.grid() == estimate.grid())) throw ArgumentError("l2_error: grids differ");
  const auto& grid = truth.grid();
  // Panels break at every node and at both supports' endpoints, so each
  // represented function is a single polynomial (or zero) on every panel.
  std::vector<double> breaks(grid.nodes().begin(), grid.nodes().end());
  for (const auto* s : {&truth, &estimate}) {
    breaks.push_back(s->support().a);
    breaks.push_back(s->support().b);
  }
  std::sort(breaks.begin(), breaks.end());
  const auto& gl = gauss_legendre(kDefaultStencil + 1);
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    if (b - a <= 1e-14) continue;
    for (std::size_t r = 0; r < gl.nodes.size(); ++r) {
      const double y = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[r];
      acc += 0.5 * (b - a) * gl.weights[r] * std::norm(truth.evaluate(y) - estimate.evaluate(y));
    }
  }
  return acc;
}

}  // namespace isp1d
