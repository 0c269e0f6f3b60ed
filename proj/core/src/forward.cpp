#include "isp1d/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "isp1d/errors.hpp"

namespace isp1d {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_positive_frequency(double omega, const char* who) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError(std::string(who) + ": frequency must be positive");
}

// Standard normal pair from two 53-bit uniforms; independent of the
// implementation-defined std::normal_distribution so output is portable.
std::pair<double, double> box_muller(std::mt19937_64& gen) {
  const double u1 = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(gen() >> 11) * 0x1.0p-53;          // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

}  // namespace

cplx green(double x, double k) {
  require_positive_frequency(k, "green");
  return kI * std::exp(kI * (k * std::abs(x))) / (2.0 * k);
}

cplx solve_field(const SourceFunction& f, double omega, double x) {
  require_positive_frequency(omega, "solve_field");
  const auto s = f.support();
  const cplx pre = kI / (2.0 * omega);
  if (x <= s.a) return pre * std::exp(-kI * (omega * x)) * f.transform(-omega);
  if (x >= s.b) return pre * std::exp(kI * (omega * x)) * f.transform(omega);
  const auto span = f.span();
  if (span.first > span.last) return 0.0;

  // Split at x so each piece has a smooth kernel.
  const auto& grid = f.grid();
  const InterpolatoryRule left(grid, span.first, span.last, s.a, x);
  const InterpolatoryRule right(grid, span.first, span.last, x, s.b);
  auto piece = [&](const InterpolatoryRule& rule, double sign) {
    const auto v = rule.interpolate(f.values());
    const auto y = rule.points();
    const auto w = rule.weights();
    cplx acc = 0.0;
    for (std::size_t q = 0; q < v.size(); ++q)
      acc += w[q] * v[q] * std::exp(kI * (sign * omega * (x - y[q])));
    return acc;
  };
  return pre * (piece(left, 1.0) + piece(right, -1.0));
}

std::vector<cplx> field_on_grid(const SourceFunction& f, double omega) {
  require_positive_frequency(omega, "field_on_grid");
  const auto& grid = f.grid();
  const auto y = f.rule().points();
  const auto c = f.weighted_points();
  const cplx pre = kI / (2.0 * omega);

  // prefix[q] = sum_{p<q} c_p e^{-iwy_p}; suffix from the right with e^{+iwy_p}.
  const std::size_t nq = y.size();
  std::vector<cplx> prefix(nq + 1, 0.0);
  std::vector<cplx> suffix(nq + 1, 0.0);
  for (std::size_t q = 0; q < nq; ++q) prefix[q + 1] = prefix[q] + c[q] * std::exp(-kI * (omega * y[q]));
  for (std::size_t q = nq; q-- > 0;) suffix[q] = suffix[q + 1] + c[q] * std::exp(kI * (omega * y[q]));

  std::vector<cplx> u(grid.size());
  std::size_t q = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    // Panels break at nodes, so every point lies strictly on one side of x.
    while (q < nq && y[q] < x) ++q;
    u[i] = pre * (std::exp(kI * (omega * x)) * prefix[q] + std::exp(-kI * (omega * x)) * suffix[q]);
  }
  return u;
}

BoundaryData::BoundaryData(FrequencyGrid freq, std::vector<cplx> d_plus, std::vector<cplx> d_minus,
                           double noise_sigma, std::uint64_t seed)
    : freq_(std::move(freq)), d_plus_(std::move(d_plus)), d_minus_(std::move(d_minus)),
      noise_sigma_(noise_sigma), seed_(seed) {
  if (d_plus_.size() != freq_.size() || d_minus_.size() != freq_.size())
    throw ArgumentError("BoundaryData: array lengths must equal the frequency node count");
  if (!(noise_sigma_ >= 0.0)) throw ArgumentError("BoundaryData: noise_sigma must be >= 0");
}

double BoundaryData::max_abs() const {
  double m = 0.0;
  for (cplx v : d_plus_) m = std::max(m, std::abs(v));
  for (cplx v : d_minus_) m = std::max(m, std::abs(v));
  return m;
}

BoundaryData boundary_data(const SourceFunction& f, const FrequencyGrid& freq) {
  const auto nodes = freq.nodes();
  std::vector<cplx> dp(nodes.size());
  std::vector<cplx> dm(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double w = nodes[j];
    const cplx pre = 0.5 * kI * std::exp(kI * w);
    dp[j] = pre * f.transform(w);
    dm[j] = pre * f.transform(-w);
  }
  return BoundaryData(freq, std::move(dp), std::move(dm));
}

Residuals residual_check(const SourceFunction& f, double omega) {
  require_positive_frequency(omega, "residual_check");
  const auto& grid = f.grid();
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const auto u = field_on_grid(f, omega);
  const auto fv = f.values();

  double pde = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const cplx upp = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    pde = std::max(pde, std::abs(upp + omega * omega * u[i] + fv[i]));
  }
  const cplx du_left = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  const cplx du_right = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  const double bc = std::max(std::abs(du_left + kI * omega * u[0]),
                             std::abs(du_right - kI * omega * u[n - 1]));
  return {pde, bc};
}

BoundaryData add_noise(const BoundaryData& data, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("add_noise: sigma must be >= 0");
  std::vector<cplx> dp(data.d_plus().begin(), data.d_plus().end());
  std::vector<cplx> dm(data.d_minus().begin(), data.d_minus().end());
  if (sigma > 0.0) {
    const double scale = sigma * data.max_abs();
    for (std::size_t j = 0; j < dp.size(); ++j) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32)};
      std::mt19937_64 gen(seq);
      const auto [a, b] = box_muller(gen);
      const auto [c, d] = box_muller(gen);
      dp[j] += scale * cplx(a, b);
      dm[j] += scale * cplx(c, d);
    }
  }
  return BoundaryData(data.freq(), std::move(dp), std::move(dm), sigma, seed);
}

}  // namespace isp1d
