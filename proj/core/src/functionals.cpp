#include "isp1d/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "isp1d/errors.hpp"
#include "isp1d/forward.hpp"
#include "isp1d/quadrature.hpp"

namespace isp1d {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

bool in_sector(cplx z) {
  if (z == cplx{}) return true;
  return z.real() > 0.0 && std::abs(z.imag()) <= z.real() * (1.0 + 1e-12);
}

// Analytic continuation of the data density: for real z this is |(i/2) F(z)|^2.
cplx density(const SourceFunction& g, cplx z, bool negate) {
  const cplx s = negate ? -z : z;
  return 0.25 * g.transform(s) * std::conj(g.transform(std::conj(s)));
}

struct Densities {
  const SourceFunction* right;
  const SourceFunction* left;
  bool left_negated;
};

cplx path_integral(const Densities& d, std::span<const cplx> vertices, Endpoint which,
                   const SectorOptions& opts) {
  if (vertices.size() < 2) throw ArgumentError("functional path needs at least two vertices");
  if (opts.nodes == 0 || !(opts.panel_length > 0.0))
    throw ArgumentError("SectorOptions: nodes and panel_length must be positive");
  for (cplx v : vertices)
    if (!in_sector(v)) throw DomainError("functional path leaves the sector |arg k| <= pi/4");

  const auto& gl = gauss_legendre(opts.nodes);
  cplx total = 0.0;
  for (std::size_t s = 0; s + 1 < vertices.size(); ++s) {
    const cplx z0 = vertices[s];
    const cplx dz = vertices[s + 1] - z0;
    const double len = std::abs(dz);
    if (len == 0.0) continue;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(len / opts.panel_length)));
    for (std::size_t p = 0; p < panels; ++p) {
      const double t0 = static_cast<double>(p) / static_cast<double>(panels);
      const double t1 = static_cast<double>(p + 1) / static_cast<double>(panels);
      for (std::size_t r = 0; r < gl.nodes.size(); ++r) {
        const double t = t0 + 0.5 * (t1 - t0) * (gl.nodes[r] + 1.0);
        const double w = 0.5 * (t1 - t0) * gl.weights[r];
        const cplx z = z0 + t * dz;
        cplx g = 0.0;
        if (which != Endpoint::left) g += density(*d.right, z, false);
        if (which != Endpoint::right) g += density(*d.left, z, d.left_negated);
        total += w * dz * g;
      }
    }
  }
  return total;
}

cplx functional(const SourceFunction& f, std::span<const cplx> vertices, Endpoint which,
                const SectorOptions& opts) {
  if (opts.form == KernelForm::exact) return path_integral({&f, &f, true}, vertices, which, opts);
  const auto [f1, f2] = split_source(f);
  // e^{i z (-1 - y)} = e^{-iz} e^{-izy}; the constant phase cancels in w(z) conj(w(conj z)).
  return path_integral({&f1, &f2, false}, vertices, which, opts);
}

}  // namespace

cplx functional_along_path(const SourceFunction& f, std::span<const cplx> vertices, Endpoint which,
                           const SectorOptions& opts) {
  return functional(f, vertices, which, opts);
}

cplx I1_sector(const SectorWavenumber& k, const SourceFunction& f, const SectorOptions& opts) {
  const cplx path[] = {0.0, k.value()};
  return functional(f, path, Endpoint::right, opts);
}

cplx I2_sector(const SectorWavenumber& k, const SourceFunction& f, const SectorOptions& opts) {
  const cplx path[] = {0.0, k.value()};
  return functional(f, path, Endpoint::left, opts);
}

FunctionalSample sample_functionals(const SectorWavenumber& k, const SourceFunction& f,
                                    const SectorOptions& opts) {
  const cplx i1 = I1_sector(k, f, opts);
  const cplx i2 = I2_sector(k, f, opts);
  SectorOptions fine = opts;
  fine.nodes *= 2;
  const cplx path[] = {0.0, k.value()};
  const cplx refined = functional(f, path, Endpoint::both, fine);
  const cplx sum = i1 + i2;
  const double scale = std::abs(refined);
  const double change = scale > 0.0 ? std::abs(refined - sum) / scale : std::abs(sum);
  return {k, i1, i2, sum, change};
}

double lemma21_ratio(const SectorWavenumber& k, const SourceFunction& f, const SectorOptions& opts) {
  const double norm = l2_norm_sq(f);
  if (!(norm > 0.0)) throw DomainError("lemma21_ratio: undefined for the zero source");
  const cplx path[] = {0.0, k.value()};
  const cplx total = functional(f, path, Endpoint::both, opts);
  const double ratio = std::abs(total) / (k.modulus() * norm * std::exp(2.0 * std::abs(k.im())));
  if (!std::isfinite(ratio)) throw NumericalError("lemma21_ratio: non-finite ratio");
  return ratio;
}

std::vector<SectorSweepRow> sector_sweep(const SourceFunction& f, std::span<const double> radii,
                                         std::span<const double> angles,
                                         const SectorOptions& opts) {
  const double norm = l2_norm_sq(f);
  if (!(norm > 0.0)) throw DomainError("sector_sweep: undefined for the zero source");
  std::vector<SectorSweepRow> rows;
  rows.reserve(radii.size() * angles.size());
  for (double r : radii) {
    for (double theta : angles) {
      if (std::abs(theta) > kQuarterPi) throw DomainError("sector_sweep: angle outside the sector");
      const auto k = SectorWavenumber::polar(r, theta);
      const cplx path[] = {0.0, k.value()};
      const cplx total = functional(f, path, Endpoint::both, opts);
      const double ratio = std::abs(total) / (r * norm * std::exp(2.0 * std::abs(k.im())));
      if (!std::isfinite(ratio)) throw NumericalError("sector_sweep: non-finite ratio");
      rows.push_back({k.value(), total, ratio});
    }
  }
  return rows;
}

double mu_lower(double k, double K) {
  if (!(k > 0.0) || !(K > 0.0)) throw DomainError("mu_lower: k and K must be positive");
  const double branch = std::pow(2.0, 0.25) * K;
  if (k < branch) return 0.5;
  if (k == branch) return 1.0 / std::numbers::pi;
  const double q = k / K;
  return 1.0 / (std::numbers::pi * std::sqrt(q * q * q * q - 1.0));
}

ContinuationReport continuation_check(const SourceFunction& f, double K,
                                      std::span<const double> k_samples, double epsilon,
                                      double M_sq, const SectorOptions& opts) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw DomainError("continuation_check: epsilon must lie in (0, 1)");
  if (!(K > 0.0)) throw DomainError("continuation_check: K must be positive");
  if (!(M_sq > 0.0)) throw DomainError("continuation_check: M_sq must be positive");
  ContinuationReport report;
  for (double k : k_samples) {
    if (!(k > 0.0)) throw DomainError("continuation_check: k samples must be positive");
    const double mu = k <= K ? 1.0 : mu_lower(k, K);
    const cplx path[] = {0.0, cplx(k, 0.0)};
    const cplx total = functional(f, path, Endpoint::both, opts);
    const double ratio = std::abs(total * std::exp(-2.0 * k)) / (std::pow(epsilon, 2.0 * mu) * M_sq);
    if (!std::isfinite(ratio)) throw NumericalError("continuation_check: non-finite ratio");
    report.k.push_back(k);
    report.mu.push_back(mu);
    report.ratios.push_back(ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  return report;
}

double lemma23_constant(const SourceFunction& f, double omega_max, double nodes_per_unit) {
  const double norm = l2_norm_sq(f);
  if (!(norm > 0.0)) throw DomainError("lemma23_constant: undefined for the zero source");
  const auto freq = FrequencyGrid::with_density(0.0, omega_max, nodes_per_unit);
  const auto data = boundary_data(f, freq);
  std::vector<double> density(freq.size());
  for (std::size_t j = 0; j < density.size(); ++j)
    density[j] = std::norm(data.d_plus()[j]) + std::norm(data.d_minus()[j]);
  const double energy = freq.integrate(std::span<const double>(density), 0.0, omega_max);
  return norm / energy;
}

Lemma24Report lemma24_check(const SourceFunction& f, std::span<const double> omega_samples) {
  const auto [f1, f2] = split_source(f);
  Lemma24Report report;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double w : omega_samples) {
    if (!(w > 0.0)) throw DomainError("lemma24_check: frequencies must be positive");
    Lemma24Sample s{};
    s.omega = w;
    s.numerator_plus = 0.25 * std::norm(f.transform(w));
    s.numerator_minus = 0.25 * std::norm(f.transform(-w));
    // e^{2wy} = e^{-i (2iw) y}
    s.denominator_plus = std::norm(f1.transform(cplx(0.0, 2.0 * w)));
    s.denominator_minus = std::norm(f2.transform(cplx(0.0, 2.0 * w)));
    auto ratio = [&](double num, double den, bool& indeterminate) {
      const double r = num / den;
      indeterminate = !(den > 0.0) || !std::isfinite(r);
      return indeterminate ? nan : r;
    };
    s.ratio_plus = ratio(s.numerator_plus, s.denominator_plus, s.indeterminate_plus);
    s.ratio_minus = ratio(s.numerator_minus, s.denominator_minus, s.indeterminate_minus);
    if (!s.indeterminate_plus) report.fitted_C = std::max(report.fitted_C, s.ratio_plus);
    if (!s.indeterminate_minus) report.fitted_C = std::max(report.fitted_C, s.ratio_minus);
    report.samples.push_back(s);
  }
  report.bounded = std::isfinite(report.fitted_C);
  return report;
}

}  // namespace isp1d
