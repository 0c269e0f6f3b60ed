#include "doctest.h"
#include "helpers.hpp"
#include "isp1d/errors.hpp"
#include "isp1d/forward.hpp"
#include "isp1d/functionals.hpp"

using namespace isp1d;
using namespace testing;

namespace {

// Cumulative frequency integrals of |d+|^2 and |d-|^2 over (0, k).
std::pair<double, double> cumulative_data(const SourceFunction& f, double k) {
  const FrequencyGrid fg = FrequencyGrid::with_density(0.0, k, 64);
  const auto d = boundary_data(f, fg);
  std::vector<double> p(fg.size()), m(fg.size());
  for (std::size_t j = 0; j < fg.size(); ++j) {
    p[j] = std::norm(d.d_plus()[j]);
    m[j] = std::norm(d.d_minus()[j]);
  }
  return {fg.integrate(p, 0.0, k), fg.integrate(m, 0.0, k)};
}

const SectorWavenumber k_real(double k) { return SectorWavenumber(k, 0.0); }

}  // namespace

TEST_SUITE("analytic-functionals") {

TEST_CASE("functionals of the zero source vanish") {
  const auto zero = SourceFunction::zero(SpatialGrid(201), {-0.5, 0.5});
  for (const auto& k : {k_real(3.0), SectorWavenumber(4.0, 4.0), SectorWavenumber::polar(30, -0.5)}) {
    CHECK(I1_sector(k, zero) == cplx(0.0));
    CHECK(I2_sector(k, zero) == cplx(0.0));
  }
  CHECK_THROWS_AS(lemma21_ratio(k_real(2.0), zero), DomainError);
  CHECK_THROWS_AS(lemma23_constant(zero, 50.0), DomainError);
}

TEST_CASE("on the real axis I1 and I2 are the cumulative data integrals") {
  auto g64 = rng(31);
  const SpatialGrid g(401);
  for (int t = 0; t < 6; ++t) {
    const auto f = make_bump(g, random_bump(g64)).scaled(random_complex(g64));
    for (double k : {0.7, 5.0, 23.0}) {
      const auto [plus, minus] = cumulative_data(f, k);
      CHECK(rel(I1_sector(k_real(k), f), plus) < 1e-8);
      CHECK(rel(I2_sector(k_real(k), f), minus) < 1e-8);
    }
  }
  const auto box = make_indicator(g, {-0.3, 0.6});
  const auto [plus, minus] = cumulative_data(box, 12.0);
  CHECK(rel(I1_sector(k_real(12.0), box) + I2_sector(k_real(12.0), box), plus + minus) < 1e-8);
}

TEST_CASE("functionals are independent of the path") {
  auto g64 = rng(32);
  const SpatialGrid g(401);
  for (int t = 0; t < 4; ++t) {
    const auto f = make_bump(g, random_bump(g64));
    for (const auto& k : {SectorWavenumber::polar(5, pi / 8), SectorWavenumber::polar(20, -pi / 8),
                          SectorWavenumber::polar(12, 0.7)}) {
      const cplx straight = I1_sector(k, f) + I2_sector(k, f);
      const cplx via_real[] = {0.0, cplx(k.modulus(), 0.0), k.value()};
      const cplx via_edge[] = {0.0, std::polar(k.modulus() * 0.6, std::arg(k.value()) > 0 ? pi / 4 : -pi / 4),
                               k.value()};
      CHECK(rel(functional_along_path(f, via_real, Endpoint::both), straight) < 1e-8);
      CHECK(rel(functional_along_path(f, via_edge, Endpoint::both), straight) < 1e-8);
    }
  }
}

TEST_CASE("paths must stay in the sector") {
  const auto f = make_bump(SpatialGrid(201), {});
  const cplx outside[] = {0.0, cplx(1.0, 2.0), cplx(3.0, 0.0)};
  CHECK_THROWS_AS(functional_along_path(f, outside, Endpoint::both), DomainError);
}

TEST_CASE("I2 is I1 of the mirrored source") {
  auto g64 = rng(33);
  const SpatialGrid g(401);
  for (int t = 0; t < 6; ++t) {
    const auto f = make_bump(g, random_bump(g64)).scaled(random_complex(g64));
    for (const auto& k : {k_real(4.0), SectorWavenumber::polar(9, 0.3), SectorWavenumber::polar(17, -0.6)}) {
      CHECK(rel(I2_sector(k, f), I1_sector(k, f.mirrored())) < 1e-10);
    }
  }
}

TEST_CASE("symmetric sources give I1 = I2 on the real axis") {
  const SpatialGrid g(401);
  for (const auto& f : {make_bump(g, {}), make_bump(g, {2.0, 0.0, 1.4, 1}), make_indicator(g, {-0.5, 0.5})}) {
    for (double k : {1.0, 8.0, 31.0}) CHECK(rel(I1_sector(k_real(k), f), I2_sector(k_real(k), f)) < 1e-10);
  }
}

TEST_CASE("one-sided kernels agree with the exact ones for one-sided sources") {
  const SpatialGrid g(401);
  SectorOptions one;
  one.form = KernelForm::one_sided;
  const auto right = make_bump(g, {1.0, 0.5, 0.8, 2});
  const auto left = right.mirrored();
  for (const auto& k : {k_real(6.0), SectorWavenumber::polar(10, 0.4)}) {
    CHECK(rel(I1_sector(k, right, one), I1_sector(k, right)) < 1e-10);
    CHECK(rel(I2_sector(k, left, one), I2_sector(k, left)) < 1e-10);
  }
}

TEST_CASE("functional samples store I = I1 + I2 and are positive on the real axis") {
  auto g64 = rng(34);
  const SpatialGrid g(401);
  for (int t = 0; t < 6; ++t) {
    const auto f = make_bump(g, random_bump(g64)).scaled(random_complex(g64));
    const auto s = sample_functionals(k_real(uniform(g64, 0.5, 40)), f);
    CHECK(s.I == s.I1 + s.I2);
    CHECK(s.I1.real() >= 0.0);
    CHECK(s.I2.real() >= 0.0);
    CHECK(std::abs(s.I1.imag()) <= 1e-9 * std::abs(s.I1));
    CHECK(std::abs(s.I2.imag()) <= 1e-9 * std::abs(s.I2));
    CHECK(s.refinement_change < 1e-10);
  }
}

TEST_CASE("Re I is nondecreasing along the real axis") {
  const auto f = make_bump(SpatialGrid(401), {1.0, 0.2, 0.6, 1});
  double prev = 0.0;
  for (double k = 0.25; k <= 40.0; k += 0.25) {
    const double v = (I1_sector(k_real(k), f) + I2_sector(k_real(k), f)).real();
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("lemma21_ratio on the real axis is the Parseval-bounded quantity") {
  auto g64 = rng(35);
  const SpatialGrid g(401);
  for (int t = 0; t < 6; ++t) {
    const auto f = make_bump(g, random_bump(g64));
    for (double k : {0.5, 2.0, 10.0, 45.0}) {
      const cplx Ik = I1_sector(k_real(k), f) + I2_sector(k_real(k), f);
      const double r = lemma21_ratio(k_real(k), f);
      CHECK(r == doctest::Approx(std::abs(Ik) / (k * l2_norm_sq(f))).epsilon(1e-12));
      CHECK(r <= 2.0);
    }
  }
}

TEST_CASE("lemma21_ratio is invariant under real scaling") {
  const auto f = make_bump(SpatialGrid(401), {1.0, -0.1, 0.8, 2});
  for (double a : {-3.0, 0.01, 7.5})
    for (const auto& k : {k_real(3.0), SectorWavenumber::polar(20, 0.5)})
      CHECK(std::abs(lemma21_ratio(k, f.scaled(a)) / lemma21_ratio(k, f) - 1.0) < 1e-12);
}

TEST_CASE("sector sweep max stays bounded as the radius doubles") {
  const auto f = make_bump(SpatialGrid(401), {});
  std::vector<double> radii;
  for (double r = 1.0; r <= 50.0; r += 1.0) radii.push_back(r);
  std::vector<double> angles;
  for (int j = 0; j < 9; ++j) angles.push_back(-pi / 4 + 0.01 + j * (pi / 2 - 0.02) / 8);
  const auto rows = sector_sweep(f, radii, angles);
  CHECK(rows.size() == radii.size() * angles.size());
  double max25 = 0.0, max50 = 0.0;
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.ratio));
    if (std::abs(r.k) <= 25.0 + 1e-9) max25 = std::max(max25, r.ratio);
    max50 = std::max(max50, r.ratio);
  }
  CHECK(max50 >= max25);
  CHECK(max50 < 1.1 * max25);
  const double out_of_sector[] = {pi / 3};
  CHECK_THROWS_AS(sector_sweep(f, radii, out_of_sector), DomainError);
}

TEST_CASE("mu_lower examples") {
  CHECK(mu_lower(1.0, 1.0) == 0.5);
  CHECK(std::abs(mu_lower(2.0, 1.0) - 1.0 / (pi * std::sqrt(15.0))) < 1e-12);
  CHECK(std::abs(mu_lower(2.0, 1.0) - 0.082180) < 1e-4);
  CHECK(mu_lower(std::pow(2.0, 0.25) * 3.0, 3.0) == doctest::Approx(1.0 / pi));
  CHECK_THROWS_AS(mu_lower(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(mu_lower(1.0, -1.0), DomainError);
}

TEST_CASE("mu_lower is nonincreasing, in (0, 1/2], and 1/2 on the first branch") {
  for (double K : {0.5, 1.0, 8.0, 100.0}) {
    double prev = 0.5;
    for (int i = 1; i <= 1000; ++i) {
      const double k = 5.0 * K * i / 1000.0;
      const double mu = mu_lower(k, K);
      CHECK(mu > 0.0);
      CHECK(mu <= 0.5);
      CHECK(mu <= prev);
      if (k < std::pow(2.0, 0.25) * K) CHECK(mu == 0.5);
      prev = mu;
    }
  }
}

TEST_CASE("continuation_check examples") {
  const SpatialGrid g(401);
  const std::vector<double> ks{9.0, 12.0, 16.0};
  const auto zero = continuation_check(SourceFunction::zero(g, {-0.5, 0.5}), 8.0, ks, 0.5, 1.0);
  for (double r : zero.ratios) CHECK(r == 0.0);
  CHECK(zero.max_ratio == 0.0);

  const auto f = make_bump(g, {});
  const auto d = boundary_data(f, FrequencyGrid::with_density(0.0, 8.0, 64));
  std::vector<double> dens(d.freq().size());
  for (std::size_t j = 0; j < dens.size(); ++j) dens[j] = std::norm(d.d_plus()[j]) + std::norm(d.d_minus()[j]);
  const double eps_sq = d.freq().integrate(dens, 0.0, 8.0);
  const double M_sq = std::pow(std::max(h1_norm_sq(f).value, 1.0), 2);

  const std::vector<double> inside{1.0, 4.0, 8.0};
  const auto on_data = continuation_check(f, 8.0, inside, std::sqrt(eps_sq), M_sq);
  for (std::size_t i = 0; i < inside.size(); ++i) {
    CHECK(on_data.mu[i] == 1.0);
    CHECK(on_data.ratios[i] <= 1.0);
  }

  const auto rep = continuation_check(f, 8.0, ks, std::sqrt(eps_sq), M_sq);
  SectorOptions fine;
  fine.nodes = 128;
  const auto ref = continuation_check(f, 8.0, ks, std::sqrt(eps_sq), M_sq, fine);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(std::isfinite(rep.ratios[i]));
    CHECK(rep.ratios[i] > 0.0);
    CHECK(std::abs(rep.ratios[i] / ref.ratios[i] - 1.0) < 1e-6);
  }
  CHECK(rep.max_ratio == *std::max_element(rep.ratios.begin(), rep.ratios.end()));

  CHECK_THROWS_AS(continuation_check(f, 8.0, ks, 1.0, M_sq), DomainError);
  CHECK_THROWS_AS(continuation_check(f, 8.0, ks, 0.0, M_sq), DomainError);
}

TEST_CASE("lemma23_constant tends to 2/pi") {
  const auto f = make_bump(SpatialGrid(401), {});
  const double r200 = lemma23_constant(f, 200.0);
  const double r100 = lemma23_constant(f, 100.0);
  CHECK(std::abs(r200 / (2.0 / pi) - 1.0) < 0.01);
  CHECK(r100 >= r200);
  CHECK(r200 >= 2.0 / pi * (1.0 - 1e-10));
  for (double a : {0.3, -2.0, 11.0}) CHECK(std::abs(lemma23_constant(f.scaled(a), 100.0) / r100 - 1.0) < 1e-12);
}

TEST_CASE("lemma24_check examples") {
  const SpatialGrid g(401);
  const std::vector<double> ws{0.5, 1.0, 4.0};
  const auto zero = lemma24_check(SourceFunction::zero(g, {-0.5, 0.5}), ws);
  for (const auto& s : zero.samples) {
    CHECK(s.indeterminate_minus);
    CHECK(s.indeterminate_plus);
    CHECK(std::isnan(s.ratio_minus));
  }

  const auto box = make_indicator(g, {-0.5, 0.0});
  const std::vector<double> one{1.0};
  const auto rep = lemma24_check(box, one);
  const auto& s = rep.samples[0];
  CHECK(std::abs(s.denominator_minus - std::pow((1.0 - std::exp(-1.0)) / 2.0, 2)) < 1e-12);
  CHECK(std::abs(s.denominator_minus - 0.099913) < 1e-4);
  // d- = (i/2) e^{i} (e^{i/2} - 1) / i for the indicator of (-1/2, 0).
  const double closed = std::norm(0.5 * std::exp(I) * (std::exp(0.5 * I) - 1.0));
  CHECK(std::abs(s.numerator_minus - closed) < 1e-12);
  CHECK(std::isfinite(s.ratio_minus));
  CHECK(s.indeterminate_plus);
  CHECK(rep.bounded);
}

TEST_CASE("lemma24 ratios are stable under refinement") {
  const std::vector<double> ws{0.5, 2.0, 6.0};
  const BumpParams p{1.0, 0.05, 1.1, 2};
  const auto a = lemma24_check(make_bump(SpatialGrid(401), p), ws);
  const auto b = lemma24_check(make_bump(SpatialGrid(801), p), ws);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK(std::abs(a.samples[i].ratio_minus / b.samples[i].ratio_minus - 1.0) < 1e-8);
    CHECK(std::abs(a.samples[i].ratio_plus / b.samples[i].ratio_plus - 1.0) < 1e-8);
  }
  CHECK(std::isfinite(a.fitted_C));
}

}
