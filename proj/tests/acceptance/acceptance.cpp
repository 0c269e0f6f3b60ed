// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "isp1d/forward.hpp"
#include "isp1d/functionals.hpp"
#include "isp1d/io.hpp"
#include "isp1d/reconstruction.hpp"
#include "isp1d/stability.hpp"

using namespace isp1d;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

struct Verdict {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

cplx box_transform(double w) { return (1.0 - std::exp(-I * w / 2.0)) / (I * w); }

double bump_transform(double w) { return 4 * pi * pi * std::sin(w / 2) / (w * (4 * pi * pi - w * w)); }

SourceFunction c1_bump(std::size_t n = 401) { return make_bump(SpatialGrid(n), {}); }

Verdict forward_oracle() {
  const SpatialGrid g(401);
  const FrequencyGrid fg(40.0, 32);
  const auto box = boundary_data(make_indicator(g, {0.0, 0.5}), fg);
  const auto bump = boundary_data(make_bump(g, {}), fg);
  double worst = 0.0;
  for (std::size_t j = 0; j < fg.size(); ++j) {
    const double w = fg.nodes()[j];
    const cplx pre = 0.5 * I * std::exp(I * w);
    worst = std::max({worst, rel(box.d_plus()[j], pre * box_transform(w)),
                      rel(box.d_minus()[j], pre * box_transform(-w)),
                      rel(bump.d_plus()[j], pre * bump_transform(w)),
                      rel(bump.d_minus()[j], pre * bump_transform(-w))});
  }
  return {worst < 1e-9, fmt("max relative error %.2e over 32 frequencies", worst)};
}

Verdict residuals() {
  bool ok = true;
  std::string detail;
  for (double w : {1.0, 5.0, 20.0}) {
    const auto coarse = residual_check(c1_bump(401), w);
    const auto fine = residual_check(c1_bump(801), w);
    const double factor = coarse.pde / fine.pde;
    ok = ok && std::abs(factor - 4.0) <= 0.8 && fine.bc < 1e-4;
    detail += fmt("w=%g: pde ratio %.3f, bc %.1e; ", w, factor, fine.bc);
  }
  return {ok, detail};
}

Verdict plancherel_constant() {
  const double r = lemma23_constant(c1_bump(), 200.0);
  const double err = std::abs(r / (2.0 / pi) - 1.0);
  return {err < 0.01, fmt("ratio %.10f vs 2/pi, relative gap %.2e", r, err)};
}

Verdict tail_law() {
  const auto f = c1_bump();
  const double h1 = h1_norm_sq(f).value;
  std::vector<double> lk, lt;
  double C = 0.0;
  bool bound = true;
  for (double k : {10.0, 20.0, 40.0, 80.0}) {
    const double t = tail_integral(f, k, 10.0 * k).total();
    if (C == 0.0) C = t * k / h1;
    bound = bound && t <= C * h1 / k * (1 + 1e-12);
    lk.push_back(std::log(k));
    lt.push_back(std::log(t));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < 4; ++i) mx += lk[i] / 4, my += lt[i] / 4;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < 4; ++i) sxy += (lk[i] - mx) * (lt[i] - my), sxx += (lk[i] - mx) * (lk[i] - mx);
  const double slope = sxy / sxx;
  return {slope <= -0.9 && bound, fmt("log-log slope %.3f, C = %.3e", slope, C) + (bound ? ", bound holds" : ", bound violated")};
}

Verdict analyticity() {
  const auto f = c1_bump();
  double path_gap = 0.0;
  for (const auto& k : {SectorWavenumber::polar(5, pi / 8), SectorWavenumber::polar(20, -pi / 8)}) {
    const cplx straight = I1_sector(k, f) + I2_sector(k, f);
    const cplx bent[] = {0.0, cplx(k.modulus(), 0.0), k.value()};
    path_gap = std::max(path_gap, rel(straight, functional_along_path(f, bent, Endpoint::both)));
  }
  double axis_gap = 0.0;
  for (double k : {5.0, 20.0}) {
    const auto fg = FrequencyGrid::with_density(0.0, k, 64);
    const auto d = boundary_data(f, fg);
    std::vector<double> dens(fg.size());
    for (std::size_t j = 0; j < fg.size(); ++j) dens[j] = std::norm(d.d_plus()[j]) + std::norm(d.d_minus()[j]);
    const SectorWavenumber kr(k, 0.0);
    axis_gap = std::max(axis_gap, rel(I1_sector(kr, f) + I2_sector(kr, f), fg.integrate(dens, 0.0, k)));
  }
  return {path_gap < 1e-8 && axis_gap < 1e-8, fmt("path gap %.2e, real-axis gap %.2e", path_gap, axis_gap)};
}

Verdict sector_bound() {
  const auto f = c1_bump();
  std::vector<double> radii;
  for (double r = 1.0; r <= 50.0; r += 1.0) radii.push_back(r);
  std::vector<double> angles;
  for (int j = 0; j < 9; ++j) angles.push_back(-pi / 4 + 0.01 + j * (pi / 2 - 0.02) / 8);
  double max25 = 0.0, max50 = 0.0;
  for (const auto& row : sector_sweep(f, radii, angles)) {
    if (std::abs(row.k) <= 25.0 + 1e-9) max25 = std::max(max25, row.ratio);
    max50 = std::max(max50, row.ratio);
  }
  const double growth = max50 / max25 - 1.0;
  return {std::isfinite(max50) && growth < 0.10, fmt("max ratio %.6f (r<=25) -> %.6f (r<=50), growth %.2e", max25, max50, growth)};
}

Verdict harmonic_bound() {
  const bool a = mu_lower(1.0, 1.0) == 0.5;
  const double b = std::abs(mu_lower(2.0, 1.0) - 1.0 / (pi * std::sqrt(15.0)));
  bool mono = true;
  double prev = mu_lower(1e-3, 1.0);
  for (int i = 1; i <= 1000; ++i) {
    const double mu = mu_lower(4.0 * i / 1000.0, 1.0);
    mono = mono && mu <= prev;
    prev = mu;
  }
  return {a && b < 1e-12 && mono, fmt("mu(1,1) = %g, |mu(2,1) - 15^-1/2/pi| = %.1e", mu_lower(1.0, 1.0), b) +
                                      (mono ? ", monotone" : ", NOT monotone")};
}

Verdict split_logic() {
  const bool a = choose_k(8.0, 16.0) == 8.0;
  const bool b = choose_k(8.0, 10000.0) == 40.0;
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const double K = std::exp(std::log(1.001) + u(g) * (std::log(1000.0) - std::log(1.001)));
    const double E = std::exp(std::log(1e-3) + u(g) * (std::log(1e6) - std::log(1e-3)));
    const bool branch = std::pow(2.0, 0.25) * std::pow(K, 1.0 / 3.0) < std::pow(E, 0.25);
    const double expect = branch ? std::pow(K, 2.0 / 3.0) * std::pow(E, 0.25) : K;
    if (std::abs(choose_k(K, E) - expect) > 1e-13 * expect) ++mismatches;
  }
  return {a && b && mismatches == 0, fmt("choose_k(8,16) = %g, choose_k(8,1e4) = %g, %g predicate mismatches",
                                         choose_k(8.0, 16.0), choose_k(8.0, 10000.0), mismatches)};
}

Verdict increasing_stability() {
  const auto f = c1_bump();
  std::string detail = "bandlimited error:";
  bool ok = true;
  double prev = 0.0;
  for (double K : {4.0, 8.0, 16.0, 32.0}) {
    const auto d = boundary_data(f, FrequencyGrid::with_density(0.0, K, 512));
    ReconstructOptions o;
    o.truth = &f;
    const double err = *bandlimited_reconstruct(spectrum_from_data(d), K, f.grid(), o).l2_error_sq;
    if (prev > 0.0) ok = ok && err <= 0.99 * prev;
    detail += fmt(" %.3e", err);
    prev = err;
  }
  bool rhs_ok = true;
  for (double eps_sq : {1e-4, 0.1, 0.5}) {
    double last = 1e300;
    for (double K : {4.0, 8.0, 16.0, 32.0}) {
      const double v = theorem_rhs(eps_sq, K, 28.0).value;
      rhs_ok = rhs_ok && v < last;
      last = v;
    }
  }
  return {ok && rhs_ok, detail + (rhs_ok ? "; rhs strictly decreasing" : "; rhs NOT decreasing")};
}

double suite_C(std::size_t n, double per_unit, bool* holds) {
  const BumpParams family[] = {
      {1.0, 0.0, 1.0, 2}, {0.8, 0.2, 0.8, 2}, {1.5, -0.3, 0.6, 2}, {1.0, 0.1, 1.2, 2}, {1.0, -0.1, 0.9, 1},
  };
  StabilityOptions o;
  o.nodes_per_unit = per_unit;
  std::vector<StabilityReport> reports;
  for (const auto& p : family)
    for (double K : {4.0, 8.0, 16.0}) reports.push_back(verify_theorem(make_bump(SpatialGrid(n), p), K, 0.0, 0, o));
  double C = 0.0;
  for (const auto& r : reports) C = std::max(C, r.fitted_C);
  *holds = true;
  for (const auto& r : reports) *holds = *holds && r.lhs <= C * r.rhs_core * (1 + 1e-12) && std::isfinite(r.fitted_C);
  return C;
}

Verdict theorem_inequality() {
  bool h1 = false, h2 = false;
  const double C1 = suite_C(401, 512, &h1);
  const double C2 = suite_C(801, 1024, &h2);
  const double change = std::abs(C2 / C1 - 1.0);
  return {h1 && h2 && change < 0.01, fmt("fitted_C_max %.6f, refined %.6f, change %.2e", C1, C2, change)};
}

Verdict energy_ledger() {
  const auto f = c1_bump();
  const auto d = boundary_data(f, FrequencyGrid::with_density(0.0, 20.0, 512));
  const double total = epsilon_sq(d, 20.0) + tail_integral(f, 20.0, 200.0).total();
  const double target = pi / 2 * l2_norm_sq(f);
  const double err = std::abs(total / target - 1.0);
  return {err < 0.01, fmt("band + tail = %.10f vs (pi/2)||f||^2 = %.10f, gap %.1e", total, target, err)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict cli_determinism() {
  const auto base = fs::temp_directory_path() / "isp1d_acceptance";
  fs::remove_all(base);
  std::ostringstream log, err;
  for (const char* run : {"a", "b"}) {
    const std::string out = (base / run).string();
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"simulate", "--source", "bump:c=0,w=1,p=2,A=1", "--K", "8", "--sigma", "0.01", "--seed", "11", "--out", out},
             {"reconstruct", "--method", "bandlimited", "--K", "8", "--out", out},
             {"reconstruct", "--method", "tikhonov", "--alpha", "1e-3", "--K", "8", "--out", out},
             {"verify", "--K", "8", "--out", out}}) {
      if (cli::run_cli(args, log, err) != 0) return {false, args[0] + " failed: " + err.str()};
    }
  }
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(base / "a")) {
    if (!e.is_regular_file()) continue;
    const auto relp = fs::relative(e.path(), base / "a");
    if (slurp(e.path()) != slurp(base / "b" / relp)) return {false, "differs: " + relp.string()};
    ++files;
  }
  // Read every file back and write it again: the bytes must not change.
  const auto a = base / "a";
  const auto again = base / "again";
  io::write_boundary_data(again / "boundary.csv", io::read_boundary_data(a / "data" / "boundary.csv"));
  io::write_source(again / "source.csv", io::read_source(a / "data" / "source.csv"));
  io::write_reconstruction(again / "bandlimited.csv", io::read_reconstruction(a / "recon" / "bandlimited.csv"));
  io::write_reconstruction(again / "tikhonov.csv", io::read_reconstruction(a / "recon" / "tikhonov.csv"));
  io::write_stability_report(again / "stability.json", io::read_stability_report(a / "reports" / "stability.json"));
  const std::pair<const char*, const char*> pairs[] = {
      {"data/boundary.csv", "boundary.csv"},       {"data/boundary.json", "boundary.json"},
      {"data/source.csv", "source.csv"},           {"data/source.json", "source.json"},
      {"recon/bandlimited.csv", "bandlimited.csv"}, {"recon/bandlimited.json", "bandlimited.json"},
      {"recon/tikhonov.csv", "tikhonov.csv"},       {"recon/tikhonov.json", "tikhonov.json"},
      {"reports/stability.json", "stability.json"},
  };
  for (const auto& [orig, copy] : pairs)
    if (slurp(a / orig) != slurp(again / copy)) return {false, std::string("round trip changed ") + orig};
  const auto manifest = nlohmann::json::parse(slurp(a / "run.json"));
  for (const char* cmd : {"simulate", "reconstruct", "verify"})
    if (manifest.value("schema", 0) != io::kSchemaVersion || !manifest.contains(cmd))
      return {false, std::string("run.json lacks ") + cmd};
  const auto report = io::read_stability_report(a / "reports" / "stability.json");
  if (!std::isfinite(report.fitted_C)) return {false, "fitted_C not finite"};
  return {true, fmt("%g files identical across runs, %g round trips lossless, fitted_C %.4f", files, 9, report.fitted_C)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "forward oracle", 1, forward_oracle},
      {2, "PDE/BC residuals", 5, residuals},
      {3, "Plancherel constant", 5, plancherel_constant},
      {4, "tail decay law", 10, tail_law},
      {5, "analyticity of I(k)", 10, analyticity},
      {6, "sector boundedness", 30, sector_bound},
      {7, "harmonic-measure bound values", 1, harmonic_bound},
      {8, "frequency split branch logic", 1, split_logic},
      {9, "increasing stability", 30, increasing_stability},
      {10, "stability inequality", 120, theorem_inequality},
      {11, "energy ledger", 5, energy_ledger},
      {12, "CLI determinism and schemas", 30, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failed;
    std::printf("AC%-2d %s  %-32s %7.2f s (< %g s)  %s%s\n", c.id, pass ? "PASS" : "FAIL", c.name, secs,
                c.budget_s, v.detail.c_str(), in_time ? "" : " [over time budget]");
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
