#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "isp1d/forward.hpp"
#include "isp1d/functionals.hpp"
#include "isp1d/io.hpp"
#include "isp1d/reconstruction.hpp"
#include "isp1d/stability.hpp"
#include "json.hpp"

namespace isp1d::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::simulate, "simulate"},
    {Command::reconstruct, "reconstruct"},
    {Command::verify, "verify"},
    {Command::check_lemmas, "check-lemmas"},
    {Command::sweep, "sweep"},
};

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::size_t panels_for(double per_unit, double width) {
  const auto nodes = static_cast<std::size_t>(std::ceil(per_unit * width - 1e-9));
  return std::max<std::size_t>(1, (nodes + 3) / 4);
}

std::size_t resolved_m(const RunConfig& c) {
  return c.m.value_or(4 * panels_for(c.nodes_per_unit, c.resolved_omega_max()));
}

std::map<std::string, double> parse_params(const std::string& text, const std::string& spec) {
  std::map<std::string, double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--source: expected key=value in '" + spec + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(val.c_str(), &end);
    if (val.empty() || *end != '\0' || !std::isfinite(v))
      throw ConfigError("--source: bad value for '" + key + "' in '" + spec + "'");
    out[key] = v;
  }
  return out;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (*end != '\0' || !std::isfinite(v))
      throw ConfigError(std::string(flag) + ": could not convert '" + item + "'");
    out.push_back(v);
  }
  return out;
}

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

void reject_leftovers(const std::map<std::string, double>& params, const std::string& spec,
                      const char* valid) {
  if (!params.empty())
    throw ConfigError("--source: unknown parameter '" + params.begin()->first + "' in '" + spec +
                      "' (valid: " + valid + ")");
}

fs::path data_path(const RunConfig& c) { return c.data.value_or(c.out / "data" / "boundary.csv"); }

fs::path truth_path(const RunConfig& c) { return data_path(c).parent_path() / "source.csv"; }

bool have_file(const fs::path& csv) { return fs::exists(csv) && fs::exists(io::sidecar_path(csv)); }

/// The source the command is about: --source when given, else the truth file written by
/// simulate next to the data, else the default generator.
SourceFunction resolve_source(const RunConfig& c) {
  if (c.source_given) return make_source(c.source, c.n);
  if (have_file(truth_path(c))) return io::read_source(truth_path(c));
  return make_source(c.source, c.n);
}

std::string rel(const RunConfig& c, const fs::path& p) { return p.lexically_relative(c.out).generic_string(); }

json config_json(const RunConfig& c) {
  json j;
  j["source"] = c.source;
  j["K"] = c.K;
  j["n"] = c.n;
  j["seed"] = c.seed;
  switch (c.command) {
    case Command::simulate:
      j["omega_max"] = c.resolved_omega_max();
      j["m"] = resolved_m(c);
      j["sigma"] = c.sigma;
      break;
    case Command::reconstruct:
      j["method"] = c.method;
      j["alpha"] = c.method == "tikhonov" ? c.alpha : 0.0;
      if (c.alpha_min) j["alpha_min"] = *c.alpha_min;
      if (c.alpha_max) j["alpha_max"] = *c.alpha_max;
      break;
    case Command::verify:
    case Command::check_lemmas:
      j["sigma"] = c.sigma;
      j["nodes_per_unit"] = c.nodes_per_unit;
      break;
    case Command::sweep:
      j["K_list"] = c.K_list;
      j["sigma_list"] = c.sigma_list;
      j["alpha"] = c.alpha;
      j["nodes_per_unit"] = c.nodes_per_unit;
      break;
  }
  if (c.data) j["data"] = c.data->generic_string();
  return j;
}

void update_manifest(const RunConfig& c, const std::vector<std::string>& files) {
  const fs::path path = c.out / "run.json";
  json manifest = json::object();
  if (fs::exists(path)) {
    std::ifstream in(path);
    manifest = json::parse(in, nullptr, false);
    if (!manifest.is_object()) manifest = json::object();
  }
  manifest["schema"] = io::kSchemaVersion;
  json entry;
  entry["config"] = config_json(c);
  entry["files"] = files;
  manifest[std::string(to_string(c.command))] = std::move(entry);
  io::write_file_atomic(path, manifest.dump(2) + "\n");
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericalError(std::string("non-finite ") + what);
}

StabilityOptions stability_options(const RunConfig& c) {
  StabilityOptions o;
  o.nodes_per_unit = c.nodes_per_unit;
  return o;
}

void cmd_simulate(const RunConfig& c, std::ostream& log) {
  const auto f = make_source(c.source, c.n);
  const FrequencyGrid freq(c.resolved_omega_max(), resolved_m(c));
  const auto data = add_noise(boundary_data(f, freq), c.sigma, c.seed);
  require_finite(data.max_abs(), "boundary data");
  const fs::path data_csv = c.out / "data" / "boundary.csv";
  const fs::path source_csv = c.out / "data" / "source.csv";
  io::write_boundary_data(data_csv, data);
  io::write_source(source_csv, f);
  log << "simulate: " << freq.size() << " frequencies on (0, " << io::format_double(freq.omega_max())
      << "], max|d| = " << io::format_double(data.max_abs()) << "\n";
  update_manifest(c, {rel(c, data_csv), rel(c, io::sidecar_path(data_csv)), rel(c, source_csv),
                      rel(c, io::sidecar_path(source_csv))});
}

void cmd_reconstruct(const RunConfig& c, std::ostream& log) {
  const auto data = io::read_boundary_data(data_path(c));
  if (c.K > data.freq().omega_max() * (1.0 + 1e-12))
    throw ConfigError("--K exceeds the data bandwidth " + io::format_double(data.freq().omega_max()));
  std::optional<SourceFunction> truth;
  if (c.source_given) {
    truth = make_source(c.source, c.n);
  } else if (have_file(truth_path(c))) {
    truth = io::read_source(truth_path(c));
  }
  const SpatialGrid grid = truth ? truth->grid() : SpatialGrid(c.n);
  ReconstructOptions opts;
  if (truth) opts.truth = &*truth;

  std::vector<std::string> files;
  std::optional<ReconstructionResult> result;
  if (c.method == "bandlimited") {
    result = bandlimited_reconstruct(spectrum_from_data(data), c.K, grid, opts);
  } else if (c.alpha_min) {
    if (!truth) throw ConfigError("--alpha-min/--alpha-max need a truth source to rank alphas");
    std::string table = "alpha,l2_error_sq\n";
    for (double a = *c.alpha_min; a <= *c.alpha_max * (1.0 + 1e-9); a *= 10.0) {
      auto r = tikhonov_reconstruct(data, c.K, a, grid, opts);
      table += io::format_double(a) + "," + io::format_double(*r.l2_error_sq) + "\n";
      if (!result || *r.l2_error_sq < *result->l2_error_sq) result = std::move(r);
    }
    const fs::path sweep_csv = c.out / "reports" / "alpha_sweep.csv";
    io::write_file_atomic(sweep_csv, table);
    files.push_back(rel(c, sweep_csv));
  } else {
    result = tikhonov_reconstruct(data, c.K, c.alpha, grid, opts);
  }
  for (const cplx v : result->estimate.values()) require_finite(std::abs(v), "reconstruction");

  const fs::path out_csv = c.out / "recon" / (c.method + ".csv");
  io::write_reconstruction(out_csv, *result);
  files.push_back(rel(c, out_csv));
  files.push_back(rel(c, io::sidecar_path(out_csv)));
  log << "reconstruct: " << c.method << " K = " << io::format_double(c.K);
  if (result->method == Method::tikhonov) log << " alpha = " << io::format_double(result->alpha);
  if (result->l2_error_sq) log << " l2_error_sq = " << io::format_double(*result->l2_error_sq);
  log << "\n";
  update_manifest(c, files);
}

void cmd_verify(const RunConfig& c, std::ostream& log) {
  const auto f = resolve_source(c);
  StabilityReport report;
  if (have_file(data_path(c))) {
    const auto data = io::read_boundary_data(data_path(c));
    if (c.K > data.freq().omega_max() * (1.0 + 1e-12))
      throw ConfigError("--K exceeds the data bandwidth " + io::format_double(data.freq().omega_max()));
    if (!(data.freq().omega_min() == 0.0)) throw ConfigError("--data must start at omega = 0");
    report = stability_report(f, data, c.K, stability_options(c));
  } else if (c.data) {
    throw ConfigError("cannot open " + c.data->string());
  } else {
    report = verify_theorem(f, c.K, c.sigma, c.seed, stability_options(c));
  }
  require_finite(report.fitted_C, "fitted_C");
  require_finite(report.rhs_core, "rhs_core");
  const fs::path out_json = c.out / "reports" / "stability.json";
  io::write_stability_report(out_json, report);
  log << "verify: epsilon_sq = " << io::format_double(report.epsilon_sq)
      << " rhs_core = " << io::format_double(report.rhs_core)
      << " lhs = " << io::format_double(report.lhs)
      << " fitted_C = " << io::format_double(report.fitted_C)
      << (report.vacuous ? " (bound vacuous)" : "") << (report.not_h1 ? " (source not H1)" : "")
      << "\n";
  update_manifest(c, {rel(c, out_json)});
}

void cmd_check_lemmas(const RunConfig& c, std::ostream& log) {
  const auto f = resolve_source(c);
  if (f.is_zero()) throw ConfigError("check-lemmas needs a nonzero source");
  const double K = c.K;
  const double norm0 = l2_norm_sq(f);
  std::map<std::string, std::vector<io::LemmaEntry>> report;

  std::vector<double> radii;
  for (double r = 1.0; r <= 50.0; r += 1.0) radii.push_back(r);
  std::vector<double> angles;
  constexpr int kAngles = 9;
  for (int j = 0; j < kAngles; ++j)
    angles.push_back(-std::numbers::pi / 4 + 0.01 + j * (std::numbers::pi / 2 - 0.02) / (kAngles - 1));
  const auto rows = sector_sweep(f, radii, angles);
  for (const auto& r : rows) {
    const double bound = std::abs(r.k) * norm0 * std::exp(2.0 * std::abs(r.k.imag()));
    report["lemma21"].push_back({std::abs(r.k), std::abs(r.I), bound, r.ratio});
  }
  const fs::path sweep_csv = c.out / "reports" / "sector_sweep.csv";
  io::write_sector_sweep(sweep_csv, rows);

  for (int i = 1; i <= 40; ++i) {
    const double k = K * i / 10.0;
    const double mu = mu_lower(k, K);
    report["lemma22"].push_back({k, mu, 0.5, mu / 0.5});
  }

  const auto data = add_noise(boundary_data(f, data_grid(K, stability_options(c))), c.sigma, c.seed);
  const double eps_sq = epsilon_sq(data, K);
  auto& cont = report["continuation"];
  if (eps_sq > 0.0 && eps_sq < 1.0) {
    const double M_sq = std::pow(std::max(h1_norm_sq(f).value, 1.0), 2);
    const std::vector<double> ks{1.25 * K, 1.5 * K, 2.0 * K};
    const auto cr = continuation_check(f, K, ks, std::sqrt(eps_sq), M_sq);
    for (std::size_t i = 0; i < cr.k.size(); ++i) {
      const double bound = std::pow(eps_sq, cr.mu[i]) * M_sq;
      cont.push_back({cr.k[i], cr.ratios[i] * bound, bound, cr.ratios[i]});
    }
  }

  for (double W : {K, 2 * K, 5 * K, 10 * K, 25 * K}) {
    const double ratio = lemma23_constant(f, W);
    report["lemma23"].push_back({W, norm0, norm0 / ratio, ratio});
  }

  std::vector<double> omegas;
  for (int i = 1; i <= 8; ++i) omegas.push_back(K * i / 4.0);
  const auto l24 = lemma24_check(f, omegas);
  for (const auto& s : l24.samples) {
    report["lemma24_minus"].push_back({s.omega, s.numerator_minus, s.denominator_minus, s.ratio_minus});
    report["lemma24_plus"].push_back({s.omega, s.numerator_plus, s.denominator_plus, s.ratio_plus});
  }

  const double h1 = h1_norm_sq(f).value;
  double C = 0.0;
  for (double k : {K, 2 * K, 4 * K, 8 * K}) {
    const auto tail = tail_integral(f, k, 10.0 * k);
    if (C == 0.0) C = tail.total() * k / h1;
    const double bound = C * h1 / k;
    report["lemma25"].push_back({k, tail.total(), bound, bound > 0.0 ? tail.total() / bound : 0.0});
  }

  for (const auto& [name, entries] : report)
    for (const auto& e : entries)
      if (name != "lemma24_minus" && name != "lemma24_plus") require_finite(e.ratio, name.c_str());

  const fs::path out_json = c.out / "reports" / "lemmas.json";
  io::write_lemma_report(out_json, report);
  double max21 = 0.0;
  for (const auto& e : report["lemma21"]) max21 = std::max(max21, e.ratio);
  log << "check-lemmas: sector max ratio = " << io::format_double(max21)
      << " lemma23 ratio = " << io::format_double(report["lemma23"].back().ratio)
      << " lemma24 fitted C = " << io::format_double(l24.fitted_C) << "\n";
  update_manifest(c, {rel(c, sweep_csv), rel(c, out_json)});
}

void cmd_sweep(const RunConfig& c, std::ostream& log) {
  const auto f = resolve_source(c);
  SweepOptions opts;
  opts.stability = stability_options(c);
  opts.alpha = c.alpha;
  const auto result = sweep(f, c.K_list, c.sigma_list, c.seed, opts);
  for (const auto& r : result.rows) {
    require_finite(r.fitted_C, "fitted_C");
    require_finite(r.recon_error_bl, "recon_error_bl");
    require_finite(r.recon_error_tik, "recon_error_tik");
  }
  const fs::path out_csv = c.out / "reports" / "sweep.csv";
  io::write_sweep(out_csv, result);
  log << "sweep: " << result.rows.size() << " cells\n";
  update_manifest(c, {rel(c, out_csv), rel(c, io::sidecar_path(out_csv))});
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "?";
}

SourceFunction make_source(const std::string& spec, std::size_t n) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "bump" || kind == "indicator" || kind == "zero") {
    const SpatialGrid grid(n);
    auto params = parse_params(rest, spec);
    if (kind == "bump") {
      BumpParams p;
      p.amplitude = take(params, "A", p.amplitude);
      p.center = take(params, "c", p.center);
      p.width = take(params, "w", p.width);
      const double power = take(params, "p", p.power);
      reject_leftovers(params, spec, "A, c, w, p");
      if (power != 1.0 && power != 2.0) throw ConfigError("--source: bump power p must be 1 or 2");
      p.power = static_cast<int>(power);
      return make_bump(grid, p);
    }
    if (kind == "indicator") {
      const double a = take(params, "a", 0.0);
      const double b = take(params, "b", 0.5);
      const double v = take(params, "v", 1.0);
      reject_leftovers(params, spec, "a, b, v");
      return make_indicator(grid, Support{a, b}, v);
    }
    const double a = take(params, "a", -0.5);
    const double b = take(params, "b", 0.5);
    reject_leftovers(params, spec, "a, b");
    return SourceFunction::zero(grid, Support{a, b});
  }
  if (!fs::exists(spec)) throw ConfigError("--source: cannot open " + spec);
  return io::read_source(spec);
}

void validate(const RunConfig& c) {
  if (c.n < 3 || c.n % 2 == 0) throw ConfigError("n must be odd and at least 3");
  if (!(c.K > 0.0) || !std::isfinite(c.K)) throw ConfigError("--K must be positive");
  if (c.command == Command::verify && !(c.K > 1.0)) throw ConfigError("--K must exceed 1 for verify");
  if (c.command == Command::check_lemmas && !(c.K > 1.0))
    throw ConfigError("--K must exceed 1 for check-lemmas");
  if (c.omega_max && !(*c.omega_max >= c.K)) throw ConfigError("--omega-max must be at least --K");
  if (c.m) {
    if (*c.m < 64) throw ConfigError("m must be at least 64");
    if (*c.m % 4 != 0) throw ConfigError("m must be a multiple of 4");
  }
  if (!(c.nodes_per_unit > 0.0)) throw ConfigError("--nodes-per-unit must be positive");
  if (resolved_m(c) < 64) throw ConfigError("m must be at least 64 (raise --m or --nodes-per-unit)");
  if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma)) throw ConfigError("--sigma must be >= 0");
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw ConfigError("--alpha must be positive");
  if (c.method != "bandlimited" && c.method != "tikhonov")
    throw ConfigError("--method must be bandlimited or tikhonov");
  if (c.alpha_min.has_value() != c.alpha_max.has_value())
    throw ConfigError("--alpha-min and --alpha-max go together");
  if (c.alpha_min) {
    if (!(*c.alpha_min > 0.0) || !(*c.alpha_max >= *c.alpha_min))
      throw ConfigError("--alpha-min must be positive and at most --alpha-max");
    if (c.method != "tikhonov") throw ConfigError("--alpha-min/--alpha-max apply to --method tikhonov");
  }
  if (c.command == Command::sweep) {
    if (c.K_list.empty()) throw ConfigError("--K-list must not be empty");
    if (c.sigma_list.empty()) throw ConfigError("--sigma-list must not be empty");
    for (double K : c.K_list)
      if (!(K > 1.0)) throw ConfigError("--K-list values must exceed 1");
    for (double s : c.sigma_list)
      if (!(s >= 0.0)) throw ConfigError("--sigma-list values must be >= 0");
  }
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"Multi-frequency inverse source problem on (-1, 1)", "isp1d"};
  std::string command;
  std::string data;
  std::string out = c.out.string();
  std::vector<std::string> command_names;
  for (const auto& [cmd, name] : kCommands) command_names.emplace_back(name);

  app.add_option("command", command, "simulate | reconstruct | verify | check-lemmas | sweep")
      ->required()
      ->check(CLI::IsMember(command_names));
  auto* source = app.add_option("--source", c.source,
                                "bump[:A=,c=,w=,p=] | indicator[:a=,b=,v=] | zero | source CSV");
  app.add_option("--K", c.K, "Data bandwidth");
  app.add_option("--omega-max", c.omega_max, "Upper frequency of simulated data (default K)");
  app.add_option("--m", c.m, "Frequency node count (default nodes-per-unit * omega-max)");
  app.add_option("--nodes-per-unit", c.nodes_per_unit, "Frequency nodes per unit bandwidth");
  app.add_option("--n", c.n, "Spatial grid size (odd)");
  app.add_option("--sigma", c.sigma, "Relative noise level");
  app.add_option("--seed", c.seed, "Noise seed");
  app.add_option("--alpha", c.alpha, "Tikhonov weight");
  app.add_option("--alpha-min", c.alpha_min, "Lower end of a decade sweep of alpha");
  app.add_option("--alpha-max", c.alpha_max, "Upper end of a decade sweep of alpha");
  app.add_option("--method", c.method, "bandlimited | tikhonov");
  std::string K_list;
  std::string sigma_list;
  auto* K_list_opt = app.add_option("--K-list", K_list, "Comma-separated bandwidths for sweep");
  auto* sigma_list_opt = app.add_option("--sigma-list", sigma_list, "Comma-separated noise levels for sweep");
  auto* data_opt = app.add_option("--data", data, "Boundary-data CSV (default <out>/data/boundary.csv)");
  app.add_option("--out", out, "Output directory");

  auto valid_flags = [&] {
    std::string s;
    for (const auto* opt : app.get_options()) {
      if (opt->get_lnames().empty()) continue;
      if (!s.empty()) s += ", ";
      s += "--" + opt->get_lnames().front();
    }
    return s;
  };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ExtrasError& e) {
    throw ConfigError(std::string(e.what()) + "; valid flags: " + valid_flags());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [cmd, name] : kCommands)
    if (name == command) c.command = cmd;
  if (K_list_opt->count() > 0) c.K_list = parse_list(K_list, "--K-list");
  if (sigma_list_opt->count() > 0) c.sigma_list = parse_list(sigma_list, "--sigma-list");
  c.source_given = source->count() > 0;
  if (data_opt->count() > 0) c.data = data;
  c.out = out;
  validate(c);
  return c;
}

void run(const RunConfig& config, std::ostream& log) {
  validate(config);
  switch (config.command) {
    case Command::simulate: cmd_simulate(config, log); break;
    case Command::reconstruct: cmd_reconstruct(config, log); break;
    case Command::verify: cmd_verify(config, log); break;
    case Command::check_lemmas: cmd_check_lemmas(config, log); break;
    case Command::sweep: cmd_sweep(config, log); break;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& log, std::ostream& err) {
  try {
    run(parse_config(args), log);
    return kExitOk;
  } catch (const HelpRequested& h) {
    log << h.what();
    return kExitOk;
  } catch (const NumericalError& e) {
    err << "isp1d: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "isp1d: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "isp1d: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "isp1d: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "isp1d: internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace isp1d::cli
