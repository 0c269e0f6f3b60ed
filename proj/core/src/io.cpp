#include "isp1d/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "isp1d/errors.hpp"
#include "json.hpp"

namespace isp1d::io {

namespace {

using json = nlohmann::json;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ArgumentError("cannot open " + path.string());
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ArgumentError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const json& field(const json& j, const char* name, const fs::path& where) {
  if (!j.is_object() || !j.contains(name))
    throw ArgumentError(where.string() + ": missing field '" + name + "'");
  return j.at(name);
}

double number(const json& j, const char* name, const fs::path& where) {
  const auto& v = field(j, name, where);
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw ArgumentError(where.string() + ": field '" + name + "' must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_number(const json& j, const char* name, const fs::path& where) {
  const auto& v = field(j, name, where);
  if (!v.is_number_unsigned())
    throw ArgumentError(where.string() + ": field '" + name + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

void check_schema(const json& j, const fs::path& where) {
  const auto& v = field(j, "schema", where);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw ArgumentError(where.string() + ": field 'schema' must be " + std::to_string(kSchemaVersion));
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_csv(const fs::path& path, const std::vector<std::string>& expected) {
  std::istringstream in(read_text(path));
  std::string line;
  Table t;
  if (!std::getline(in, line)) throw ArgumentError(path.string() + ": empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string cell;
  std::istringstream hs(line);
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  for (std::size_t c = 0; c < expected.size(); ++c) {
    if (c >= t.header.size() || t.header[c] != expected[c])
      throw ArgumentError(path.string() + ": expected column '" + expected[c] + "'");
  }
  if (t.header.size() != expected.size())
    throw ArgumentError(path.string() + ": unexpected column '" + t.header.back() + "'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0' || errno == ERANGE)
        throw ArgumentError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell +
                            "' in column '" + (row.size() < expected.size() ? expected[row.size()] : "?") + "'");
      row.push_back(v);
    }
    if (row.size() != expected.size())
      throw ArgumentError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(expected.size()) + " columns");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string csv_line(std::initializer_list<double> values) {
  std::string s;
  bool first = true;
  for (double v : values) {
    if (!first) s += ',';
    s += format_double(v);
    first = false;
  }
  s += '\n';
  return s;
}

std::string source_csv(const SourceFunction& f) {
  std::string out = "y,re,im\n";
  for (std::size_t i = 0; i < f.grid().size(); ++i)
    out += csv_line({f.grid().node(i), f.values()[i].real(), f.values()[i].imag()});
  return out;
}

json source_meta(const SourceFunction& f) {
  json j;
  j["schema"] = kSchemaVersion;
  j["n"] = f.grid().size();
  j["a"] = f.support().a;
  j["b"] = f.support().b;
  const auto span = f.span();
  if (span.first <= span.last) {
    j["first"] = span.first;
    j["last"] = span.last;
  }
  return j;
}

SourceFunction source_from(const fs::path& csv, const json& meta, const fs::path& meta_path) {
  check_schema(meta, meta_path);
  const auto n = static_cast<std::size_t>(unsigned_number(meta, "n", meta_path));
  const double a = number(meta, "a", meta_path);
  const double b = number(meta, "b", meta_path);
  const auto table = read_csv(csv, {"y", "re", "im"});
  if (table.rows.size() != n)
    throw ArgumentError(meta_path.string() + ": field 'n' does not match the CSV row count");
  const SpatialGrid grid(n);
  std::vector<cplx> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(table.rows[i][0] - grid.node(i)) > 1e-12)
      throw ArgumentError(csv.string() + ": column 'y' is not the uniform grid on [-1, 1]");
    values[i] = {table.rows[i][1], table.rows[i][2]};
  }
  if (a == -1.0 && b == 1.0) return SourceFunction::on_full_interval(grid, std::move(values));
  if (meta.contains("first") && meta.contains("last")) {
    const SourceFunction::NodeSpan span{
        static_cast<std::size_t>(unsigned_number(meta, "first", meta_path)),
        static_cast<std::size_t>(unsigned_number(meta, "last", meta_path))};
    return SourceFunction(grid, std::move(values), Support{a, b}, span);
  }
  return SourceFunction(grid, std::move(values), Support{a, b});
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".json");
  return p;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ArgumentError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw ArgumentError("cannot rename " + tmp.string() + " to " + path.string());
}

void write_source(const fs::path& csv, const SourceFunction& f) {
  write_file_atomic(csv, source_csv(f));
  write_file_atomic(sidecar_path(csv), dump(source_meta(f)));
}

SourceFunction read_source(const fs::path& csv) {
  require_file(csv);
  const auto meta_path = sidecar_path(csv);
  return source_from(csv, read_json(meta_path), meta_path);
}

void write_boundary_data(const fs::path& csv, const BoundaryData& data) {
  std::string out = "omega,dplus_re,dplus_im,dminus_re,dminus_im\n";
  const auto nodes = data.freq().nodes();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const cplx p = data.d_plus()[j];
    const cplx m = data.d_minus()[j];
    out += csv_line({nodes[j], p.real(), p.imag(), m.real(), m.imag()});
  }
  json meta;
  meta["schema"] = kSchemaVersion;
  meta["omega_min"] = data.freq().omega_min();
  meta["omega_max"] = data.freq().omega_max();
  meta["m"] = data.freq().size();
  meta["noise_sigma"] = data.noise_sigma();
  meta["seed"] = data.seed();
  write_file_atomic(csv, out);
  write_file_atomic(sidecar_path(csv), dump(meta));
}

BoundaryData read_boundary_data(const fs::path& csv) {
  require_file(csv);
  const auto meta_path = sidecar_path(csv);
  const json meta = read_json(meta_path);
  check_schema(meta, meta_path);
  const double omega_min = meta.contains("omega_min") ? number(meta, "omega_min", meta_path) : 0.0;
  const double omega_max = number(meta, "omega_max", meta_path);
  const auto m = static_cast<std::size_t>(unsigned_number(meta, "m", meta_path));
  const double sigma = number(meta, "noise_sigma", meta_path);
  const auto seed = unsigned_number(meta, "seed", meta_path);
  const auto table = read_csv(csv, {"omega", "dplus_re", "dplus_im", "dminus_re", "dminus_im"});
  if (table.rows.size() != m)
    throw ArgumentError(meta_path.string() + ": field 'm' does not match the CSV row count");
  FrequencyGrid freq(omega_min, omega_max, m);
  std::vector<cplx> dp(m);
  std::vector<cplx> dm(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& r = table.rows[j];
    if (std::abs(r[0] - freq.nodes()[j]) > 1e-12 * std::max(1.0, omega_max))
      throw ArgumentError(csv.string() + ": column 'omega' does not match the grid in " +
                          meta_path.string());
    dp[j] = {r[1], r[2]};
    dm[j] = {r[3], r[4]};
  }
  return BoundaryData(std::move(freq), std::move(dp), std::move(dm), sigma, seed);
}

void write_reconstruction(const fs::path& csv, const ReconstructionResult& r) {
  json meta = source_meta(r.estimate);
  meta["method"] = std::string(to_string(r.method));
  meta["K"] = r.K_used;
  meta["alpha"] = r.alpha;
  meta["l2_error_sq"] = r.l2_error_sq ? json(*r.l2_error_sq) : json(nullptr);
  write_file_atomic(csv, source_csv(r.estimate));
  write_file_atomic(sidecar_path(csv), dump(meta));
}

ReconstructionResult read_reconstruction(const fs::path& csv) {
  require_file(csv);
  const auto meta_path = sidecar_path(csv);
  const json meta = read_json(meta_path);
  auto estimate = source_from(csv, meta, meta_path);
  const auto& method = field(meta, "method", meta_path);
  if (!method.is_string()) throw ArgumentError(meta_path.string() + ": field 'method' must be a string");
  Method m;
  try {
    m = method_from_string(method.get<std::string>());
  } catch (const ArgumentError&) {
    throw ArgumentError(meta_path.string() + ": field 'method' must be bandlimited or tikhonov");
  }
  const auto& err = field(meta, "l2_error_sq", meta_path);
  std::optional<double> l2;
  if (!err.is_null()) l2 = number(meta, "l2_error_sq", meta_path);
  return ReconstructionResult{std::move(estimate), number(meta, "K", meta_path), m,
                              number(meta, "alpha", meta_path), l2};
}

void write_stability_report(const fs::path& path, const StabilityReport& r) {
  json j;
  j["schema"] = kSchemaVersion;
  j["epsilon_sq"] = r.epsilon_sq;
  j["E"] = finite_or_null(r.E);
  j["M_sq_h1"] = r.M_sq_h1;
  j["M_sq_l2"] = r.M_sq_l2;
  j["K"] = r.K;
  j["k_chosen"] = r.k_chosen;
  j["mu_at_k"] = r.mu_at_k;
  j["rhs_core"] = r.rhs_core;
  j["lhs"] = r.lhs;
  j["fitted_C"] = r.fitted_C;
  j["tail_at_k"] = r.tail_at_k;
  j["tail_remainder"] = r.tail_remainder;
  j["sigma"] = r.sigma;
  j["seed"] = r.seed;
  j["vacuous"] = r.vacuous;
  j["not_h1"] = r.not_h1;
  write_file_atomic(path, dump(j));
}

StabilityReport read_stability_report(const fs::path& path) {
  const json j = read_json(path);
  check_schema(j, path);
  auto flag = [&](const char* name) {
    const auto& v = field(j, name, path);
    if (!v.is_boolean()) throw ArgumentError(path.string() + ": field '" + name + "' must be a boolean");
    return v.get<bool>();
  };
  StabilityReport r;
  r.epsilon_sq = number(j, "epsilon_sq", path);
  r.E = number(j, "E", path);
  r.M_sq_h1 = number(j, "M_sq_h1", path);
  r.M_sq_l2 = number(j, "M_sq_l2", path);
  r.K = number(j, "K", path);
  r.k_chosen = number(j, "k_chosen", path);
  r.mu_at_k = number(j, "mu_at_k", path);
  r.rhs_core = number(j, "rhs_core", path);
  r.lhs = number(j, "lhs", path);
  r.fitted_C = number(j, "fitted_C", path);
  r.tail_at_k = number(j, "tail_at_k", path);
  r.tail_remainder = number(j, "tail_remainder", path);
  r.sigma = number(j, "sigma", path);
  r.seed = unsigned_number(j, "seed", path);
  r.vacuous = flag("vacuous");
  r.not_h1 = flag("not_h1");
  return r;
}

void write_sweep(const fs::path& csv, const SweepResult& s) {
  std::string out = "K,sigma,epsilon_sq,lhs,rhs_core,fitted_C,recon_error_bl,recon_error_tik\n";
  for (const auto& r : s.rows)
    out += csv_line({r.K, r.sigma, r.epsilon_sq, r.lhs, r.rhs_core, r.fitted_C, r.recon_error_bl,
                     r.recon_error_tik});
  json meta;
  meta["schema"] = kSchemaVersion;
  meta["rows"] = s.rows.size();
  write_file_atomic(csv, out);
  write_file_atomic(sidecar_path(csv), dump(meta));
}

SweepResult read_sweep(const fs::path& csv) {
  require_file(csv);
  const auto meta_path = sidecar_path(csv);
  const json meta = read_json(meta_path);
  check_schema(meta, meta_path);
  const auto expected_rows = unsigned_number(meta, "rows", meta_path);
  const auto t = read_csv(csv, {"K", "sigma", "epsilon_sq", "lhs", "rhs_core", "fitted_C",
                                "recon_error_bl", "recon_error_tik"});
  if (t.rows.size() != expected_rows)
    throw ArgumentError(meta_path.string() + ": field 'rows' does not match the CSV row count");
  SweepResult s;
  for (const auto& r : t.rows) s.rows.push_back({r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7]});
  return s;
}

void write_sector_sweep(const fs::path& csv, const std::vector<SectorSweepRow>& rows) {
  std::string out = "k_re,k_im,I_re,I_im,ratio\n";
  for (const auto& r : rows) out += csv_line({r.k.real(), r.k.imag(), r.I.real(), r.I.imag(), r.ratio});
  write_file_atomic(csv, out);
}

std::vector<SectorSweepRow> read_sector_sweep(const fs::path& csv) {
  const auto t = read_csv(csv, {"k_re", "k_im", "I_re", "I_im", "ratio"});
  std::vector<SectorSweepRow> rows;
  for (const auto& r : t.rows) rows.push_back({{r[0], r[1]}, {r[2], r[3]}, r[4]});
  return rows;
}

void write_lemma_report(const fs::path& path,
                        const std::map<std::string, std::vector<LemmaEntry>>& report) {
  json j;
  j["schema"] = kSchemaVersion;
  for (const auto& [name, entries] : report) {
    json arr = json::array();
    for (const auto& e : entries) {
      arr.push_back({{"k", finite_or_null(e.k)},
                     {"value", finite_or_null(e.value)},
                     {"bound", finite_or_null(e.bound)},
                     {"ratio", finite_or_null(e.ratio)}});
    }
    j[name] = std::move(arr);
  }
  write_file_atomic(path, dump(j));
}

std::map<std::string, std::vector<LemmaEntry>> read_lemma_report(const fs::path& path) {
  const json j = read_json(path);
  check_schema(j, path);
  std::map<std::string, std::vector<LemmaEntry>> out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto value = [&](const json& e, const char* name) {
    const auto& v = field(e, name, path);
    if (v.is_null()) return nan;
    if (!v.is_number()) throw ArgumentError(path.string() + ": field '" + name + "' must be a number");
    return v.get<double>();
  };
  for (const auto& [name, arr] : j.items()) {
    if (name == "schema") continue;
    if (!arr.is_array()) throw ArgumentError(path.string() + ": field '" + name + "' must be an array");
    auto& entries = out[name];
    for (const auto& e : arr)
      entries.push_back({value(e, "k"), value(e, "value"), value(e, "bound"), value(e, "ratio")});
  }
  return out;
}

}  // namespace isp1d::io
