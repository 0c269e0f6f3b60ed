#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "isp1d/forward.hpp"
#include "isp1d/functionals.hpp"
#include "isp1d/reconstruction.hpp"
#include "isp1d/source.hpp"
#include "isp1d/stability.hpp"

namespace isp1d::io {

namespace fs = std::filesystem;

inline constexpr int kSchemaVersion = 1;

/// Sidecar JSON path for a CSV file: same stem, ".json" extension.
fs::path sidecar_path(const fs::path& csv);

/// Writes `content` to a temporary file in the same directory and renames it over `path`.
void write_file_atomic(const fs::path& path, const std::string& content);

/// `y,re,im` CSV plus `{ "schema", "n", "a", "b", "first", "last" }` sidecar.
void write_source(const fs::path& csv, const SourceFunction& f);
SourceFunction read_source(const fs::path& csv);

/// `omega,dplus_re,dplus_im,dminus_re,dminus_im` CSV plus
/// `{ "schema", "omega_max", "m", "noise_sigma", "seed" }` sidecar.
void write_boundary_data(const fs::path& csv, const BoundaryData& data);
BoundaryData read_boundary_data(const fs::path& csv);

/// Source CSV plus `{ ..., "method", "K", "alpha", "l2_error_sq" }` sidecar.
void write_reconstruction(const fs::path& csv, const ReconstructionResult& r);
ReconstructionResult read_reconstruction(const fs::path& csv);

void write_stability_report(const fs::path& json, const StabilityReport& r);
StabilityReport read_stability_report(const fs::path& json);

/// `K,sigma,epsilon_sq,lhs,rhs_core,fitted_C,recon_error_bl,recon_error_tik` CSV
/// plus `{ "schema", "rows" }` sidecar.
void write_sweep(const fs::path& csv, const SweepResult& s);
SweepResult read_sweep(const fs::path& csv);

/// `k_re,k_im,I_re,I_im,ratio`.
void write_sector_sweep(const fs::path& csv, const std::vector<SectorSweepRow>& rows);
std::vector<SectorSweepRow> read_sector_sweep(const fs::path& csv);

/// One entry of a lemma check: the probe point, the measured quantity, the
/// quantity it is compared against, and their ratio.
struct LemmaEntry {
  double k;
  double value;
  double bound;
  double ratio;
};

/// `{ "schema": 1, "<lemma>": [ {k, value, bound, ratio}, ... ], ... }`.
void write_lemma_report(const fs::path& json,
                        const std::map<std::string, std::vector<LemmaEntry>>& report);
std::map<std::string, std::vector<LemmaEntry>> read_lemma_report(const fs::path& json);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace isp1d::io
