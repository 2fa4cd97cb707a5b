#pragma once

// Spec -> Hamiltonian -> ITF distances -> coverings -> MfaResult, plus
// batch sweeps and result persistence.

#include "spinmf/box_cover.hpp"
#include "spinmf/itf_metric.hpp"
#include "spinmf/multifractal.hpp"
#include "spinmf/spin_network.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spinmf {

inline constexpr int kResultSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

/// Radius grid size limit. Auto means 64 radii once n > 360, otherwise all.
struct RadiusLimit {
  enum class Mode { Auto, Unlimited, Fixed };
  Mode mode = Mode::Auto;
  std::size_t count = 0;

  static RadiusLimit unlimited() { return {Mode::Unlimited, 0}; }
  static RadiusLimit fixed(std::size_t n) { return {Mode::Fixed, n}; }

  std::optional<std::size_t> resolve(int nodes) const;
  bool operator==(const RadiusLimit&) const = default;
};

inline constexpr std::size_t kAutoMaxRadii = 64;
inline constexpr int kAutoSubsampleAbove = 360;

struct AnalysisOptions {
  double degeneracy_tol = kDefaultDegeneracyTol;
  bool identify_zero_pairs = false;
  double merge_tol = 1e-9;
  RadiusLimit max_radii;
  QGridParams qgrid;
  FitWindow fit_window;
  int workers = 1;  // execution only; never changes results

  void validate() const;
  bool operator==(const AnalysisOptions&) const = default;
};

/// Analysis parameters only: `workers` is left out so that outputs and the
/// provenance hash do not depend on it. Unknown fields are rejected.
nlohmann::json to_json(const AnalysisOptions& opts);
AnalysisOptions analysis_options_from_json(const nlohmann::json& j);

/// 16 hex digits identifying the analysis options.
std::string options_hash(const AnalysisOptions& opts);

struct StageTimings {
  double spectrum_s = 0.0;
  double distance_s = 0.0;
  double cover_s = 0.0;
  double multifractal_s = 0.0;
};

/// Intermediate products an analysis can hand back to the caller.
struct AnalysisArtifacts {
  std::vector<BoxCovering> coverings;
  StageTimings timings;
};

/// Full chain of module calls. Errors are re-thrown tagged with the stage
/// (network, spectrum, distance, identification, radius_grid, cover,
/// multifractal).
MfaResult analyze_network(const NetworkSpec& spec, const AnalysisOptions& opts,
                          AnalysisArtifacts* artifacts = nullptr);

/// Re-runs an analysis from the spec and options embedded in its provenance.
MfaResult rerun_from_provenance(const MfaResult& result, int workers = 1);

// Persistence -------------------------------------------------------------------

nlohmann::json result_to_json(const MfaResult& result);
/// Parse errors name the offending field; a schema_version newer than this
/// build throws SchemaVersion.
MfaResult result_from_json(const nlohmann::json& j);

/// Canonical text of result.json (2-space indent, trailing newline).
std::string result_json_text(const MfaResult& result);
void write_result(const MfaResult& result, const std::filesystem::path& path);
MfaResult read_result(const std::filesystem::path& path);

/// result.json plus hurst.csv, spectrum.csv, heat.csv, dims.csv, scaling.csv.
void write_result_directory(const MfaResult& result, const std::filesystem::path& dir);

void write_hurst_csv(const MfaResult& r, std::ostream& out);
void write_spectrum_csv(const MfaResult& r, std::ostream& out);
void write_heat_csv(const MfaResult& r, std::ostream& out);
void write_dims_csv(const MfaResult& r, std::ostream& out);
void write_scaling_csv(const MfaResult& r, std::ostream& out);

// Sweeps ------------------------------------------------------------------------

struct SweepEntry {
  std::string name;
  NetworkSpec spec;
};

struct SweepSpec {
  std::vector<SweepEntry> entries;
  AnalysisOptions options;
  std::filesystem::path output_dir;

  /// Non-empty, distinct filesystem-safe names, every spec valid.
  void validate() const;
};

/// {"output_dir": str?, "options": {...}?, "networks": [spec | {"name", "spec"}]}
SweepSpec sweep_from_json(const nlohmann::json& j);

struct SweepRow {
  std::string name;
  NetworkSpec spec;
  bool ok = false;
  std::string error;
  double d0 = 0.0;
  double hurst_width = 0.0;
  double alpha_width = 0.0;
  double peak_f = 0.0;
};

struct SweepSummary {
  std::vector<SweepRow> rows;

  std::size_t failures() const;
};

/// Writes <out>/<name>/result.json (+ plot CSVs) for every entry and
/// <out>/summary.csv. The output directory is checked for writability before
/// any analysis; a failing entry is recorded in its row and never aborts the
/// sweep. Entries run in parallel up to options.workers.
SweepSummary run_sweep(const SweepSpec& sweep);

void write_summary_csv(const SweepSummary& summary, std::ostream& out);

// Presets -----------------------------------------------------------------------

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();
/// Throws Argument for an unknown name; the message lists every preset.
SweepSpec make_preset(const std::string& name, const std::filesystem::path& output_dir,
                      const AnalysisOptions& options = {});

}  // namespace spinmf
