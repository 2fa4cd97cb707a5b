#include "spinmf/pipeline.hpp"

#include "spinmf/error.hpp"
#include "spinmf/parallel.hpp"
#include "spinmf/text_io.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace spinmf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) fail(ErrorKind::Parse, "unknown field '" + key + "' in " + where);
}

nlohmann::json conventions() {
  return {
      {"hbar", 1},
      {"default_coupling_model", "xx"},
      {"heisenberg_diagonal", std::string(kHeisenbergDiagonalConvention)},
      {"itf_bound", "(sum_k |<j|P_k|i>|)^2"},
      {"distance", "-ln p_max"},
      {"boxes", "disjoint"},
      {"greedy_rule", "components by descending size; centre = uncovered node covering most uncovered nodes; "
                      "ties by smallest index"},
      {"box_count_monotone", "reuse previous radius covering when greedy needs more boxes"},
      {"measure", "node counting |box|/N"},
  };
}

bool safe_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

}  // namespace

// Options -----------------------------------------------------------------------

std::optional<std::size_t> RadiusLimit::resolve(int nodes) const {
  switch (mode) {
    case Mode::Unlimited: return std::nullopt;
    case Mode::Fixed: return count;
    case Mode::Auto: break;
  }
  if (nodes > kAutoSubsampleAbove) return kAutoMaxRadii;
  return std::nullopt;
}

void AnalysisOptions::validate() const {
  if (!(degeneracy_tol > 0.0)) fail(ErrorKind::Argument, "degeneracy_tol must be > 0");
  if (!(merge_tol > 0.0)) fail(ErrorKind::Argument, "merge_tol must be > 0");
  if (max_radii.mode == RadiusLimit::Mode::Fixed && max_radii.count < 2)
    fail(ErrorKind::Argument, "max_radii must be >= 2");
  if (!(qgrid.step > 0.0)) fail(ErrorKind::Argument, "q step must be > 0");
  if (!(qgrid.q_max > qgrid.q_min)) fail(ErrorKind::Argument, "q_max must exceed q_min");
  if (!(fit_window.lo >= 0.0 && fit_window.lo < fit_window.hi && fit_window.hi <= 1.0))
    fail(ErrorKind::Argument, "fit window quantiles need 0 <= lo < hi <= 1");
  if (workers < 1) fail(ErrorKind::Argument, "workers must be >= 1");
}

nlohmann::json to_json(const AnalysisOptions& o) {
  nlohmann::json max_radii;
  switch (o.max_radii.mode) {
    case RadiusLimit::Mode::Auto: max_radii = "auto"; break;
    case RadiusLimit::Mode::Unlimited: max_radii = "unlimited"; break;
    case RadiusLimit::Mode::Fixed: max_radii = o.max_radii.count; break;
  }
  return {
      {"degeneracy_tol", o.degeneracy_tol},
      {"identify_zero_pairs", o.identify_zero_pairs},
      {"merge_tol", o.merge_tol},
      {"max_radii", max_radii},
      {"q_min", o.qgrid.q_min},
      {"q_max", o.qgrid.q_max},
      {"q_step", o.qgrid.step},
      {"fit_lo", o.fit_window.lo},
      {"fit_hi", o.fit_window.hi},
  };
}

AnalysisOptions analysis_options_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::Parse, "analysis options must be a JSON object");
  reject_unknown(j,
                 {"degeneracy_tol", "identify_zero_pairs", "merge_tol", "max_radii", "q_min", "q_max", "q_step",
                  "fit_lo", "fit_hi", "workers"},
                 "analysis options");
  AnalysisOptions o;
  try {
    o.degeneracy_tol = j.value("degeneracy_tol", o.degeneracy_tol);
    o.identify_zero_pairs = j.value("identify_zero_pairs", o.identify_zero_pairs);
    o.merge_tol = j.value("merge_tol", o.merge_tol);
    if (auto it = j.find("max_radii"); it != j.end()) {
      if (it->is_string() && *it == "auto")
        o.max_radii = {};
      else if (it->is_string() && *it == "unlimited")
        o.max_radii = RadiusLimit::unlimited();
      else if (it->is_number_unsigned())
        o.max_radii = RadiusLimit::fixed(it->get<std::size_t>());
      else
        fail(ErrorKind::Parse, "max_radii must be \"auto\", \"unlimited\" or a positive integer");
    }
    o.qgrid.q_min = j.value("q_min", o.qgrid.q_min);
    o.qgrid.q_max = j.value("q_max", o.qgrid.q_max);
    o.qgrid.step = j.value("q_step", o.qgrid.step);
    o.fit_window.lo = j.value("fit_lo", o.fit_window.lo);
    o.fit_window.hi = j.value("fit_hi", o.fit_window.hi);
    o.workers = j.value("workers", o.workers);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("analysis options: ") + e.what());
  }
  return o;
}

std::string options_hash(const AnalysisOptions& opts) { return fnv1a_hex(to_json(opts).dump()); }

// Analysis ----------------------------------------------------------------------

MfaResult analyze_network(const NetworkSpec& spec, const AnalysisOptions& opts, AnalysisArtifacts* artifacts) {
  run_stage("options", [&] {
    opts.validate();
    return 0;
  });
  StageTimings timings;

  auto start = Clock::now();
  const Hamiltonian h = run_stage("network", [&] { return build_network(spec); });
  const SpectralDecomposition decomp =
      run_stage("spectrum", [&] { return spectral_decompose(h, opts.degeneracy_tol); });
  timings.spectrum_s = seconds_since(start);

  start = Clock::now();
  DistanceMatrix dm = run_stage("distance", [&] { return distance_matrix(decomp, opts.workers); });
  if (opts.identify_zero_pairs)
    dm = run_stage("identification", [&] { return identify_zero_pairs(dm, opts.merge_tol); });
  timings.distance_s = seconds_since(start);

  start = Clock::now();
  const RadiusGrid grid =
      run_stage("radius_grid", [&] { return radius_grid(dm, opts.max_radii.resolve(dm.n())); });
  std::vector<BoxCovering> covers = run_stage("cover", [&] { return cover_grid(dm, grid, opts.workers); });
  std::vector<BoxMeasures> measures;
  measures.reserve(covers.size());
  for (const auto& c : covers) measures.push_back(box_measures(c, dm.n()));
  timings.cover_s = seconds_since(start);

  start = Clock::now();
  MfaResult result = run_stage("multifractal", [&] {
    return analyze_measures(measures, dm.n(), QGrid::make(opts.qgrid), opts.fit_window);
  });
  timings.multifractal_s = seconds_since(start);

  result.provenance = {
      {"tool", "spinmf"},
      {"version", kToolVersion},
      {"spec", to_json(spec)},
      {"options", to_json(opts)},
      {"options_hash", options_hash(opts)},
      {"conventions", conventions()},
      {"distinct_eigenvalues", decomp.group_count()},
      {"analyzed_nodes", dm.n()},
      {"radius_grid",
       {{"source", grid.source == RadiusSource::AllUnique ? "all_unique" : "quantile_subsample"},
        {"count", grid.radii.size()}}},
  };
  if (opts.identify_zero_pairs) result.provenance["identification"] = dm.metadata["identification"];

  if (artifacts) {
    artifacts->coverings = std::move(covers);
    artifacts->timings = timings;
  }
  return result;
}

MfaResult rerun_from_provenance(const MfaResult& result, int workers) {
  const auto& prov = result.provenance;
  if (!prov.contains("spec") || !prov.contains("options"))
    fail(ErrorKind::Parse, "result provenance lacks spec/options");
  AnalysisOptions opts = analysis_options_from_json(prov.at("options"));
  opts.workers = workers;
  return analyze_network(network_spec_from_json(prov.at("spec")), opts);
}

// Sweeps ------------------------------------------------------------------------

void SweepSpec::validate() const {
  if (entries.empty()) fail(ErrorKind::Argument, "sweep has no networks");
  options.validate();
  std::set<std::string> names;
  for (const auto& e : entries) {
    if (!safe_name(e.name)) fail(ErrorKind::Argument, "sweep entry name '" + e.name + "' is not filesystem-safe");
    if (!names.insert(e.name).second) fail(ErrorKind::Argument, "duplicate sweep entry name '" + e.name + "'");
    e.spec.validate();
  }
}

SweepSpec sweep_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::Parse, "sweep file must be a JSON object");
  reject_unknown(j, {"output_dir", "options", "networks"}, "sweep file");
  SweepSpec sweep;
  if (auto it = j.find("options"); it != j.end()) sweep.options = analysis_options_from_json(*it);
  if (auto it = j.find("output_dir"); it != j.end()) {
    if (!it->is_string()) fail(ErrorKind::Parse, "output_dir must be a string");
    sweep.output_dir = it->get<std::string>();
  }
  auto it = j.find("networks");
  if (it == j.end()) fail(ErrorKind::Parse, "missing field 'networks' in sweep file");
  if (!it->is_array()) fail(ErrorKind::Parse, "field 'networks' must be an array");
  for (const auto& item : *it) {
    SweepEntry entry;
    if (item.is_object() && item.contains("spec")) {
      reject_unknown(item, {"name", "spec"}, "sweep network entry");
      entry.spec = network_spec_from_json(item.at("spec"));
      entry.name = item.contains("name") ? item.at("name").get<std::string>() : entry.spec.label();
    } else {
      entry.spec = network_spec_from_json(item);
      entry.name = entry.spec.label();
    }
    sweep.entries.push_back(std::move(entry));
  }
  return sweep;
}

std::size_t SweepSummary::failures() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.ok ? 0 : 1;
  return n;
}

SweepSummary run_sweep(const SweepSpec& sweep) {
  sweep.validate();
  ensure_writable_directory(sweep.output_dir);

  SweepSummary summary;
  summary.rows.resize(sweep.entries.size());
  AnalysisOptions per_entry = sweep.options;
  per_entry.workers = 1;
  parallel_for(sweep.entries.size(), sweep.options.workers, [&](std::size_t i) {
    const SweepEntry& entry = sweep.entries[i];
    SweepRow& row = summary.rows[i];
    row.name = entry.name;
    row.spec = entry.spec;
    try {
      const MfaResult result = analyze_network(entry.spec, per_entry);
      write_result_directory(result, sweep.output_dir / entry.name);
      row.ok = true;
      row.d0 = result.d0;
      row.hurst_width = result.hurst_width();
      row.alpha_width = result.alpha_width();
      row.peak_f = result.peak_f();
    } catch (const Error& e) {
      row.error = std::string(to_string(e.kind())) + ": " + e.what();
    } catch (const std::exception& e) {
      row.error = std::string("internal: ") + e.what();
    }
  });

  std::ostringstream csv;
  write_summary_csv(summary, csv);
  write_text_file(sweep.output_dir / "summary.csv", csv.str());
  return summary;
}

void write_summary_csv(const SweepSummary& summary, std::ostream& out) {
  out << "name,n,topology,profile,model,bias_node,bias,status,D0,H_width,alpha_width,peak_f,error\n";
  for (const auto& r : summary.rows) {
    std::string error = r.error;
    for (char& c : error)
      if (c == ',' || c == '\n' || c == '"') c = ';';
    out << r.name << ',' << r.spec.n << ',' << to_string(r.spec.topology) << ','
        << to_string(r.spec.coupling_profile) << ',' << to_string(r.spec.coupling_model) << ','
        << (r.spec.bias ? std::to_string(r.spec.bias->node) : std::string()) << ','
        << format_double(r.spec.bias ? r.spec.bias->magnitude : 0.0) << ',' << (r.ok ? "ok" : "failed") << ',';
    if (r.ok)
      out << format_double(r.d0) << ',' << format_double(r.hurst_width) << ',' << format_double(r.alpha_width)
          << ',' << format_double(r.peak_f);
    else
      out << ",,,";
    out << ',' << error << '\n';
  }
}

}  // namespace spinmf
