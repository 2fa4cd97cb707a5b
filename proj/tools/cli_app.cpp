#include "cli_app.hpp"

#include "spinmf/error.hpp"
#include "spinmf/pipeline.hpp"
#include "spinmf/text_io.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>

namespace spinmf::cli {

namespace {

namespace fs = std::filesystem;

struct NetworkFlags {
  std::string spec_file;
  std::string topology = "chain";
  int n = 0;
  std::string profile = "uniform";
  std::string model = "xx";
  int bias_node = 0;
  double bias = 0.0;
};

struct AnalysisFlags {
  AnalysisOptions opts;
  std::string max_radii = "auto";
};

void add_network_flags(CLI::App* cmd, NetworkFlags& f) {
  cmd->add_option("--spec", f.spec_file, "NetworkSpec JSON file (replaces the network flags)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--topology", f.topology, "chain | ring")->capture_default_str();
  cmd->add_option("--n", f.n, "number of spins");
  cmd->add_option("--profile", f.profile, "uniform | engineered")->capture_default_str();
  cmd->add_option("--model", f.model, "xx | heisenberg")->capture_default_str();
  cmd->add_option("--bias-node", f.bias_node, "1-based node receiving the on-site bias (0 = none)")
      ->capture_default_str();
  cmd->add_option("--bias", f.bias, "bias magnitude added to the diagonal")->capture_default_str();
}

void add_spectral_flags(CLI::App* cmd, AnalysisFlags& f) {
  cmd->add_option("--degeneracy-tol", f.opts.degeneracy_tol,
                  "relative gap below which eigenvalues share one projector")
      ->capture_default_str();
  cmd->add_flag("--identify-zero-pairs", f.opts.identify_zero_pairs,
                "merge node pairs at distance <= merge-tol before covering");
  cmd->add_option("--merge-tol", f.opts.merge_tol, "distance treated as zero when identifying pairs")
      ->capture_default_str();
}

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
  add_spectral_flags(cmd, f);
  cmd->add_option("--max-radii", f.max_radii,
                  "radius grid size: auto (64 when n > 360, else all), unlimited, or a count >= 2")
      ->capture_default_str();
  cmd->add_option("--q-min", f.opts.qgrid.q_min, "smallest moment order")->capture_default_str();
  cmd->add_option("--q-max", f.opts.qgrid.q_max, "largest moment order")->capture_default_str();
  cmd->add_option("--q-step", f.opts.qgrid.step, "moment order spacing")->capture_default_str();
  cmd->add_option("--fit-lo", f.opts.fit_window.lo, "lower log-radius quantile of the fit window")
      ->capture_default_str();
  cmd->add_option("--fit-hi", f.opts.fit_window.hi, "upper log-radius quantile of the fit window")
      ->capture_default_str();
}

void add_workers_flag(CLI::App* cmd, AnalysisOptions& opts) {
  cmd->add_option("--workers", opts.workers, "worker threads (results do not depend on it)")
      ->capture_default_str();
}

void add_out_flag(CLI::App* cmd, std::string& out) {
  cmd->add_option("--out", out, "output directory")->envname("SPINMF_OUT")->capture_default_str();
}

NetworkSpec resolve_network(const NetworkFlags& f) {
  NetworkSpec spec;
  if (!f.spec_file.empty()) {
    spec = network_spec_from_json(parse_json(read_text_file(f.spec_file), f.spec_file));
  } else {
    if (f.n == 0) fail(ErrorKind::Argument, "either --spec or --n is required");
    spec.topology = parse_topology(f.topology);
    spec.n = f.n;
    spec.coupling_profile = parse_coupling_profile(f.profile);
    spec.coupling_model = parse_coupling_model(f.model);
    if (f.bias_node != 0) spec.bias = Bias{f.bias_node, f.bias};
    else if (f.bias != 0.0) fail(ErrorKind::Argument, "--bias needs --bias-node");
  }
  spec.validate();
  return spec;
}

AnalysisOptions resolve_options(const AnalysisFlags& f) {
  AnalysisOptions opts = f.opts;
  if (f.max_radii == "auto") {
    opts.max_radii = {};
  } else if (f.max_radii == "unlimited") {
    opts.max_radii = RadiusLimit::unlimited();
  } else {
    std::size_t used = 0;
    long long count = -1;
    try {
      count = std::stoll(f.max_radii, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f.max_radii.size() || count < 2)
      fail(ErrorKind::Argument, "--max-radii must be auto, unlimited or an integer >= 2");
    opts.max_radii = RadiusLimit::fixed(static_cast<std::size_t>(count));
  }
  opts.validate();
  return opts;
}

void print_hash(std::ostream& out, const AnalysisOptions& opts) {
  out << "options_hash " << options_hash(opts) << '\n';
}

void write_hamiltonian_csv(const Hamiltonian& h, const fs::path& path) {
  std::ostringstream csv;
  for (int j = 0; j < h.n(); ++j) csv << (j ? "," : "") << "h" << (j + 1);
  csv << '\n';
  for (int i = 0; i < h.n(); ++i) {
    for (int j = 0; j < h.n(); ++j) csv << (j ? "," : "") << format_double(h(i, j));
    csv << '\n';
  }
  write_text_file(path, csv.str());
}

int cmd_net(const NetworkFlags& nf, const fs::path& out_dir, std::ostream& out) {
  const NetworkSpec spec = resolve_network(nf);
  const Hamiltonian h = build_network(spec);
  ensure_writable_directory(out_dir);
  write_hamiltonian_csv(h, out_dir / "hamiltonian.csv");
  write_text_file(out_dir / "spec.json", to_json(spec).dump(2) + "\n");
  print_hash(out, AnalysisOptions{});
  out << "wrote " << (out_dir / "hamiltonian.csv").string() << '\n';
  return kExitOk;
}

int cmd_dist(const NetworkFlags& nf, const AnalysisFlags& af, const fs::path& out_dir, std::ostream& out) {
  const NetworkSpec spec = resolve_network(nf);
  const AnalysisOptions opts = resolve_options(af);
  DistanceMatrix dm = distance_matrix(spectral_decompose(build_network(spec), opts.degeneracy_tol), opts.workers);
  if (opts.identify_zero_pairs) dm = identify_zero_pairs(dm, opts.merge_tol);
  dm.metadata["spec"] = to_json(spec);
  ensure_writable_directory(out_dir);
  std::ostringstream csv;
  write_distance_csv(dm, csv);
  write_text_file(out_dir / "distances.csv", csv.str());
  write_text_file(out_dir / "distances.json", distance_to_json(dm).dump(2) + "\n");
  print_hash(out, opts);
  out << "wrote " << (out_dir / "distances.csv").string() << '\n';
  return kExitOk;
}

int cmd_mfa(const NetworkFlags& nf, const AnalysisFlags& af, bool dump_covers, const fs::path& out_dir,
            std::ostream& out) {
  const NetworkSpec spec = resolve_network(nf);
  const AnalysisOptions opts = resolve_options(af);
  print_hash(out, opts);
  AnalysisArtifacts artifacts;
  const MfaResult result = analyze_network(spec, opts, &artifacts);
  write_result_directory(result, out_dir);
  const auto& t = artifacts.timings;
  const nlohmann::json timing = {{"spectrum_s", t.spectrum_s},
                                 {"distance_s", t.distance_s},
                                 {"cover_s", t.cover_s},
                                 {"multifractal_s", t.multifractal_s},
                                 {"workers", opts.workers}};
  write_text_file(out_dir / "timing.json", timing.dump(2) + "\n");
  if (dump_covers) write_text_file(out_dir / "covers.json", coverings_to_json(artifacts.coverings).dump(2) + "\n");
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  out << "D0 " << format_double(result.d0) << "  H-width " << format_double(result.hurst_width())
      << "  alpha-width " << format_double(result.alpha_width()) << '\n';
  out << "wrote " << (out_dir / "result.json").string() << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& preset, const std::string& sweep_file, const AnalysisFlags& af,
              CLI::App* sweep_cmd, const std::string& out_flag, std::ostream& out, std::ostream& err) {
  SweepSpec sweep;
  if (!preset.empty()) {
    sweep = make_preset(preset, out_flag, resolve_options(af));
  } else {
    sweep = sweep_from_json(parse_json(read_text_file(sweep_file), sweep_file));
    if (sweep.output_dir.empty() || sweep_cmd->count("--out")) sweep.output_dir = out_flag;
    if (sweep_cmd->count("--workers")) sweep.options.workers = af.opts.workers;
  }
  print_hash(out, sweep.options);
  const SweepSummary summary = run_sweep(sweep);

  out << std::left << std::setw(36) << "name" << std::setw(8) << "status" << std::setw(14) << "D0"
      << std::setw(14) << "H_width" << std::setw(14) << "alpha_width" << "peak_f\n";
  for (const auto& r : summary.rows) {
    out << std::setw(36) << r.name << std::setw(8) << (r.ok ? "ok" : "failed");
    if (r.ok)
      out << std::setprecision(6) << std::setw(14) << r.d0 << std::setw(14) << r.hurst_width << std::setw(14)
          << r.alpha_width << r.peak_f;
    out << '\n';
  }
  for (const auto& r : summary.rows)
    if (!r.ok) err << r.name << ": " << r.error << '\n';
  out << "wrote " << (sweep.output_dir / "summary.csv").string() << " (" << summary.rows.size() << " networks, "
      << summary.failures() << " failed)\n";
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Numeric: return kExitNumeric;
    case ErrorKind::Degenerate: return kExitDegenerate;
    default: return kExitUsage;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multifractal analysis of spin-network information-transfer geometry", "spinmf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  NetworkFlags nf;
  AnalysisFlags af;
  std::string out_dir = ".";
  bool dump_covers = false;
  std::string preset;
  std::string sweep_file;

  auto* net = app.add_subcommand("net", "write a network Hamiltonian (hamiltonian.csv, spec.json)");
  add_network_flags(net, nf);
  add_out_flag(net, out_dir);

  auto* dist = app.add_subcommand("dist", "write ITF pair distances (distances.csv, distances.json)");
  add_network_flags(dist, nf);
  add_spectral_flags(dist, af);
  add_workers_flag(dist, af.opts);
  add_out_flag(dist, out_dir);

  auto* mfa = app.add_subcommand("mfa", "run the multifractal analysis and write result.json plus plot CSVs");
  add_network_flags(mfa, nf);
  add_analysis_flags(mfa, af);
  add_workers_flag(mfa, af.opts);
  mfa->add_flag("--dump-covers", dump_covers, "also write covers.json with every covering");
  add_out_flag(mfa, out_dir);

  auto* sweep = app.add_subcommand("sweep", "analyse a batch of networks into <out>/<name>/ plus summary.csv");
  auto* preset_opt = sweep->add_option("--preset", preset, "bundled parameter list (see `spinmf presets`)");
  auto* file_opt = sweep->add_option("--sweep", sweep_file, "sweep JSON file")->check(CLI::ExistingFile);
  preset_opt->excludes(file_opt);
  add_analysis_flags(sweep, af);
  add_workers_flag(sweep, af.opts);
  add_out_flag(sweep, out_dir);

  auto* presets = app.add_subcommand("presets", "list bundled sweep presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostream& stream = e.get_exit_code() == 0 ? out : err;
    app.exit(e, stream, stream);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*net) return cmd_net(nf, out_dir, out);
    if (*dist) return cmd_dist(nf, af, out_dir, out);
    if (*mfa) return cmd_mfa(nf, af, dump_covers, out_dir, out);
    if (*sweep) {
      if (preset.empty() && sweep_file.empty()) fail(ErrorKind::Argument, "sweep needs --preset or --sweep");
      return cmd_sweep(preset, sweep_file, af, sweep, out_dir, out, err);
    }
    if (*presets) {
      print_hash(out, AnalysisOptions{});
      for (const auto& p : list_presets()) out << std::left << std::setw(8) << p.name << p.description << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace spinmf::cli
