// One line per acceptance criterion: "PASS|FAIL  <id>  <title>  (<detail>)".
// Arguments select criteria by id; no arguments runs all of them.

#include "fixtures.hpp"
#include "spinmf/error.hpp"
#include "spinmf/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace spinmf;
using fixtures::spec;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[x] " << what << "; ";
    }
  }
  template <class T>
  void note(const std::string& key, const T& value) {
    detail << key << "=" << value << "; ";
  }
};

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// 1 ---------------------------------------------------------------------------
void spectral_reconstruction(Outcome& o) {
  double worst = 0.0;
  for (auto topology : {Topology::Chain, Topology::Ring})
    for (int n : {3, 50, 500, 1000}) {
      const Hamiltonian h = build_network(spec(topology, n));
      const auto t0 = std::chrono::steady_clock::now();
      const SpectralDecomposition dec = spectral_decompose(h);
      const double took = seconds(t0);
      const double rel = dec.reconstruction_error(h) / dec.spectral_range();
      worst = std::max(worst, rel);
      o.require(rel < 1e-10, std::string(to_string(topology)) + " n=" + std::to_string(n) + " reconstruction");
      if (n == 1000) {
        o.note(std::string(to_string(topology)) + "1000_decompose_s", took);
        o.require(took < 30.0, "n=1000 decomposition under 30 s");
      }
    }
  o.note("worst_relative_error", worst);
}

// 2 ---------------------------------------------------------------------------
void itf_exactness(Outcome& o) {
  double worst = 0.0;
  for (int n : {3, 4, 5, 8, 21, 50, 100}) {
    const auto dec = spectral_decompose(build_network(spec(Topology::Chain, n)));
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(1.0 - itf_probability(dec, i, n - 1 - i)));
  }
  o.note("mirror_worst", worst);
  o.require(worst < 1e-9, "uniform chain mirror pairs");

  worst = 0.0;
  for (int n : {4, 6, 10, 50, 100}) {
    const auto dec = spectral_decompose(build_network(spec(Topology::Ring, n)));
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(1.0 - itf_probability(dec, i, (i + n / 2) % n)));
  }
  o.note("antipodal_worst", worst);
  o.require(worst < 1e-9, "even ring antipodal pairs");

  worst = 0.0;
  for (int n : {5, 50, 105}) {
    const auto dec = spectral_decompose(build_network(spec(Topology::Chain, n, CouplingProfile::Engineered)));
    worst = std::max(worst, std::abs(1.0 - itf_probability(dec, 0, n - 1)));
  }
  o.note("engineered_end_to_end_worst", worst);
  o.require(worst < 1e-9, "engineered chain end-to-end");

  const double p12 = itf_probability(spectral_decompose(build_network(spec(Topology::Chain, 3))), 0, 1);
  o.note("chain3_p12_error", std::abs(p12 - 0.5));
  o.require(std::abs(p12 - 0.5) < 1e-12, "chain n=3 p(1,2) = 0.5");
}

// 3 ---------------------------------------------------------------------------
void bound_validation(Outcome& o) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> time(0.0, 100.0);
  double worst = -1.0;
  int networks = 0;
  for (auto topology : {Topology::Chain, Topology::Ring})
    for (auto profile : {CouplingProfile::Uniform, CouplingProfile::Engineered})
      for (double bias : {0.0, 5.0})
        for (int n = 2; n <= 8; ++n) {
          if (topology == Topology::Ring && (profile == CouplingProfile::Engineered || n < 3)) continue;
          NetworkSpec s = spec(topology, n, profile);
          if (bias != 0.0) s.bias = Bias{1, bias};
          const auto dec = spectral_decompose(build_network(s));
          ++networks;
          for (int trial = 0; trial < 1000; ++trial) {
            const double t = time(rng);
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                worst = std::max(worst, evolve_probability(dec, i, j, t) - itf_probability(dec, i, j));
          }
        }
  o.note("networks", networks);
  o.note("max_excess", worst);
  o.require(worst <= 1e-9, "evolution never exceeds the bound");
}

// 4 ---------------------------------------------------------------------------
void invariance(Outcome& o) {
  NetworkSpec biased = spec(Topology::Ring, 40);
  biased.bias = Bias{7, 2.0};
  double worst = 0.0;
  for (const auto& s : {spec(Topology::Chain, 50), biased, spec(Topology::Chain, 31, CouplingProfile::Engineered),
                        spec(Topology::Chain, 24, CouplingProfile::Uniform, CouplingModel::Heisenberg)}) {
    const Hamiltonian h = build_network(s);
    const DistanceMatrix ref = distance_matrix(h);
    for (double c : {0.5, 3.0})
      for (double b : {-2.0, 7.0})
        worst = std::max(worst, max_abs_diff(ref.probabilities(), distance_matrix(h.affine(c, b)).probabilities()));
  }
  o.note("affine_max_dp", worst);
  o.require(worst < 1e-10, "p_max invariant under cH + bI");

  NetworkSpec s = spec(Topology::Ring, 102);
  s.bias = Bias{100, 10.0};
  const auto dec = spectral_decompose(build_network(s));
  const DistanceMatrix d1 = distance_matrix(dec, 1);
  AnalysisOptions opts;
  const std::string ref = result_json_text(analyze_network(s, opts));
  bool same = true;
  for (int w : {4, 8}) {
    const DistanceMatrix dw = distance_matrix(dec, w);
    same = same && dw.distances() == d1.distances() && dw.probabilities() == d1.probabilities();
    opts.workers = w;
    same = same && result_json_text(analyze_network(s, opts)) == ref;
  }
  o.require(same, "bit-identical outputs for workers 1, 4, 8");
}

// 5 ---------------------------------------------------------------------------
void covering_correctness(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(2, 12);
  int metrics = 0, radii = 0, invalid = 0, below_exact = 0, increases = 0;
  while (metrics < 200) {
    const DistanceMatrix dm = fixtures::random_semimetric(rng, size(rng));
    RadiusGrid grid;
    try {
      grid = radius_grid(dm);
    } catch (const Error&) {
      continue;
    }
    ++metrics;
    const auto covers = cover_grid(dm, grid);
    for (std::size_t r = 0; r < covers.size(); ++r) {
      ++radii;
      try {
        validate_covering(dm, covers[r]);
      } catch (const Error&) {
        ++invalid;
      }
      if (static_cast<int>(covers[r].box_count()) < exact_min_cover(dm, grid.radii[r])) ++below_exact;
      if (r > 0 && covers[r].box_count() > covers[r - 1].box_count()) ++increases;
    }
  }
  o.note("metrics", metrics);
  o.note("radii", radii);
  o.require(invalid == 0, "disjoint, exhaustive, radius-feasible (" + std::to_string(invalid) + " bad)");
  o.require(below_exact == 0, "greedy >= exact minimum");
  o.require(increases == 0, "box counts non-increasing in eps");
}

// 6 ---------------------------------------------------------------------------
void partition_normalization(Outcome& o) {
  NetworkSpec biased = spec(Topology::Ring, 102);
  biased.bias = Bias{100, 10.0};
  double worst_z1 = 0.0, worst_tau1 = 0.0;
  bool counts_exact = true;
  NetworkSpec ring500 = spec(Topology::Ring, 500);
  ring500.bias = Bias{100, 5.0};
  int networks = 0;
  for (const auto& s : {spec(Topology::Chain, 100), spec(Topology::Chain, 105, CouplingProfile::Engineered), biased,
                        spec(Topology::Ring, 108), spec(Topology::Chain, 545), ring500}) {
    const AnalysisOptions opts;
    const DistanceMatrix dm = distance_matrix(build_network(s));
    std::vector<BoxMeasures> measures;
    for (const auto& c : cover_grid(dm, radius_grid(dm, opts.max_radii.resolve(dm.n()))))
      measures.push_back(box_measures(c, dm.n()));
    ++networks;
    const PartitionTable t = partition_function(measures, QGrid::make(), dm.n());
    for (std::size_t r = 0; r < t.radii.size(); ++r) {
      worst_z1 = std::max(worst_z1, std::abs(t.z_q1[r] - 1.0));
      counts_exact = counts_exact && t.z_q0[r] == static_cast<double>(measures[r].measures.size());
    }
    worst_tau1 = std::max(worst_tau1, std::abs(fit_mass_exponents(t).q1_check.slope));
  }
  o.note("networks", networks);
  o.note("max_|Z1-1|", worst_z1);
  o.note("max_|tau(1)|", worst_tau1);
  o.require(worst_z1 < 1e-12, "Z(1, eps) = 1");
  o.require(counts_exact, "Z(0, eps) = box count");
  o.require(worst_tau1 < 1e-6, "tau(1) check = 0");
}

MfaResult analyze_metric(const DistanceMatrix& dm, const std::vector<double>* weights = nullptr) {
  const AnalysisOptions opts;
  const RadiusGrid grid = radius_grid(dm, opts.max_radii.resolve(dm.n()));
  std::vector<BoxMeasures> measures;
  for (const auto& c : cover_grid(dm, grid))
    measures.push_back(weights ? box_measures(c, *weights) : box_measures(c, dm.n()));
  return analyze_measures(measures, dm.n(), QGrid::make(opts.qgrid), opts.fit_window);
}

// 7 ---------------------------------------------------------------------------
void monofractal_oracle(Outcome& o) {
  const MfaResult r = analyze_metric(fixtures::lattice_1d(512));
  o.note("D0", r.d0);
  o.note("H_spread", r.hurst_width());
  o.note("alpha_width", r.alpha_width());
  o.require(std::abs(r.d0 - 1.0) <= 0.05, "D(0) = 1 +- 0.05");
  o.require(r.hurst_width() < 0.05, "H(q) spread < 0.05");
  o.require(r.alpha_width() < 0.1, "f(alpha) support width < 0.1");
}

// 8 ---------------------------------------------------------------------------
void multifractal_oracle(Outcome& o) {
  const auto weights = fixtures::binomial_weights(10, 0.3);
  const MfaResult r = analyze_metric(fixtures::dyadic_ultrametric(10), &weights);
  double worst = 0.0;
  for (std::size_t k = 0; k < r.q.size(); ++k)
    if (r.q[k] >= -5.0 && r.q[k] <= 5.0) worst = std::max(worst, std::abs(r.tau[k] - fixtures::binomial_tau(r.q[k], 0.3)));
  LegendreSpectrum spectrum{r.alpha, r.f};
  const auto order = spectrum.order_by_alpha();
  bool concave = true;
  for (std::size_t k = 2; k < order.size(); ++k) {
    const double a0 = r.alpha[order[k - 2]], a1 = r.alpha[order[k - 1]], a2 = r.alpha[order[k]];
    if (a1 - a0 <= 1e-12 || a2 - a1 <= 1e-12) continue;
    const double s1 = (r.f[order[k - 1]] - r.f[order[k - 2]]) / (a1 - a0);
    const double s2 = (r.f[order[k]] - r.f[order[k - 1]]) / (a2 - a1);
    if (s2 > s1 + 1e-6) concave = false;
  }
  o.note("max_tau_error_q[-5,5]", worst);
  o.note("alpha_width", r.alpha_width());
  o.require(worst <= 0.1, "tau(q) within 0.1 of the closed form");
  o.require(concave, "f(alpha) concave");
  o.require(r.alpha_width() > 0.3, "f(alpha) width > 0.3");
}

// 9 ---------------------------------------------------------------------------
double hurst_at(const MfaResult& r, double q) {
  for (std::size_t k = 0; k < r.q.size(); ++k)
    if (std::abs(r.q[k] - q) < 1e-9) return r.hurst[k];
  fail(ErrorKind::Argument, "q not on grid");
}

void guarded(Outcome& o, const std::string& label, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    o.require(false, label + " raised: " + e.what());
  }
}

void qualitative_reproduction(Outcome& o) {
  const AnalysisOptions opts;
  guarded(o, "(a)", [&] {
    const MfaResult chain100 = analyze_network(spec(Topology::Chain, 100), opts);
    std::size_t rises = 0;
    for (std::size_t k = 1; k < chain100.hurst.size(); ++k)
      if (chain100.hurst[k] > chain100.hurst[k - 1]) ++rises;
    const double drop = hurst_at(chain100, -5) - hurst_at(chain100, 5);
    o.note("a:H_rises", rises);
    o.note("a:H(-5)-H(5)", drop);
    o.require(rises == 0 && drop > 0.1, "(a) chain 100 H(q) non-increasing with H(-5)-H(5) > 0.1");
  });

  guarded(o, "(b)", [&] {
    const double eng = analyze_network(spec(Topology::Chain, 105, CouplingProfile::Engineered), opts).hurst_width();
    const double uni = analyze_network(spec(Topology::Chain, 105), opts).hurst_width();
    o.note("b:engineered_width", eng);
    o.note("b:uniform_width", uni);
    o.require(eng >= uni, "(b) engineered 105 H-width >= uniform 105");
  });

  guarded(o, "(c)", [&] {
    NetworkSpec ring = spec(Topology::Ring, 102);
    ring.bias = Bias{100, 10.0};
    const double b10 = analyze_network(ring, opts).hurst_width();
    o.note("c:bias10_width", b10);
    ring.bias = Bias{100, 0.0};
    const double b0 = analyze_network(ring, opts).hurst_width();
    o.note("c:bias0_width", b0);
    o.require(b10 > b0, "(c) ring 102 bias 10 H-width > bias 0");
  });

  // Dominant maximum: the global peak is >= 0 and every other interior local
  // maximum stays below half of it.
  guarded(o, "(d)", [&] {
    const MfaResult chain100 = analyze_network(spec(Topology::Chain, 100), opts);
    const auto& c = chain100.heat;
    std::size_t peak = 0;
    for (std::size_t k = 1; k < c.size(); ++k)
      if (c[k] > c[peak]) peak = k;
    double runner_up = -HUGE_VAL;
    for (std::size_t k = 1; k + 1 < c.size(); ++k)
      if (k != peak && c[k] > c[k - 1] && c[k] > c[k + 1]) runner_up = std::max(runner_up, c[k]);
    o.note("d:C_peak", c[peak]);
    o.note("d:C_peak_q", chain100.heat_q[peak]);
    o.note("d:next_local_max", runner_up);
    o.require(c[peak] >= 0.0 && runner_up < 0.5 * c[peak], "(d) chain 100 C(q) single dominant maximum");
  });

  guarded(o, "fig3a", [&] {
    const auto dir = std::filesystem::temp_directory_path() / "spinmf_acceptance_fig3a";
    std::filesystem::remove_all(dir);
    AnalysisOptions sweep_opts;
    sweep_opts.workers = 4;
    const auto t0 = std::chrono::steady_clock::now();
    const SweepSummary summary = run_sweep(make_preset("fig3a", dir, sweep_opts));
    const double took = seconds(t0);
    std::filesystem::remove_all(dir);
    o.note("fig3a_s", took);
    o.require(summary.failures() == 0 && summary.rows.size() == 11, "fig3a preset completes");
    o.require(took < 900.0, "fig3a under 15 minutes");
  });
}

// 10 --------------------------------------------------------------------------
void persistence(Outcome& o) {
  NetworkSpec ring = spec(Topology::Ring, 102);
  ring.bias = Bias{100, 10.0};
  AnalysisOptions identified;
  identified.identify_zero_pairs = true;
  const auto dir = std::filesystem::temp_directory_path() / "spinmf_acceptance_persist";
  std::filesystem::remove_all(dir);
  bool lossless = true, reproducible = true;
  int cases = 0;
  for (const auto& [s, opts] : {std::pair{spec(Topology::Chain, 100), AnalysisOptions{}}, std::pair{ring, identified},
                                std::pair{spec(Topology::Chain, 64, CouplingProfile::Engineered), AnalysisOptions{}}}) {
    const MfaResult r = analyze_network(s, opts);
    const auto path = dir / (std::to_string(cases++) + ".json");
    std::filesystem::create_directories(dir);
    write_result(r, path);
    const MfaResult back = read_result(path);
    lossless = lossless && back == r && result_json_text(back) == result_json_text(r);
    reproducible = reproducible && result_json_text(rerun_from_provenance(back)) == result_json_text(r);
  }
  std::filesystem::remove_all(dir);
  o.note("cases", cases);
  o.require(lossless, "write/read round trip is lossless");
  o.require(reproducible, "re-run from provenance is byte-identical");
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<void(Outcome&)> run;
};

const Criterion kCriteria[] = {
    {"1", "spectral reconstruction", spectral_reconstruction},
    {"2", "ITF exactness on analytic cases", itf_exactness},
    {"3", "bound validation", bound_validation},
    {"4", "invariance suite", invariance},
    {"5", "covering correctness", covering_correctness},
    {"6", "partition normalization", partition_normalization},
    {"7", "mono-fractal lattice oracle", monofractal_oracle},
    {"8", "binomial multi-fractal oracle", multifractal_oracle},
    {"9", "qualitative reproduction", qualitative_reproduction},
    {"10", "persistence", persistence},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failures = 0, ran = 0;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    ++ran;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s  %-3s %-34s %6.2fs  (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, seconds(t0),
                o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion matches the arguments\n");
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
