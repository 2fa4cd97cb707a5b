#include "spinmf/multifractal.hpp"

#include "spinmf/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace spinmf {

namespace {

bool is_excluded_order(double q, double step) {
  const double tol = 1e-9 * step;
  return std::abs(q) <= tol || std::abs(q - 1.0) <= tol;
}

double empirical_quantile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= xs.size()) return xs.back();
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
}

FitDiagnostics diagnostics(const LinearFit& fit, const PartitionTable& table,
                           const std::vector<std::size_t>& window) {
  FitDiagnostics d;
  d.slope_stderr = fit.slope_stderr;
  d.r2 = fit.r2;
  d.eps_lo = table.radii[window.front()];
  d.eps_hi = table.radii[window.back()];
  d.points = window.size();
  return d;
}

std::string format_q(double q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

// QGrid -------------------------------------------------------------------------

QGrid QGrid::make(const QGridParams& params) {
  if (!(params.step > 0.0)) fail(ErrorKind::Argument, "q step must be > 0");
  if (!(params.q_max > params.q_min)) fail(ErrorKind::Argument, "q_max must exceed q_min");
  const double span = (params.q_max - params.q_min) / params.step;
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  QGrid grid;
  grid.step = params.step;
  for (long k = 0; k < count; ++k) {
    const double q = params.q_min + static_cast<double>(k) * params.step;
    if (!is_excluded_order(q, params.step)) grid.values.push_back(q);
  }
  if (grid.values.size() < 3) fail(ErrorKind::Argument, "q grid needs at least 3 admissible orders");
  return grid;
}

QGrid QGrid::from_values(std::vector<double> values) {
  if (values.size() < 2) fail(ErrorKind::Argument, "q grid needs at least 2 values");
  QGrid grid;
  grid.step = values[1] - values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double gap = values[i] - values[i - 1];
    if (!(gap > 0.0)) fail(ErrorKind::Argument, "q grid values must be strictly increasing");
    grid.step = std::min(grid.step, gap);
  }
  grid.values = std::move(values);
  return grid;
}

void QGrid::require_lattice() const {
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double ratio = (values[i] - values[i - 1]) / step;
    if (std::abs(ratio - std::round(ratio)) > 1e-6)
      fail(ErrorKind::Argument, "q grid is not uniformly spaced (gap " +
                                    format_q(values[i] - values[i - 1]) + " vs step " + format_q(step) + ")");
  }
}

// Partition function ----------------------------------------------------------

PartitionTable partition_function(const std::vector<BoxMeasures>& measures, const QGrid& qgrid,
                                  int node_count) {
  if (measures.size() < 4)
    fail(ErrorKind::Degenerate, "insufficient scaling range: " + std::to_string(measures.size()) +
                                    " radii, at least 4 required");
  PartitionTable t;
  t.q = qgrid.values;
  t.node_count = node_count;
  t.log_z.assign(t.q.size(), std::vector<double>(measures.size()));
  std::vector<double> logs;
  for (std::size_t r = 0; r < measures.size(); ++r) {
    const auto& mu = measures[r].measures;
    if (mu.empty()) fail(ErrorKind::Argument, "radius with no boxes");
    if (!(measures[r].radius > 0.0)) fail(ErrorKind::Argument, "radii must be positive");
    if (r > 0 && !(measures[r].radius > measures[r - 1].radius))
      fail(ErrorKind::Argument, "radii must be strictly increasing");
    logs.resize(mu.size());
    double z0 = 0.0, z1 = 0.0, s = 0.0;
    for (std::size_t b = 0; b < mu.size(); ++b) {
      if (!(mu[b] > 0.0)) fail(ErrorKind::Argument, "box measures must be > 0");
      logs[b] = std::log(mu[b]);
      z0 += std::pow(mu[b], 0.0);
      z1 += mu[b];
      s += mu[b] * logs[b];
    }
    t.radii.push_back(measures[r].radius);
    t.log_eps.push_back(std::log(measures[r].radius));
    t.box_counts.push_back(mu.size());
    t.z_q0.push_back(z0);
    t.z_q1.push_back(z1);
    t.entropy.push_back(s);
    for (std::size_t k = 0; k < t.q.size(); ++k) {
      const double q = t.q[k];
      double top = -HUGE_VAL;
      for (double l : logs) top = std::max(top, q * l);
      double acc = 0.0;
      for (double l : logs) acc += std::exp(q * l - top);
      t.log_z[k][r] = top + std::log(acc);
    }
  }
  return t;
}

// Fits --------------------------------------------------------------------------

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) fail(ErrorKind::Argument, "line fit needs >= 2 paired points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::Degenerate, "line fit over a single abscissa");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += e * e;
  }
  fit.slope_stderr = m > 2 ? std::sqrt(ssr / static_cast<double>(m - 2) / sxx) : 0.0;
  // A flat series is fitted perfectly by a zero slope.
  fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return fit;
}

std::vector<std::size_t> select_fit_window(const PartitionTable& table, const FitWindow& window) {
  if (!(window.lo >= 0.0 && window.lo < window.hi && window.hi <= 1.0))
    fail(ErrorKind::Argument, "fit window needs 0 <= lo < hi <= 1");
  if (table.log_eps.empty()) fail(ErrorKind::Degenerate, "insufficient scaling range: no radii");
  const double qlo = empirical_quantile(table.log_eps, window.lo);
  const double qhi = empirical_quantile(table.log_eps, window.hi);
  std::vector<std::size_t> picked;
  for (std::size_t r = 0; r < table.log_eps.size(); ++r) {
    const auto count = table.box_counts[r];
    if (table.log_eps[r] >= qlo && table.log_eps[r] <= qhi && count > 1 &&
        count < static_cast<std::size_t>(table.node_count))
      picked.push_back(r);
  }
  if (picked.size() < 4)
    fail(ErrorKind::Degenerate, "insufficient scaling range: " + std::to_string(picked.size()) +
                                    " radii inside the fit window, at least 4 required");
  return picked;
}

MassExponents fit_mass_exponents(const PartitionTable& table, const FitWindow& window) {
  MassExponents out;
  out.window = select_fit_window(table, window);
  std::vector<double> x, y;
  for (auto r : out.window) x.push_back(table.log_eps[r]);
  auto fit_row = [&](auto&& value_at) {
    y.clear();
    for (auto r : out.window) y.push_back(value_at(r));
    return fit_line(x, y);
  };
  for (std::size_t k = 0; k < table.q.size(); ++k) {
    out.fits.push_back(fit_row([&](std::size_t r) { return table.log_z[k][r]; }));
    out.tau.push_back(out.fits.back().slope);
  }
  out.q0_check = fit_row([&](std::size_t r) { return std::log(table.z_q0[r]); });
  out.q1_check = fit_row([&](std::size_t r) { return std::log(table.z_q1[r]); });
  return out;
}

std::vector<double> hurst_exponents(const std::vector<double>& tau, const QGrid& qgrid) {
  if (tau.size() != qgrid.values.size()) fail(ErrorKind::Argument, "tau and q grid differ in length");
  std::vector<double> h;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const double q = qgrid.values[k];
    if (q == 0.0) fail(ErrorKind::Argument, "q = 0 is not allowed in the Hurst grid");
    h.push_back((tau[k] + 1.0) / q);
  }
  return h;
}

GeneralizedDimensions generalized_dimensions(const MassExponents& tau, const PartitionTable& table,
                                             const QGrid& qgrid) {
  if (tau.tau.size() != qgrid.values.size()) fail(ErrorKind::Argument, "tau and q grid differ in length");
  GeneralizedDimensions out;
  for (std::size_t k = 0; k < tau.tau.size(); ++k) {
    const double q = qgrid.values[k];
    if (q == 1.0) fail(ErrorKind::Argument, "q = 1 is not allowed in the dimension grid");
    out.dims.push_back(tau.tau[k] / (q - 1.0));
  }
  std::vector<double> x, y;
  for (auto r : tau.window) {
    x.push_back(table.log_eps[r]);
    y.push_back(table.entropy[r]);
  }
  out.d1_fit = fit_line(x, y);
  out.d1 = out.d1_fit.slope;
  return out;
}

// Legendre spectrum and specific heat --------------------------------------------

std::vector<std::size_t> LegendreSpectrum::order_by_alpha() const {
  std::vector<std::size_t> idx(alpha.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [this](auto a, auto b) { return alpha[a] < alpha[b]; });
  return idx;
}

LegendreSpectrum legendre_spectrum(const std::vector<double>& tau, const QGrid& qgrid) {
  const auto& q = qgrid.values;
  const std::size_t m = q.size();
  if (m < 3) fail(ErrorKind::Argument, "Legendre transform needs at least 3 q values");
  if (tau.size() != m) fail(ErrorKind::Argument, "tau and q grid differ in length");
  LegendreSpectrum s;
  s.alpha.resize(m);
  s.alpha[0] = (tau[1] - tau[0]) / (q[1] - q[0]);
  s.alpha[m - 1] = (tau[m - 1] - tau[m - 2]) / (q[m - 1] - q[m - 2]);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double h1 = q[i] - q[i - 1], h2 = q[i + 1] - q[i];
    s.alpha[i] = (h1 * h1 * tau[i + 1] - h2 * h2 * tau[i - 1] + (h2 * h2 - h1 * h1) * tau[i]) /
                 (h1 * h2 * (h1 + h2));
  }
  s.f.resize(m);
  for (std::size_t i = 0; i < m; ++i) s.f[i] = q[i] * s.alpha[i] - tau[i];
  return s;
}

SpecificHeat specific_heat(const std::vector<double>& tau, const QGrid& qgrid) {
  const auto& q = qgrid.values;
  if (q.size() < 3) fail(ErrorKind::Argument, "specific heat needs at least 3 q values");
  if (tau.size() != q.size()) fail(ErrorKind::Argument, "tau and q grid differ in length");
  qgrid.require_lattice();
  SpecificHeat c;
  for (std::size_t i = 1; i + 1 < q.size(); ++i) {
    const double h1 = q[i] - q[i - 1], h2 = q[i + 1] - q[i];
    const double second = 2.0 * ((tau[i + 1] - tau[i]) / h2 - (tau[i] - tau[i - 1]) / h1) / (h1 + h2);
    c.q.push_back(q[i]);
    c.c.push_back(-second);
  }
  return c;
}

// Result assembly ---------------------------------------------------------------

double MfaResult::hurst_width() const {
  if (hurst.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(hurst.begin(), hurst.end());
  return *hi - *lo;
}

double MfaResult::alpha_width() const {
  if (alpha.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(alpha.begin(), alpha.end());
  return *hi - *lo;
}

double MfaResult::peak_f() const {
  return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end());
}

MfaResult analyze_measures(const std::vector<BoxMeasures>& measures, int node_count, const QGrid& qgrid,
                           const FitWindow& window) {
  const PartitionTable table = partition_function(measures, qgrid, node_count);
  const MassExponents mass = fit_mass_exponents(table, window);
  const GeneralizedDimensions dims = generalized_dimensions(mass, table, qgrid);
  const LegendreSpectrum spectrum = legendre_spectrum(mass.tau, qgrid);
  const SpecificHeat heat = specific_heat(mass.tau, qgrid);

  MfaResult r;
  r.q = qgrid.values;
  r.tau = mass.tau;
  r.hurst = hurst_exponents(mass.tau, qgrid);
  r.dims = dims.dims;
  r.alpha = spectrum.alpha;
  r.f = spectrum.f;
  r.heat_q = heat.q;
  r.heat = heat.c;
  r.d0 = -mass.q0_check.slope;
  r.d1 = dims.d1;
  r.tau_q1 = mass.q1_check.slope;
  for (const auto& fit : mass.fits) r.fits.push_back(diagnostics(fit, table, mass.window));
  r.d0_fit = diagnostics(mass.q0_check, table, mass.window);
  r.d1_fit = diagnostics(dims.d1_fit, table, mass.window);
  r.node_count = node_count;
  r.log_eps = table.log_eps;
  r.box_counts = table.box_counts;
  r.log_z = table.log_z;
  r.fit_indices = mass.window;

  std::size_t weak = 0;
  double worst = 1.0, worst_q = 0.0;
  for (std::size_t k = 0; k < mass.fits.size(); ++k)
    if (mass.fits[k].r2 < kMinFitR2) {
      ++weak;
      if (mass.fits[k].r2 < worst) worst = mass.fits[k].r2, worst_q = r.q[k];
    }
  if (weak > 0)
    r.warnings.push_back("fit R^2 below 0.95 on " + std::to_string(weak) + " q rows (lowest " +
                         format_q(worst) + " at q=" + format_q(worst_q) + ")");

  constexpr double slack = 1e-6;
  std::size_t decreasing = 0, convex = 0;
  for (std::size_t k = 1; k < r.tau.size(); ++k)
    if (r.tau[k] - r.tau[k - 1] < -slack) ++decreasing;
  for (std::size_t k = 0; k < r.heat.size(); ++k)
    if (r.heat[k] < -slack) ++convex;
  if (decreasing > 0)
    r.warnings.push_back("tau(q) decreases between " + std::to_string(decreasing) + " neighbouring q values");
  if (convex > 0)
    r.warnings.push_back("tau(q) is locally convex at " + std::to_string(convex) + " interior q values");
  return r;
}

}  // namespace spinmf
