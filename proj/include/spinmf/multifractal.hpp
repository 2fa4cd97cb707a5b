#pragma once

// Partition-function multifractal analysis of box measures.
//
//   Z(q, eps) = sum_b mu_b^q  ~  eps^tau(q)
//   H(q) = (tau(q) + 1) / q        D(q) = tau(q) / (q - 1)
//   alpha(q) = tau'(q)             f(alpha) = q alpha - tau
//   C(q) = -tau''(q)
//
// q = 0 and q = 1 are kept off the estimation grid. They survive as check
// rows of the partition table: Z(0, eps) is the box count, Z(1, eps) = 1,
// and D(1) comes from regressing sum_b mu_b ln mu_b on ln eps.

#include "spinmf/box_cover.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace spinmf {

struct QGridParams {
  double q_min = -10.0;
  double q_max = 10.0;
  double step = 0.25;

  bool operator==(const QGridParams&) const = default;
};

/// Moment orders on the lattice q_min + k*step with 0 and 1 removed.
struct QGrid {
  std::vector<double> values;
  double step = 0.25;

  static QGrid make(const QGridParams& params = {});
  /// Arbitrary ascending values. The lattice step is the smallest gap.
  static QGrid from_values(std::vector<double> values);

  /// Throws Argument unless every gap is a whole multiple of `step`.
  void require_lattice() const;
};

struct PartitionTable {
  std::vector<double> q;
  std::vector<double> radii;
  std::vector<double> log_eps;
  std::vector<std::size_t> box_counts;
  std::vector<std::vector<double>> log_z;  // [q index][radius index]
  std::vector<double> z_q0;     // sum_b mu_b^0, the box count
  std::vector<double> z_q1;     // sum_b mu_b, should be 1
  std::vector<double> entropy;  // sum_b mu_b ln mu_b
  int node_count = 0;
};

/// Needs >= 4 radii (Degenerate otherwise) and strictly positive measures.
/// log Z is accumulated with a max-shifted log-sum-exp so large |q| cannot
/// overflow.
PartitionTable partition_function(const std::vector<BoxMeasures>& measures, const QGrid& qgrid,
                                  int node_count);

struct FitWindow {
  double lo = 0.1;
  double hi = 0.9;

  bool operator==(const FitWindow&) const = default;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 1.0;
};

/// Ordinary least squares of y on x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Radii whose log eps lies between the lo/hi empirical quantiles of the
/// grid's log eps values and whose box count is strictly between 1 and N.
/// Throws Degenerate when fewer than 4 radii qualify.
std::vector<std::size_t> select_fit_window(const PartitionTable& table, const FitWindow& window);

struct MassExponents {
  std::vector<double> tau;
  std::vector<LinearFit> fits;
  std::vector<std::size_t> window;  // radius indices used
  LinearFit q0_check;               // slope = tau(0) = -D(0)
  LinearFit q1_check;               // slope = tau(1), expected 0
};

MassExponents fit_mass_exponents(const PartitionTable& table, const FitWindow& window = {});

/// (tau + 1) / q; Argument error if the grid contains q = 0.
std::vector<double> hurst_exponents(const std::vector<double>& tau, const QGrid& qgrid);

struct GeneralizedDimensions {
  std::vector<double> dims;  // tau / (q - 1) on the grid
  double d1 = 0.0;           // information dimension
  LinearFit d1_fit;
};

/// Argument error if the grid contains q = 1.
GeneralizedDimensions generalized_dimensions(const MassExponents& tau, const PartitionTable& table,
                                             const QGrid& qgrid);

struct LegendreSpectrum {
  std::vector<double> alpha;  // aligned with the q grid
  std::vector<double> f;

  /// Grid indices ordered by ascending alpha (stable).
  std::vector<std::size_t> order_by_alpha() const;
};

/// alpha by three-point differences (one-sided at the ends), f = q alpha - tau.
LegendreSpectrum legendre_spectrum(const std::vector<double>& tau, const QGrid& qgrid);

struct SpecificHeat {
  std::vector<double> q;  // interior grid points
  std::vector<double> c;
};

/// C = -tau'' by three-point second differences at interior points; gaps
/// left by the removed lattice points use the unequal-spacing form.
SpecificHeat specific_heat(const std::vector<double>& tau, const QGrid& qgrid);

struct FitDiagnostics {
  double slope_stderr = 0.0;
  double r2 = 1.0;
  double eps_lo = 0.0;
  double eps_hi = 0.0;
  std::size_t points = 0;

  bool operator==(const FitDiagnostics&) const = default;
};

inline constexpr double kMinFitR2 = 0.95;

struct MfaResult {
  std::vector<double> q;
  std::vector<double> tau;
  std::vector<double> hurst;
  std::vector<double> dims;
  std::vector<double> alpha;
  std::vector<double> f;
  std::vector<double> heat_q;
  std::vector<double> heat;
  double d0 = 0.0;
  double d1 = 0.0;
  double tau_q1 = 0.0;
  std::vector<FitDiagnostics> fits;
  FitDiagnostics d0_fit;
  FitDiagnostics d1_fit;

  // Scaling data behind the fits.
  int node_count = 0;
  std::vector<double> log_eps;
  std::vector<std::size_t> box_counts;
  std::vector<std::vector<double>> log_z;
  std::vector<std::size_t> fit_indices;

  std::vector<std::string> warnings;
  nlohmann::json provenance = nlohmann::json::object();

  double hurst_width() const;
  double alpha_width() const;
  double peak_f() const;

  bool operator==(const MfaResult&) const = default;
};

/// Partition function, fits and every derived curve from a set of box
/// measures (one per radius, ascending radius).
MfaResult analyze_measures(const std::vector<BoxMeasures>& measures, int node_count,
                           const QGrid& qgrid, const FitWindow& window = {});

}  // namespace spinmf
