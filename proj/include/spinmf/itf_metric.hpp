#pragma once

// Information Transfer Fidelity (ITF) bound and the induced prametric.
//
// For H = sum_k lambda_k P_k over distinct eigenvalues,
//   p_max(i, j) = ( sum_k |<j|P_k|i>| )^2,   d(i, j) = -ln p_max(i, j).
// Projectors are never formed; <j|P_k|i> is accumulated from the
// eigenvector components of group k.

#include "spinmf/spin_network.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace spinmf {

inline constexpr double kDefaultDegeneracyTol = 1e-10;
inline constexpr double kProbabilityFloor = 1e-300;
/// Bounds within this of 1 are perfect transfer (d = 0), not rounding noise.
inline constexpr double kUnitTransferTol = 1e-10;

class SpectralDecomposition {
 public:
  int n() const { return n_; }
  double degeneracy_tol() const { return degeneracy_tol_; }

  /// Ascending distinct eigenvalues (mean of each merged cluster).
  const std::vector<double>& distinct_eigenvalues() const { return eigenvalues_; }
  std::size_t group_count() const { return eigenvalues_.size(); }

  /// Orthonormal eigenvectors (columns, n x multiplicity) of group k.
  Eigen::MatrixXd group(std::size_t k) const;
  int multiplicity(std::size_t k) const { return offsets_[k + 1] - offsets_[k]; }

  /// <j|P_k|i> = sum over group vectors v of v[j] v[i]. 0-based nodes.
  double projector_element(std::size_t k, int i, int j) const;

  /// max |G - I| over the Gram matrix of all group vectors.
  double orthonormality_error() const;

  /// max |H - sum_k lambda_k P_k|, computed densely.
  double reconstruction_error(const Hamiltonian& h) const;

  double spectral_range() const { return eigenvalues_.back() - eigenvalues_.front(); }

 private:
  friend SpectralDecomposition spectral_decompose(const Hamiltonian&, double);

  int n_ = 0;
  double degeneracy_tol_ = kDefaultDegeneracyTol;
  std::vector<double> eigenvalues_;
  std::vector<int> offsets_;   // group k owns packed columns [offsets_[k], offsets_[k+1])
  std::vector<double> packed_;  // node-major: packed_[i * n + c] = component i of vector c
};

/// Eigen-decomposes H and merges eigenvalues whose consecutive gap is
/// <= degeneracy_tol * max(1, spectral range). Throws Numeric when the
/// eigensolver does not converge.
SpectralDecomposition spectral_decompose(const Hamiltonian& h,
                                         double degeneracy_tol = kDefaultDegeneracyTol);

/// ( sum_k |<j|P_k|i>| )^2 clamped to [0, 1]; exactly 1 for i == j and for
/// values within kUnitTransferTol of 1.
double itf_probability(const SpectralDecomposition& decomp, int i, int j);

/// |<j| exp(-i H t) |i>|^2 evaluated through the spectral decomposition.
double evolve_probability(const SpectralDecomposition& decomp, int i, int j, double t);
double evolve_probability(const Hamiltonian& h, int i, int j, double t);

/// Symmetric n x n ITF prametric with its underlying probabilities.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  /// From pair probabilities (row-major n*n). p is clamped to
  /// [kProbabilityFloor, 1]; the diagonal is forced to p = 1, d = 0.
  static DistanceMatrix from_probabilities(int n, std::vector<double> p,
                                           nlohmann::json metadata = nlohmann::json::object());

  /// From an arbitrary symmetric non-negative distance table (row-major),
  /// with p = exp(-d). Used for synthetic metrics and imported graphs.
  static DistanceMatrix from_distances(int n, std::vector<double> d,
                                       nlohmann::json metadata = nlohmann::json::object());

  /// Both tables as previously exported; validated but not recomputed.
  static DistanceMatrix restore(int n, std::vector<double> p, std::vector<double> d,
                                nlohmann::json metadata);

  int n() const { return n_; }
  double d(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  double p(int i, int j) const { return p_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& distances() const { return d_; }
  const std::vector<double>& probabilities() const { return p_; }

  double max_finite_distance() const;

  nlohmann::json metadata = nlohmann::json::object();

 private:
  int n_ = 0;
  std::vector<double> d_;
  std::vector<double> p_;
};

/// All pairs i < j via itf_probability; parallel over rows, bit-identical
/// for every worker count.
DistanceMatrix distance_matrix(const SpectralDecomposition& decomp, int workers = 1);
DistanceMatrix distance_matrix(const Hamiltonian& h, double degeneracy_tol = kDefaultDegeneracyTol,
                               int workers = 1);

/// Merges nodes joined by d <= merge_tol (transitive closure). The quotient
/// distance between classes is the minimum over member pairs. Classes are
/// numbered by their smallest member; metadata["identification"] carries the
/// 1-based node -> class map.
DistanceMatrix identify_zero_pairs(const DistanceMatrix& dm, double merge_tol);

/// Header `i,j,p_max,distance`, 1-based, i < j only, 17 significant digits.
void write_distance_csv(const DistanceMatrix& dm, std::ostream& out);

/// Versioned container: metadata plus upper-triangle pair arrays.
nlohmann::json distance_to_json(const DistanceMatrix& dm);
DistanceMatrix distance_from_json(const nlohmann::json& j);

}  // namespace spinmf
