#pragma once

// Single-excitation Hamiltonians for spin chains and rings.
//
// Units: hbar = 1 and couplings are dimensionless. Node indices are 1-based
// wherever they cross the public JSON/CLI boundary (bias node) and 0-based
// inside the library.

#include <Eigen/Dense>
#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace spinmf {

enum class Topology { Chain, Ring };
enum class CouplingProfile { Uniform, Engineered };
enum class CouplingModel { XX, Heisenberg };

std::string_view to_string(Topology t);
std::string_view to_string(CouplingProfile p);
std::string_view to_string(CouplingModel m);
Topology parse_topology(std::string_view s);
CouplingProfile parse_coupling_profile(std::string_view s);
CouplingModel parse_coupling_model(std::string_view s);

/// On-site field added to one diagonal entry. `node` is 1-based.
struct Bias {
  int node = 1;
  double magnitude = 0.0;

  bool operator==(const Bias&) const = default;
};

struct NetworkSpec {
  Topology topology = Topology::Chain;
  int n = 2;
  CouplingProfile coupling_profile = CouplingProfile::Uniform;
  CouplingModel coupling_model = CouplingModel::XX;
  std::optional<Bias> bias;

  bool operator==(const NetworkSpec&) const = default;

  /// Throws Argument for n < 2 or an out-of-range bias node, Unsupported
  /// for an engineered ring.
  void validate() const;

  /// Short filesystem-safe label, e.g. "ring_n102_uniform_xx_b10at100".
  std::string label() const;
};

/// Strict JSON mapping: every field name is fixed, unknown fields are
/// rejected with a Parse error. `topology` and `n` are required; the
/// profile and model default to uniform / xx and `bias` may be absent or null.
nlohmann::json to_json(const NetworkSpec& spec);
NetworkSpec network_spec_from_json(const nlohmann::json& j);

/// J_{k,k+1} = sqrt(k (n - k)) / 2 for 1 <= k <= n-1; no normalisation.
double engineered_coupling(int k, int n);

/// Real symmetric matrix on the single-excitation subspace.
class Hamiltonian {
 public:
  Hamiltonian() = default;

  /// Wraps an arbitrary matrix; rejects anything not bit-for-bit symmetric.
  static Hamiltonian from_matrix(Eigen::MatrixXd entries);

  int n() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  /// c*H + b*I, symmetric by construction.
  Hamiltonian affine(double scale, double shift) const;

 private:
  explicit Hamiltonian(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}
  friend Hamiltonian build_network(const NetworkSpec& spec);

  Eigen::MatrixXd entries_;
};

/// Diagonal convention for the Heisenberg model: H_ii = -sum_{j != i} J_ij.
inline constexpr std::string_view kHeisenbergDiagonalConvention =
    "diag[i] = -sum_{j!=i} J_ij";

Hamiltonian build_network(const NetworkSpec& spec);

}  // namespace spinmf
