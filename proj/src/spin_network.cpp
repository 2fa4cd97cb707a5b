#include "spinmf/spin_network.hpp"

#include "spinmf/error.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace spinmf {

std::string_view to_string(Topology t) { return t == Topology::Chain ? "chain" : "ring"; }

std::string_view to_string(CouplingProfile p) {
  return p == CouplingProfile::Uniform ? "uniform" : "engineered";
}

std::string_view to_string(CouplingModel m) { return m == CouplingModel::XX ? "xx" : "heisenberg"; }

Topology parse_topology(std::string_view s) {
  if (s == "chain") return Topology::Chain;
  if (s == "ring") return Topology::Ring;
  fail(ErrorKind::Argument, "unknown topology '" + std::string(s) + "' (expected chain|ring)");
}

CouplingProfile parse_coupling_profile(std::string_view s) {
  if (s == "uniform") return CouplingProfile::Uniform;
  if (s == "engineered") return CouplingProfile::Engineered;
  fail(ErrorKind::Argument,
       "unknown coupling profile '" + std::string(s) + "' (expected uniform|engineered)");
}

CouplingModel parse_coupling_model(std::string_view s) {
  if (s == "xx") return CouplingModel::XX;
  if (s == "heisenberg") return CouplingModel::Heisenberg;
  fail(ErrorKind::Argument, "unknown coupling model '" + std::string(s) + "' (expected xx|heisenberg)");
}

void NetworkSpec::validate() const {
  if (n < 2) fail(ErrorKind::Argument, "network size n must be >= 2, got " + std::to_string(n));
  // A two-node ring would double-count its single bond.
  if (topology == Topology::Ring && n < 3)
    fail(ErrorKind::Argument, "ring needs n >= 3, got " + std::to_string(n));
  if (coupling_profile == CouplingProfile::Engineered && topology != Topology::Chain)
    fail(ErrorKind::Unsupported, "engineered coupling profile is only defined for chains");
  if (bias) {
    if (bias->node < 1 || bias->node > n)
      fail(ErrorKind::Argument, "bias node " + std::to_string(bias->node) + " outside [1, " +
                                    std::to_string(n) + "]");
    if (!std::isfinite(bias->magnitude)) fail(ErrorKind::Argument, "bias magnitude must be finite");
  }
}

std::string NetworkSpec::label() const {
  std::ostringstream os;
  os << to_string(topology) << "_n" << n << '_' << to_string(coupling_profile) << '_'
     << to_string(coupling_model);
  if (bias) os << "_b" << bias->magnitude << "at" << bias->node;
  return os.str();
}

nlohmann::json to_json(const NetworkSpec& spec) {
  nlohmann::json j;
  j["topology"] = to_string(spec.topology);
  j["n"] = spec.n;
  j["coupling_profile"] = to_string(spec.coupling_profile);
  j["coupling_model"] = to_string(spec.coupling_model);
  if (spec.bias)
    j["bias"] = {{"node", spec.bias->node}, {"magnitude", spec.bias->magnitude}};
  else
    j["bias"] = nullptr;
  return j;
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) fail(ErrorKind::Parse, "unknown field '" + key + "' in " + where);
}

const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorKind::Parse, std::string("missing field '") + key + "' in " + where);
  return *it;
}

}  // namespace

NetworkSpec network_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::Parse, "network spec must be a JSON object");
  reject_unknown(j, {"topology", "n", "coupling_profile", "coupling_model", "bias"}, "network spec");
  NetworkSpec spec;
  try {
    spec.topology = parse_topology(require(j, "topology", "network spec").get<std::string>());
    const auto& n = require(j, "n", "network spec");
    if (!n.is_number_integer()) fail(ErrorKind::Parse, "field 'n' must be an integer");
    spec.n = n.get<int>();
    if (auto it = j.find("coupling_profile"); it != j.end())
      spec.coupling_profile = parse_coupling_profile(it->get<std::string>());
    if (auto it = j.find("coupling_model"); it != j.end())
      spec.coupling_model = parse_coupling_model(it->get<std::string>());
    if (auto it = j.find("bias"); it != j.end() && !it->is_null()) {
      reject_unknown(*it, {"node", "magnitude"}, "bias");
      const auto& node = require(*it, "node", "bias");
      if (!node.is_number_integer()) fail(ErrorKind::Parse, "field 'bias.node' must be an integer");
      spec.bias = Bias{node.get<int>(), require(*it, "magnitude", "bias").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("network spec: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Argument) fail(ErrorKind::Parse, e.what());
    throw;
  }
  return spec;
}

double engineered_coupling(int k, int n) {
  if (n < 2 || k < 1 || k > n - 1)
    fail(ErrorKind::Argument, "engineered coupling index k=" + std::to_string(k) +
                                  " outside [1, " + std::to_string(n - 1) + "]");
  return 0.5 * std::sqrt(static_cast<double>(k) * static_cast<double>(n - k));
}

Hamiltonian Hamiltonian::from_matrix(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1)
    fail(ErrorKind::Argument, "Hamiltonian must be a non-empty square matrix");
  for (Eigen::Index i = 0; i < entries.rows(); ++i)
    for (Eigen::Index j = i + 1; j < entries.cols(); ++j)
      if (entries(i, j) != entries(j, i))
        fail(ErrorKind::Argument, "Hamiltonian is not exactly symmetric");
  if (!entries.allFinite()) fail(ErrorKind::Argument, "Hamiltonian has non-finite entries");
  return Hamiltonian(std::move(entries));
}

Hamiltonian Hamiltonian::affine(double scale, double shift) const {
  Eigen::MatrixXd out = scale * entries_;
  out.diagonal().array() += shift;
  return Hamiltonian(std::move(out));
}

Hamiltonian build_network(const NetworkSpec& spec) {
  spec.validate();
  const int n = spec.n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);

  auto couple = [&h](int a, int b, double j) {
    h(a, b) = j;
    h(b, a) = j;
  };
  for (int k = 1; k <= n - 1; ++k) {
    const double j = spec.coupling_profile == CouplingProfile::Engineered ? engineered_coupling(k, n) : 1.0;
    couple(k - 1, k, j);
  }
  if (spec.topology == Topology::Ring) couple(0, n - 1, 1.0);

  if (spec.coupling_model == CouplingModel::Heisenberg) {
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) row += h(i, j);
      h(i, i) = -row;
    }
  }
  if (spec.bias) h(spec.bias->node - 1, spec.bias->node - 1) += spec.bias->magnitude;
  return Hamiltonian(std::move(h));
}

}  // namespace spinmf
