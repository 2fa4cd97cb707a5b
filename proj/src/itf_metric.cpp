#include "spinmf/itf_metric.hpp"

#include "spinmf/error.hpp"
#include "spinmf/parallel.hpp"
#include "spinmf/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <ostream>

namespace spinmf {

namespace {

void check_node(int n, int i, const char* what) {
  if (i < 0 || i >= n)
    fail(ErrorKind::Argument, std::string(what) + " index " + std::to_string(i) + " outside [0, " +
                                  std::to_string(n) + ")");
}

}  // namespace

Eigen::MatrixXd SpectralDecomposition::group(std::size_t k) const {
  const int m = multiplicity(k);
  Eigen::MatrixXd out(n_, m);
  for (int i = 0; i < n_; ++i)
    for (int c = 0; c < m; ++c) out(i, c) = packed_[static_cast<std::size_t>(i) * n_ + offsets_[k] + c];
  return out;
}

double SpectralDecomposition::projector_element(std::size_t k, int i, int j) const {
  const double* vi = packed_.data() + static_cast<std::size_t>(i) * n_;
  const double* vj = packed_.data() + static_cast<std::size_t>(j) * n_;
  double sum = 0.0;
  for (int c = offsets_[k]; c < offsets_[k + 1]; ++c) sum += vi[c] * vj[c];
  return sum;
}

double SpectralDecomposition::orthonormality_error() const {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> v(
      packed_.data(), n_, n_);
  const Eigen::MatrixXd gram = v.transpose() * v;
  return (gram - Eigen::MatrixXd::Identity(n_, n_)).cwiseAbs().maxCoeff();
}

double SpectralDecomposition::reconstruction_error(const Hamiltonian& h) const {
  if (h.n() != n_) fail(ErrorKind::Argument, "Hamiltonian dimension does not match decomposition");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> v(
      packed_.data(), n_, n_);
  Eigen::VectorXd lambda(n_);
  for (std::size_t k = 0; k < eigenvalues_.size(); ++k)
    for (int c = offsets_[k]; c < offsets_[k + 1]; ++c) lambda(c) = eigenvalues_[k];
  const Eigen::MatrixXd rebuilt = v * lambda.asDiagonal() * v.transpose();
  return (h.entries() - rebuilt).cwiseAbs().maxCoeff();
}

SpectralDecomposition spectral_decompose(const Hamiltonian& h, double degeneracy_tol) {
  if (!(degeneracy_tol > 0.0)) fail(ErrorKind::Argument, "degeneracy_tol must be > 0");
  const int n = h.n();
  if (n < 1) fail(ErrorKind::Argument, "empty Hamiltonian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::Numeric, "symmetric eigensolver failed to converge for dimension " + std::to_string(n));
  const Eigen::VectorXd& raw = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vecs = solver.eigenvectors();

  SpectralDecomposition out;
  out.n_ = n;
  out.degeneracy_tol_ = degeneracy_tol;
  const double gap_tol = degeneracy_tol * std::max(1.0, raw(n - 1) - raw(0));

  // Clusters of consecutive eigenvalues joined by gaps <= gap_tol.
  std::vector<int> starts{0};
  for (int c = 1; c < n; ++c)
    if (raw(c) - raw(c - 1) > gap_tol) starts.push_back(c);
  starts.push_back(n);

  out.packed_.assign(static_cast<std::size_t>(n) * n, 0.0);
  out.offsets_ = starts;
  for (std::size_t g = 0; g + 1 < starts.size(); ++g) {
    const int begin = starts[g];
    const int m = starts[g + 1] - begin;
    out.eigenvalues_.push_back(raw.segment(begin, m).mean());

    Eigen::MatrixXd block = vecs.middleCols(begin, m);
    if (m == 1) {
      block /= block.norm();
    } else {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
      block = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
    }
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < m; ++c) out.packed_[static_cast<std::size_t>(i) * n + begin + c] = block(i, c);
  }
  return out;
}

double itf_probability(const SpectralDecomposition& decomp, int i, int j) {
  check_node(decomp.n(), i, "source");
  check_node(decomp.n(), j, "target");
  if (i == j) return 1.0;
  // Fixed ascending-eigenvalue order; the product v[i]*v[j] is commutative,
  // so (i, j) and (j, i) give identical bits.
  double sum = 0.0;
  for (std::size_t k = 0; k < decomp.group_count(); ++k) sum += std::abs(decomp.projector_element(k, i, j));
  const double p = sum * sum;
  return p >= 1.0 - kUnitTransferTol ? 1.0 : std::max(p, 0.0);
}

double evolve_probability(const SpectralDecomposition& decomp, int i, int j, double t) {
  check_node(decomp.n(), i, "source");
  check_node(decomp.n(), j, "target");
  if (!(t >= 0.0)) fail(ErrorKind::Argument, "evolution time must be >= 0");
  std::complex<double> amp = 0.0;
  const auto& lambda = decomp.distinct_eigenvalues();
  for (std::size_t k = 0; k < decomp.group_count(); ++k)
    amp += std::polar(1.0, -lambda[k] * t) * decomp.projector_element(k, i, j);
  return std::clamp(std::norm(amp), 0.0, 1.0);
}

double evolve_probability(const Hamiltonian& h, int i, int j, double t) {
  return evolve_probability(spectral_decompose(h), i, j, t);
}

// DistanceMatrix --------------------------------------------------------------

DistanceMatrix DistanceMatrix::from_probabilities(int n, std::vector<double> p, nlohmann::json metadata) {
  if (n < 1 || p.size() != static_cast<std::size_t>(n) * n)
    fail(ErrorKind::Argument, "probability table size does not match n");
  DistanceMatrix dm;
  dm.n_ = n;
  dm.d_.assign(p.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double& pij = p[static_cast<std::size_t>(i) * n + j];
      if (i == j) {
        pij = 1.0;
        continue;
      }
      if (std::isnan(pij)) fail(ErrorKind::Numeric, "NaN transfer probability");
      pij = std::clamp(pij, kProbabilityFloor, 1.0);
      dm.d_[static_cast<std::size_t>(i) * n + j] = pij >= 1.0 ? 0.0 : -std::log(pij);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (p[static_cast<std::size_t>(i) * n + j] != p[static_cast<std::size_t>(j) * n + i])
        fail(ErrorKind::Argument, "probability table is not symmetric");
  dm.p_ = std::move(p);
  dm.metadata = std::move(metadata);
  return dm;
}

DistanceMatrix DistanceMatrix::from_distances(int n, std::vector<double> d, nlohmann::json metadata) {
  if (n < 1 || d.size() != static_cast<std::size_t>(n) * n)
    fail(ErrorKind::Argument, "distance table size does not match n");
  DistanceMatrix dm;
  dm.n_ = n;
  dm.p_.assign(d.size(), 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dij = d[static_cast<std::size_t>(i) * n + j];
      if (i == j) {
        if (dij != 0.0) fail(ErrorKind::Argument, "distance table must have a zero diagonal");
        continue;
      }
      if (!(dij >= 0.0)) fail(ErrorKind::Argument, "distances must be non-negative");
      if (dij != d[static_cast<std::size_t>(j) * n + i])
        fail(ErrorKind::Argument, "distance table is not symmetric");
      dm.p_[static_cast<std::size_t>(i) * n + j] = std::exp(-dij);
    }
  }
  dm.d_ = std::move(d);
  dm.metadata = std::move(metadata);
  return dm;
}

DistanceMatrix DistanceMatrix::restore(int n, std::vector<double> p, std::vector<double> d,
                                       nlohmann::json metadata) {
  DistanceMatrix dm = from_distances(n, std::move(d), std::move(metadata));
  if (p.size() != dm.p_.size()) fail(ErrorKind::Argument, "probability table size does not match n");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double pij = p[static_cast<std::size_t>(i) * n + j];
      if (!(pij >= 0.0 && pij <= 1.0)) fail(ErrorKind::Argument, "probabilities must lie in [0, 1]");
      if (pij != p[static_cast<std::size_t>(j) * n + i])
        fail(ErrorKind::Argument, "probability table is not symmetric");
    }
  }
  dm.p_ = std::move(p);
  return dm;
}

double DistanceMatrix::max_finite_distance() const {
  double best = 0.0;
  for (double x : d_)
    if (std::isfinite(x)) best = std::max(best, x);
  return best;
}

DistanceMatrix distance_matrix(const SpectralDecomposition& decomp, int workers) {
  const int n = decomp.n();
  std::vector<double> p(static_cast<std::size_t>(n) * n, 1.0);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = i + 1; j < n; ++j) {
      const double pij = itf_probability(decomp, i, j);
      p[static_cast<std::size_t>(i) * n + j] = pij;
      p[static_cast<std::size_t>(j) * n + i] = pij;
    }
  });
  nlohmann::json meta = {
      {"degeneracy_tol", decomp.degeneracy_tol()},
      {"distinct_eigenvalues", decomp.group_count()},
      {"probability_floor", kProbabilityFloor},
      {"unit_transfer_tol", kUnitTransferTol},
      {"log_base", "e"},
      {"bound", "(sum_k |<j|P_k|i>|)^2"},
  };
  return DistanceMatrix::from_probabilities(n, std::move(p), std::move(meta));
}

DistanceMatrix distance_matrix(const Hamiltonian& h, double degeneracy_tol, int workers) {
  return distance_matrix(spectral_decompose(h, degeneracy_tol), workers);
}

DistanceMatrix identify_zero_pairs(const DistanceMatrix& dm, double merge_tol) {
  if (!(merge_tol >= 0.0)) fail(ErrorKind::Argument, "merge_tol must be >= 0");
  const int n = dm.n();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dm.d(i, j) <= merge_tol) {
        const int a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  // Classes numbered in order of their smallest member.
  std::vector<int> class_of(n, -1), root_class(n, -1);
  int classes = 0;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_class[r] < 0) root_class[r] = classes++;
    class_of[i] = root_class[r];
  }

  std::vector<double> d(static_cast<std::size_t>(classes) * classes,
                        std::numeric_limits<double>::infinity());
  for (int a = 0; a < classes; ++a) d[static_cast<std::size_t>(a) * classes + a] = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int a = class_of[i], b = class_of[j];
      if (a == b) continue;
      double& slot = d[static_cast<std::size_t>(a) * classes + b];
      slot = std::min(slot, dm.d(i, j));
    }

  nlohmann::json meta = dm.metadata;
  auto map = nlohmann::json::array();
  for (int i = 0; i < n; ++i) map.push_back(class_of[i] + 1);
  meta["identification"] = {{"merge_tol", merge_tol}, {"original_n", n}, {"class_of_node", map}};
  return DistanceMatrix::from_distances(classes, std::move(d), std::move(meta));
}

void write_distance_csv(const DistanceMatrix& dm, std::ostream& out) {
  out << "i,j,p_max,distance\n";
  for (int i = 0; i < dm.n(); ++i)
    for (int j = i + 1; j < dm.n(); ++j)
      out << i + 1 << ',' << j + 1 << ',' << format_double(dm.p(i, j)) << ','
          << format_double(dm.d(i, j)) << '\n';
}

nlohmann::json distance_to_json(const DistanceMatrix& dm) {
  std::vector<double> p, d;
  for (int i = 0; i < dm.n(); ++i)
    for (int j = i + 1; j < dm.n(); ++j) {
      p.push_back(dm.p(i, j));
      d.push_back(dm.d(i, j));
    }
  return {{"schema_version", 1},
          {"kind", "distance_matrix"},
          {"n", dm.n()},
          {"metadata", dm.metadata},
          {"upper_triangle", {{"p_max", json_array(p)}, {"distance", json_array(d)}}}};
}

DistanceMatrix distance_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != 1)
      fail(ErrorKind::SchemaVersion, "unsupported distance matrix schema_version " +
                                         j.at("schema_version").dump());
    const int n = j.at("n").get<int>();
    if (n < 1) fail(ErrorKind::Parse, "distance matrix n must be >= 1");
    const auto p = doubles_from_json(j.at("upper_triangle").at("p_max"));
    const auto d = doubles_from_json(j.at("upper_triangle").at("distance"));
    const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (p.size() != pairs || d.size() != pairs)
      fail(ErrorKind::Parse, "upper_triangle length does not match n");
    std::vector<double> full_p(static_cast<std::size_t>(n) * n, 1.0);
    std::vector<double> full_d(static_cast<std::size_t>(n) * n, 0.0);
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b, ++idx) {
        full_p[static_cast<std::size_t>(a) * n + b] = full_p[static_cast<std::size_t>(b) * n + a] = p[idx];
        full_d[static_cast<std::size_t>(a) * n + b] = full_d[static_cast<std::size_t>(b) * n + a] = d[idx];
      }
    return DistanceMatrix::restore(n, std::move(full_p), std::move(full_d),
                                   j.value("metadata", nlohmann::json::object()));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("distance matrix JSON: ") + e.what());
  }
}

}  // namespace spinmf
