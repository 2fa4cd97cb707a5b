#include "spinmf/box_cover.hpp"

#include "spinmf/error.hpp"
#include "spinmf/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace spinmf {

RadiusGrid radius_grid(const DistanceMatrix& dm, std::optional<std::size_t> max_points) {
  const int n = dm.n();
  std::vector<double> unique;
  unique.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = dm.d(i, j);
      if (d > 0.0 && std::isfinite(d)) unique.push_back(d);
    }
  std::sort(unique.begin(), unique.end());
  // Values within kRadiusMergeRelTol of each other are one radius, kept at
  // the cluster's largest member so no ball loses a node.
  std::size_t kept = 0;
  for (std::size_t k = 0; k < unique.size(); ++k) {
    if (kept > 0 && unique[k] <= unique[kept - 1] * (1.0 + kRadiusMergeRelTol))
      unique[kept - 1] = unique[k];
    else
      unique[kept++] = unique[k];
  }
  unique.resize(kept);
  if (unique.empty()) fail(ErrorKind::Degenerate, "distance matrix has no positive finite distance");

  RadiusGrid grid;
  if (!max_points || unique.size() <= *max_points) {
    grid.radii = std::move(unique);
    return grid;
  }
  const std::size_t m = *max_points;
  if (m < 2) fail(ErrorKind::Argument, "max_points must be >= 2");

  // Log-uniform targets. Each target takes the nearest unique value, pushed
  // forward to stay strictly increasing and held back so every remaining
  // target still gets its own value.
  const std::size_t u = unique.size();
  const double lo = std::log(unique.front()), hi = std::log(unique.back());
  std::vector<std::size_t> picks;
  picks.reserve(m);
  for (std::size_t t = 0; t < m; ++t) {
    const double target = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(m - 1);
    auto it = std::lower_bound(unique.begin(), unique.end(), std::exp(target));
    std::size_t idx = static_cast<std::size_t>(it - unique.begin());
    if (idx == u || (idx > 0 && target - std::log(unique[idx - 1]) < std::log(unique[idx]) - target)) --idx;
    if (!picks.empty()) idx = std::max(idx, picks.back() + 1);
    idx = std::min(idx, u - (m - t));
    picks.push_back(idx);
  }
  picks.back() = u - 1;
  grid.source = RadiusSource::QuantileSubsample;
  for (std::size_t idx : picks) grid.radii.push_back(unique[idx]);
  return grid;
}

std::vector<int> ball(const DistanceMatrix& dm, int center, double eps) {
  if (center < 0 || center >= dm.n()) fail(ErrorKind::Argument, "ball centre outside the graph");
  if (!(eps >= 0.0)) fail(ErrorKind::Argument, "ball radius must be >= 0");
  std::vector<int> out;
  for (int w = 0; w < dm.n(); ++w)
    if (w == center || dm.d(center, w) <= eps) out.push_back(w);
  return out;
}

BoxCovering greedy_cover(const DistanceMatrix& dm, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::Argument, "covering radius must be > 0");
  const int n = dm.n();

  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dm.d(i, j) <= eps) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }

  // Connected components of the threshold graph, nodes ascending in each.
  std::vector<std::vector<int>> components;
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (int w : adj[comp[head]])
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  BoxCovering cover;
  cover.radius = eps;
  cover.assignment.assign(n, -1);
  // gain[v] = number of uncovered nodes in B_v(eps).
  std::vector<int> gain(n);
  for (int v = 0; v < n; ++v) gain[v] = static_cast<int>(adj[v].size()) + 1;

  for (const auto& comp : components) {
    std::size_t remaining = comp.size();
    while (remaining > 0) {
      int best = -1;
      for (int v : comp)
        if (cover.assignment[v] < 0 && (best < 0 || gain[v] > gain[best])) best = v;

      Box box;
      box.center = best;
      box.members.push_back(best);
      for (int w : adj[best])
        if (cover.assignment[w] < 0) box.members.push_back(w);
      std::sort(box.members.begin(), box.members.end());

      const int index = static_cast<int>(cover.boxes.size());
      for (int m : box.members) {
        cover.assignment[m] = index;
        --gain[m];
        for (int w : adj[m]) --gain[w];
      }
      remaining -= box.members.size();
      cover.boxes.push_back(std::move(box));
    }
  }
  return cover;
}

std::vector<BoxCovering> cover_grid(const DistanceMatrix& dm, const RadiusGrid& grid, int workers) {
  std::vector<BoxCovering> covers(grid.radii.size());
  parallel_for(grid.radii.size(), workers,
               [&](std::size_t r) { covers[r] = greedy_cover(dm, grid.radii[r]); });
  for (std::size_t r = 1; r < covers.size(); ++r) {
    if (covers[r].box_count() > covers[r - 1].box_count()) {
      BoxCovering kept = covers[r - 1];
      kept.radius = grid.radii[r];
      covers[r] = std::move(kept);
    }
  }
  return covers;
}

void validate_covering(const DistanceMatrix& dm, const BoxCovering& cover) {
  const int n = dm.n();
  if (cover.assignment.size() != static_cast<std::size_t>(n))
    fail(ErrorKind::Argument, "covering assignment size does not match the graph");
  std::vector<int> owner(n, -1);
  for (std::size_t b = 0; b < cover.boxes.size(); ++b) {
    const Box& box = cover.boxes[b];
    if (box.members.empty()) fail(ErrorKind::Argument, "empty box");
    for (int m : box.members) {
      if (m < 0 || m >= n) fail(ErrorKind::Argument, "box member outside the graph");
      if (owner[m] >= 0) fail(ErrorKind::Argument, "node " + std::to_string(m) + " in two boxes");
      owner[m] = static_cast<int>(b);
      if (cover.assignment[m] != static_cast<int>(b))
        fail(ErrorKind::Argument, "assignment disagrees with box membership");
      if (m != box.center && !(dm.d(box.center, m) <= cover.radius))
        fail(ErrorKind::Argument, "box member farther than the radius from its centre");
    }
  }
  for (int v = 0; v < n; ++v)
    if (owner[v] < 0) fail(ErrorKind::Argument, "node " + std::to_string(v) + " not covered");
}

BoxMeasures box_measures(const BoxCovering& cover, int n) {
  if (n < 1) fail(ErrorKind::Argument, "node count must be positive");
  BoxMeasures out;
  out.radius = cover.radius;
  out.measures.reserve(cover.boxes.size());
  for (const Box& box : cover.boxes)
    out.measures.push_back(static_cast<double>(box.members.size()) / static_cast<double>(n));
  return out;
}

BoxMeasures box_measures(const BoxCovering& cover, const std::vector<double>& node_weights) {
  if (node_weights.size() != cover.assignment.size())
    fail(ErrorKind::Argument, "one weight per node required");
  double total = 0.0;
  for (double w : node_weights) {
    if (!(w > 0.0)) fail(ErrorKind::Argument, "node weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorKind::Argument, "node weights must sum to 1");
  BoxMeasures out;
  out.radius = cover.radius;
  for (const Box& box : cover.boxes) {
    double mass = 0.0;
    for (int m : box.members) mass += node_weights[m];
    out.measures.push_back(mass);
  }
  return out;
}

int exact_min_cover(const DistanceMatrix& dm, double eps) {
  const int n = dm.n();
  if (n > kExactCoverMaxNodes)
    fail(ErrorKind::Argument, "exact_min_cover refuses n = " + std::to_string(n) + " (limit " +
                                  std::to_string(kExactCoverMaxNodes) + ")");
  if (!(eps >= 0.0)) fail(ErrorKind::Argument, "covering radius must be >= 0");
  std::vector<std::uint32_t> balls(n, 0);
  for (int c = 0; c < n; ++c)
    for (int w : ball(dm, c, eps)) balls[c] |= 1u << w;
  const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1u);

  // Depth-first over centre subsets of size k, increasing k.
  auto covers_with = [&](auto&& self, int start, int left, std::uint32_t mask) -> bool {
    if (mask == all) return true;
    if (left == 0) return false;
    for (int c = start; c < n; ++c)
      if (self(self, c + 1, left - 1, mask | balls[c])) return true;
    return false;
  };
  for (int k = 1; k <= n; ++k)
    if (covers_with(covers_with, 0, k, 0u)) return k;
  return n;
}

nlohmann::json coverings_to_json(const std::vector<BoxCovering>& covers) {
  auto out = nlohmann::json::array();
  for (const auto& c : covers) {
    auto sizes = nlohmann::json::array();
    for (const auto& b : c.boxes) sizes.push_back(b.members.size());
    out.push_back({{"radius", c.radius}, {"box_count", c.box_count()}, {"box_sizes", sizes}});
  }
  return out;
}

}  // namespace spinmf
