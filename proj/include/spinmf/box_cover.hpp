#pragma once

// Greedy box covering of a weighted complete graph.
//
// A ball B_k(eps) is every node within one hop of k at distance <= eps.
// Boxes are disjoint: each node belongs to exactly one box, and every
// member lies within eps of its box centre.

#include "spinmf/itf_metric.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace spinmf {

enum class RadiusSource { AllUnique, QuantileSubsample };

struct RadiusGrid {
  std::vector<double> radii;  // strictly increasing, > 0
  RadiusSource source = RadiusSource::AllUnique;
};

inline constexpr double kRadiusMergeRelTol = 1e-10;

/// Unique positive finite distances, ascending. Distances that agree to
/// kRadiusMergeRelTol count as one value. With a limit, exactly
/// `max_points` radii spread log-uniformly between the extremes.
/// Throws Degenerate when no positive distance exists.
RadiusGrid radius_grid(const DistanceMatrix& dm, std::optional<std::size_t> max_points = std::nullopt);

/// Sorted node set, centre included.
std::vector<int> ball(const DistanceMatrix& dm, int center, double eps);

struct Box {
  int center = 0;
  std::vector<int> members;  // ascending
};

struct BoxCovering {
  double radius = 0.0;
  std::vector<Box> boxes;
  std::vector<int> assignment;  // node -> box index

  std::size_t box_count() const { return boxes.size(); }
};

/// Threshold graph at eps, components in descending size (ties: smallest
/// node). Inside a component the next centre is the uncovered node whose
/// ball holds the most uncovered nodes (ties: smallest index); the box takes
/// exactly those uncovered nodes.
BoxCovering greedy_cover(const DistanceMatrix& dm, double eps);

/// Greedy coverings for every radius of the grid with the box count forced
/// non-increasing: where greedy at eps_i needs more boxes than the covering
/// kept at eps_{i-1}, that covering is reused (it stays feasible at eps_i).
std::vector<BoxCovering> cover_grid(const DistanceMatrix& dm, const RadiusGrid& grid, int workers = 1);

/// Throws Argument unless the covering is a disjoint, exhaustive,
/// radius-feasible partition of dm's nodes.
void validate_covering(const DistanceMatrix& dm, const BoxCovering& cover);

struct BoxMeasures {
  double radius = 0.0;
  std::vector<double> measures;  // one per box, same order
};

/// Node-counting measure |box| / n.
BoxMeasures box_measures(const BoxCovering& cover, int n);

/// Weighted node measure: sum of member weights. Weights must be positive
/// and sum to 1.
BoxMeasures box_measures(const BoxCovering& cover, const std::vector<double>& node_weights);

inline constexpr int kExactCoverMaxNodes = 15;

/// Minimum number of node-centred eps-balls covering every node, by
/// exhaustive search. Refuses (Argument) above kExactCoverMaxNodes.
int exact_min_cover(const DistanceMatrix& dm, double eps);

/// [{radius, box_count, box_sizes}, ...]
nlohmann::json coverings_to_json(const std::vector<BoxCovering>& covers);

}  // namespace spinmf
