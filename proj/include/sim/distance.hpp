#pragma once

#include "sim/core.hpp"

namespace sim {

/// Euclidean distances between every row of `a` and every row of `b`,
/// accumulated in double precision. Throws on dimension mismatch.
DistanceMatrix pairwise_l2(const EmbeddingSet& a, const EmbeddingSet& b);

/// Gallery-gallery distances: pairwise_l2(g, g) with an exact zero diagonal
/// and symmetry enforced by averaging with the transpose.
DistanceMatrix self_distances(const EmbeddingSet& g);

}  // namespace sim

#include <span>
#include <vector>

namespace sim {

/// Positions of the `k` smallest values, ordered by (value, position).
std::vector<std::size_t> k_smallest(std::span<const double> values, std::size_t k);

/// Like k_smallest, but position `self` always comes first and the remaining
/// k-1 are chosen among the other positions.
std::vector<std::size_t> k_nearest_with_self(std::span<const double> values, std::size_t self,
                                             std::size_t k);

}  // namespace sim
