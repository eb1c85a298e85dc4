#pragma once

#include <span>
#include <vector>

#include "sim/core.hpp"
#include "sim/sgr.hpp"

namespace sim {

/// Neighbors of one node, as gallery positions in ascending order.
struct NeighborSet {
    std::size_t owner = 0;
    std::vector<std::size_t> members;

    bool operator==(const NeighborSet&) const = default;
};

struct MnnrMatrix {
    Matrix<double> values;
};

/// N_c: for each query row, the k_q gallery positions with the smallest
/// distance (ties by ascending position).
std::vector<NeighborSet> cross_knn(const Matrix<double>& distances, std::size_t k_q);
std::vector<NeighborSet> cross_knn(const SgrMatrix& ds, std::size_t k_q);

/// R*: k_g-reciprocal neighbors of every gallery node. knn lists include
/// the node itself first. With `expand`, each member x contributes its
/// ceil(k_g/2)-reciprocal set when at least two thirds of that set already
/// lies in the base set.
std::vector<NeighborSet> reciprocal_neighbors(const DistanceMatrix& dgg, std::size_t k_g,
                                              bool expand);

/// d_M(i, j) = 1 - |N_c(i) ∩ R*(j)| / |N_c(i) ∪ R*(j)|.
MnnrMatrix mnnr_distances(std::span<const NeighborSet> nc, std::span<const NeighborSet> rstar);

}  // namespace sim
