#pragma once

#include <vector>

#include "sim/core.hpp"
#include "sim/mnnr.hpp"
#include "sim/sgr.hpp"

namespace sim {

/// Per-query gallery positions, best first.
using Rankings = std::vector<std::vector<std::size_t>>;

struct SimResult {
    Matrix<double> d_sim;
    /// The SGR term as blended (min-max normalized per query when
    /// params.normalize_sgr is set).
    SgrMatrix d_s;
    MnnrMatrix d_m;
    SimParams params;
    Rankings rankings;
};

/// Everything SIM needs from the gallery alone: pruned gallery edges and
/// reciprocal neighbor sets. Build once, then rerank any number of query
/// batches against it.
class GalleryIndex {
public:
    /// Validates `p` against the gallery size.
    GalleryIndex(const DistanceMatrix& dgg, const SimParams& p);

    const SimParams& params() const noexcept { return params_; }
    const Registry& registry() const noexcept { return registry_; }
    std::size_t size() const noexcept { return registry_.size(); }
    const GalleryAdjacency& adjacency() const noexcept { return adjacency_; }
    const std::vector<NeighborSet>& reciprocal() const noexcept { return reciprocal_; }

private:
    SimParams params_;
    Registry registry_;
    GalleryAdjacency adjacency_;
    std::vector<NeighborSet> reciprocal_;
};

/// SGR, MNNR and their blend for a batch of queries.
SimResult rerank(const GalleryIndex& gallery, const DistanceMatrix& dqg);

/// Full pipeline: GalleryIndex(dgg, p) followed by rerank(dqg).
SimResult run_sim(const DistanceMatrix& dqg, const DistanceMatrix& dgg, const SimParams& p);

/// Ranks by raw D_qg.
SimResult run_baseline(const DistanceMatrix& dqg);

/// Argsort of every row, ascending, ties by position.
Rankings rank_rows(const Matrix<double>& d);

}  // namespace sim
