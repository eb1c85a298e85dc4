#pragma once

#include <span>
#include <vector>

#include "sim/core.hpp"

namespace sim {

struct GalleryEdge {
    std::size_t neighbor;
    double weight;

    bool operator==(const GalleryEdge&) const = default;
};

/// Pruned intra-gallery edges: every node keeps the same number of edges,
/// its self-edge (weight 0) first, then its nearest gallery neighbors.
class GalleryAdjacency {
public:
    GalleryAdjacency() = default;
    GalleryAdjacency(std::size_t n_nodes, std::size_t degree, std::vector<GalleryEdge> edges);

    std::size_t n_nodes() const noexcept { return n_nodes_; }
    std::size_t degree() const noexcept { return degree_; }
    std::span<const GalleryEdge> of(std::size_t node) const {
        return {edges_.data() + node * degree_, degree_};
    }

private:
    std::size_t n_nodes_ = 0;
    std::size_t degree_ = 0;
    std::vector<GalleryEdge> edges_;
};

/// Keeps, for every gallery node j, the min(prune_k, N_g) edges to its
/// nearest gallery neighbors (self first, then ascending distance with ties
/// by index), weighted lambda * D_gg.
GalleryAdjacency build_gallery_edges(const DistanceMatrix& dgg, double lambda, std::size_t prune_k);

struct SimilarityGraph {
    std::size_t n_query = 0;
    std::size_t n_gallery = 0;
    /// Query-gallery edges, equal to D_qg.
    Matrix<double> cross_edges;
    GalleryAdjacency gallery_edges;
};

struct SgrMatrix {
    Matrix<double> values;
};

/// Throws if dqg's column registry differs from dgg's.
SimilarityGraph build_graph(const DistanceMatrix& dqg, const DistanceMatrix& dgg,
                            const SimParams& p);

/// Mean of the big_k cheapest query -> g_t -> g_j paths, g_t ranging over
/// g_j's pruned neighbors. Candidate costs are sorted by (cost, g_t index).
SgrMatrix sgr_distances(const SimilarityGraph& g, const SimParams& p);

/// Same computation on the raw graph parts. Exposed so the gallery side can
/// be built once and reused for new queries.
SgrMatrix sgr_distances(const Matrix<double>& cross_edges, const GalleryAdjacency& adjacency,
                        std::size_t big_k);

/// True shortest-path cost from each query to each gallery node on the
/// unpruned graph (all gallery-gallery edges, any number of hops), by
/// Dijkstra. Test oracle for the single-intermediate simplification.
Matrix<double> oracle_shortest_path(const DistanceMatrix& dqg, const DistanceMatrix& dgg,
                                    double lambda);

}  // namespace sim
