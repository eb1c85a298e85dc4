#include "sim/sgr.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "sim/distance.hpp"
#include "sim/parallel.hpp"

namespace sim {

GalleryAdjacency::GalleryAdjacency(std::size_t n_nodes, std::size_t degree,
                                   std::vector<GalleryEdge> edges)
    : n_nodes_(n_nodes), degree_(degree), edges_(std::move(edges)) {
    if (edges_.size() != n_nodes_ * degree_) throw Error("adjacency size does not match shape");
}

GalleryAdjacency build_gallery_edges(const DistanceMatrix& dgg, double lambda,
                                     std::size_t prune_k) {
    if (!dgg.is_self()) throw Error("gallery-gallery matrix must share row and column registries");
    const std::size_t n = dgg.n_rows();
    const std::size_t degree = std::min(prune_k, n);
    std::vector<GalleryEdge> edges(n * degree);
    parallel_for(n, [&](std::size_t j) {
        // D_gg is symmetric, so column j equals row j.
        const auto nearest = k_nearest_with_self(dgg.values().row(j), j, degree);
        for (std::size_t e = 0; e < degree; ++e) {
            const std::size_t t = nearest[e];
            edges[j * degree + e] = GalleryEdge{t, lambda * dgg(t, j)};
        }
    });
    return GalleryAdjacency(n, degree, std::move(edges));
}

SimilarityGraph build_graph(const DistanceMatrix& dqg, const DistanceMatrix& dgg,
                            const SimParams& p) {
    if (dqg.cols() != dgg.rows()) {
        throw Error("registry mismatch: D_qg columns and D_gg rows describe different galleries");
    }
    return SimilarityGraph{dqg.n_rows(), dqg.n_cols(), dqg.values(),
                           build_gallery_edges(dgg, p.lambda, p.effective_prune_k())};
}

SgrMatrix sgr_distances(const Matrix<double>& cross_edges, const GalleryAdjacency& adjacency,
                        std::size_t big_k) {
    if (cross_edges.cols() != adjacency.n_nodes()) {
        throw Error("cross edges and gallery adjacency disagree on gallery size");
    }
    if (big_k == 0 || big_k > adjacency.degree()) {
        throw Error("fewer candidate paths (" + std::to_string(adjacency.degree()) +
                    ") than bigK (" + std::to_string(big_k) + ")");
    }
    const std::size_t n_q = cross_edges.rows();
    const std::size_t n_g = cross_edges.cols();
    Matrix<double> out(n_q, n_g);
    parallel_for(n_q, [&](std::size_t i) {
        const auto cross = cross_edges.row(i);
        std::vector<std::pair<double, std::size_t>> paths(adjacency.degree());
        auto row = out.row(i);
        for (std::size_t j = 0; j < n_g; ++j) {
            const auto adj = adjacency.of(j);
            for (std::size_t e = 0; e < adj.size(); ++e) {
                paths[e] = {cross[adj[e].neighbor] + adj[e].weight, adj[e].neighbor};
            }
            std::partial_sort(paths.begin(), paths.begin() + static_cast<std::ptrdiff_t>(big_k),
                              paths.end());
            double sum = 0.0;
            for (std::size_t k = 0; k < big_k; ++k) sum += paths[k].first;
            row[j] = sum / static_cast<double>(big_k);
        }
    });
    return SgrMatrix{std::move(out)};
}

SgrMatrix sgr_distances(const SimilarityGraph& g, const SimParams& p) {
    return sgr_distances(g.cross_edges, g.gallery_edges, p.big_k);
}

Matrix<double> oracle_shortest_path(const DistanceMatrix& dqg, const DistanceMatrix& dgg,
                                    double lambda) {
    if (dqg.cols() != dgg.rows()) throw Error("registry mismatch between D_qg and D_gg");
    const std::size_t n_q = dqg.n_rows();
    const std::size_t n_g = dqg.n_cols();
    Matrix<double> out(n_q, n_g);
    using Entry = std::pair<double, std::size_t>;
    for (std::size_t i = 0; i < n_q; ++i) {
        std::vector<double> dist(n_g, std::numeric_limits<double>::infinity());
        std::vector<bool> done(n_g, false);
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
        // The query node only has cross edges, so relax them first.
        for (std::size_t t = 0; t < n_g; ++t) {
            dist[t] = dqg(i, t);
            frontier.emplace(dist[t], t);
        }
        while (!frontier.empty()) {
            const auto [d, u] = frontier.top();
            frontier.pop();
            if (done[u]) continue;
            done[u] = true;
            for (std::size_t v = 0; v < n_g; ++v) {
                const double nd = d + lambda * dgg(u, v);
                if (!done[v] && nd < dist[v]) {
                    dist[v] = nd;
                    frontier.emplace(nd, v);
                }
            }
        }
        std::copy(dist.begin(), dist.end(), out.row(i).begin());
    }
    return out;
}

}  // namespace sim
