#include "sim/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "sim/parallel.hpp"

namespace sim {

namespace {

void normalize_rows(Matrix<double>& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        if (row.empty()) continue;
        const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
        const double min = *lo;
        const double span = *hi - *lo;
        for (double& v : row) v = span > 0.0 ? (v - min) / span : 0.0;
    }
}

}  // namespace

GalleryIndex::GalleryIndex(const DistanceMatrix& dgg, const SimParams& p)
    : params_(validate_params(p, dgg.n_rows()))
    , registry_(dgg.rows())
    , adjacency_(build_gallery_edges(dgg, params_.lambda, params_.effective_prune_k()))
    , reciprocal_(reciprocal_neighbors(dgg, params_.k_g, params_.expand_reciprocal)) {}

SimResult rerank(const GalleryIndex& gallery, const DistanceMatrix& dqg) {
    if (dqg.cols() != gallery.registry()) {
        throw Error("registry mismatch: D_qg columns do not match the indexed gallery");
    }
    const SimParams& p = gallery.params();
    SgrMatrix d_s = sgr_distances(dqg.values(), gallery.adjacency(), p.big_k);

    const auto nc = p.knn_source == KnnSource::Sgr ? cross_knn(d_s, p.k_q)
                                                   : cross_knn(dqg.values(), p.k_q);
    MnnrMatrix d_m = mnnr_distances(nc, gallery.reciprocal());

    if (p.normalize_sgr) normalize_rows(d_s.values);

    Matrix<double> d_sim(dqg.n_rows(), dqg.n_cols());
    const double a = p.alpha;
    const double b = 1.0 - p.alpha;
    const auto s = d_s.values.data();
    const auto m = d_m.values.data();
    auto out = d_sim.data();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * s[k] + b * m[k];

    Rankings rankings = rank_rows(d_sim);
    return SimResult{std::move(d_sim), std::move(d_s), std::move(d_m), p, std::move(rankings)};
}

SimResult run_sim(const DistanceMatrix& dqg, const DistanceMatrix& dgg, const SimParams& p) {
    if (dqg.cols() != dgg.rows()) {
        throw Error("registry mismatch: D_qg columns and D_gg rows describe different galleries");
    }
    return rerank(GalleryIndex(dgg, p), dqg);
}

SimResult run_baseline(const DistanceMatrix& dqg) {
    SimParams p;
    p.lambda = 0.0;
    p.big_k = 1;
    p.prune_k = 1;
    p.alpha = 1.0;
    p.k_q = 1;
    p.k_g = 1;
    Matrix<double> d = dqg.values();
    Rankings rankings = rank_rows(d);
    return SimResult{d, SgrMatrix{d}, MnnrMatrix{Matrix<double>(d.rows(), d.cols())}, p,
                     std::move(rankings)};
}

Rankings rank_rows(const Matrix<double>& d) {
    Rankings out(d.rows());
    parallel_for(d.rows(), [&](std::size_t i) {
        const auto row = d.row(i);
        std::vector<std::size_t> idx(row.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return row[x] < row[y] || (row[x] == row[y] && x < y);
        });
        out[i] = std::move(idx);
    });
    return out;
}

}  // namespace sim
