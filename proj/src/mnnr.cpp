#include "sim/mnnr.hpp"

#include <algorithm>
#include <iterator>

#include "sim/distance.hpp"
#include "sim/parallel.hpp"

namespace sim {

namespace {

bool contains(const std::vector<std::size_t>& sorted, std::size_t x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::size_t intersection_size(const std::vector<std::size_t>& a,
                              const std::vector<std::size_t>& b) {
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

// Sorted knn lists (self included) of every gallery node.
std::vector<std::vector<std::size_t>> sorted_knn(const DistanceMatrix& dgg, std::size_t k) {
    std::vector<std::vector<std::size_t>> out(dgg.n_rows());
    parallel_for(dgg.n_rows(), [&](std::size_t g) {
        auto nn = k_nearest_with_self(dgg.values().row(g), g, k);
        std::sort(nn.begin(), nn.end());
        out[g] = std::move(nn);
    });
    return out;
}

std::vector<std::vector<std::size_t>> mutual_sets(const std::vector<std::vector<std::size_t>>& knn) {
    std::vector<std::vector<std::size_t>> out(knn.size());
    parallel_for(knn.size(), [&](std::size_t g) {
        for (std::size_t x : knn[g]) {
            if (contains(knn[x], g)) out[g].push_back(x);
        }
    });
    return out;
}

}  // namespace

std::vector<NeighborSet> cross_knn(const Matrix<double>& distances, std::size_t k_q) {
    if (k_q == 0 || k_q > distances.cols()) {
        throw ParamError("k_q out of range", std::to_string(k_q) + " with " +
                                                 std::to_string(distances.cols()) +
                                                 " gallery items");
    }
    std::vector<NeighborSet> out(distances.rows());
    parallel_for(distances.rows(), [&](std::size_t i) {
        auto nn = k_smallest(distances.row(i), k_q);
        std::sort(nn.begin(), nn.end());
        out[i] = NeighborSet{i, std::move(nn)};
    });
    return out;
}

std::vector<NeighborSet> cross_knn(const SgrMatrix& ds, std::size_t k_q) {
    return cross_knn(ds.values, k_q);
}

std::vector<NeighborSet> reciprocal_neighbors(const DistanceMatrix& dgg, std::size_t k_g,
                                              bool expand) {
    if (!dgg.is_self()) throw Error("gallery-gallery matrix must share row and column registries");
    const std::size_t n = dgg.n_rows();
    if (k_g == 0 || k_g > n) {
        throw ParamError("k_g out of range",
                         std::to_string(k_g) + " with " + std::to_string(n) + " gallery items");
    }
    const auto base = mutual_sets(sorted_knn(dgg, k_g));
    std::vector<NeighborSet> out(n);
    if (!expand) {
        for (std::size_t g = 0; g < n; ++g) out[g] = NeighborSet{g, base[g]};
        return out;
    }
    const auto half = mutual_sets(sorted_knn(dgg, (k_g + 1) / 2));
    parallel_for(n, [&](std::size_t g) {
        std::vector<std::size_t> expanded = base[g];
        for (std::size_t x : base[g]) {
            const auto& candidate = half[x];
            if (3 * intersection_size(candidate, base[g]) >= 2 * candidate.size()) {
                std::vector<std::size_t> merged;
                std::set_union(expanded.begin(), expanded.end(), candidate.begin(),
                               candidate.end(), std::back_inserter(merged));
                expanded = std::move(merged);
            }
        }
        out[g] = NeighborSet{g, std::move(expanded)};
    });
    return out;
}

MnnrMatrix mnnr_distances(std::span<const NeighborSet> nc, std::span<const NeighborSet> rstar) {
    const std::size_t n_g = rstar.size();
    for (const auto& set : nc) {
        if (!set.members.empty() && set.members.back() >= n_g) {
            throw Error("cross neighbor set refers to gallery position outside the gallery");
        }
    }
    for (const auto& set : rstar) {
        if (!set.members.empty() && set.members.back() >= n_g) {
            throw Error("reciprocal set refers to gallery position outside the gallery");
        }
    }
    Matrix<double> out(nc.size(), n_g);
    parallel_for(nc.size(), [&](std::size_t i) {
        std::vector<char> in_query_set(n_g, 0);
        for (std::size_t m : nc[i].members) in_query_set[m] = 1;
        const std::size_t nq = nc[i].members.size();
        auto row = out.row(i);
        for (std::size_t j = 0; j < n_g; ++j) {
            std::size_t inter = 0;
            for (std::size_t m : rstar[j].members) inter += static_cast<std::size_t>(in_query_set[m]);
            const std::size_t uni = nq + rstar[j].members.size() - inter;
            row[j] = uni == 0 ? 0.0
                              : 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
        }
    });
    return MnnrMatrix{std::move(out)};
}

}  // namespace sim
