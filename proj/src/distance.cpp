#include "sim/distance.hpp"

#include <cmath>

#include "sim/parallel.hpp"

namespace sim {

namespace {

Matrix<double> l2_values(const EmbeddingSet& a, const EmbeddingSet& b) {
    Matrix<double> out(a.size(), b.size());
    const std::size_t dim = a.dim();
    parallel_for(a.size(), [&](std::size_t i) {
        const auto x = a.vector(i);
        auto row = out.row(i);
        for (std::size_t j = 0; j < b.size(); ++j) {
            const auto y = b.vector(j);
            double sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = x[d] - y[d];
                sq += diff * diff;
            }
            row[j] = std::sqrt(sq);
        }
    });
    return out;
}

}  // namespace

DistanceMatrix pairwise_l2(const EmbeddingSet& a, const EmbeddingSet& b) {
    if (a.dim() != b.dim()) {
        throw Error("embedding dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()));
    }
    return DistanceMatrix(a.samples(), b.samples(), l2_values(a, b));
}

DistanceMatrix self_distances(const EmbeddingSet& g) {
    Matrix<double> v = l2_values(g, g);
    const std::size_t n = v.rows();
    for (std::size_t i = 0; i < n; ++i) {
        v(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = (v(i, j) + v(j, i)) / 2.0;
            v(i, j) = s;
            v(j, i) = s;
        }
    }
    return DistanceMatrix(g.samples(), g.samples(), std::move(v));
}

}  // namespace sim

#include <algorithm>
#include <numeric>

namespace sim {

namespace {

void select_smallest(std::vector<std::size_t>& idx, std::span<const double> values, std::size_t k) {
    k = std::min(k, idx.size());
    auto less = [&](std::size_t a, std::size_t b) {
        return values[a] < values[b] || (values[a] == values[b] && a < b);
    };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), less);
    idx.resize(k);
}

}  // namespace

std::vector<std::size_t> k_smallest(std::span<const double> values, std::size_t k) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    select_smallest(idx, values, k);
    return idx;
}

std::vector<std::size_t> k_nearest_with_self(std::span<const double> values, std::size_t self,
                                             std::size_t k) {
    if (k == 0) return {};
    std::vector<std::size_t> others;
    others.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != self) others.push_back(i);
    }
    select_smallest(others, values, k - 1);
    std::vector<std::size_t> out;
    out.reserve(others.size() + 1);
    out.push_back(self);
    out.insert(out.end(), others.begin(), others.end());
    return out;
}

}  // namespace sim
