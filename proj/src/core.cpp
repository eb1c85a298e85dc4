#include "sim/core.hpp"

#include <cmath>
#include <unordered_set>

namespace sim {

const char* to_string(Modality m) noexcept {
    return m == Modality::IR ? "IR" : "RGB";
}

Modality parse_modality(const std::string& s) {
    if (s == "IR") return Modality::IR;
    if (s == "RGB") return Modality::RGB;
    throw Error("unknown modality '" + s + "' (expected IR or RGB)");
}

Registry default_registry(std::size_t n, Modality modality) {
    Registry reg(n);
    for (std::size_t i = 0; i < n; ++i) {
        reg[i] = SampleId{i, static_cast<std::int64_t>(i), modality, std::nullopt};
    }
    return reg;
}

void validate_registry(const Registry& reg, const char* what) {
    std::unordered_set<std::size_t> seen;
    seen.reserve(reg.size());
    for (const auto& s : reg) {
        if (!seen.insert(s.index).second) {
            throw Error(std::string(what) + ": duplicate sample index " + std::to_string(s.index));
        }
        if (s.modality != reg.front().modality) {
            throw Error(std::string(what) + ": mixed modalities in one sample set");
        }
    }
}

EmbeddingSet::EmbeddingSet(std::size_t dim, Registry samples, std::vector<double> vectors)
    : dim_(dim), samples_(std::move(samples)), vectors_(std::move(vectors)) {
    if (dim_ == 0) throw Error("embedding dim must be positive");
    if (vectors_.size() != samples_.size() * dim_) {
        throw Error("embedding payload has " + std::to_string(vectors_.size()) +
                    " values, expected " + std::to_string(samples_.size() * dim_));
    }
    for (double v : vectors_) {
        if (!std::isfinite(v)) throw Error("embedding contains a non-finite value");
    }
    validate_registry(samples_, "embedding registry");
}

EmbeddingSet EmbeddingSet::normalized() const {
    std::vector<double> out(vectors_);
    for (std::size_t i = 0; i < size(); ++i) {
        double sq = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) sq += out[i * dim_ + d] * out[i * dim_ + d];
        if (sq > 0.0) {
            const double inv = 1.0 / std::sqrt(sq);
            for (std::size_t d = 0; d < dim_; ++d) out[i * dim_ + d] *= inv;
        }
    }
    return EmbeddingSet(dim_, samples_, std::move(out));
}

EmbeddingSet EmbeddingSet::subset(std::span<const std::size_t> rows) const {
    Registry reg;
    std::vector<double> out;
    reg.reserve(rows.size());
    out.reserve(rows.size() * dim_);
    for (std::size_t r : rows) {
        reg.push_back(samples_.at(r));
        auto v = vector(r);
        out.insert(out.end(), v.begin(), v.end());
    }
    return EmbeddingSet(dim_, std::move(reg), std::move(out));
}

DistanceMatrix::DistanceMatrix(Registry rows, Registry cols, Matrix<double> values)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)) {
    if (values_.rows() != rows_.size() || values_.cols() != cols_.size()) {
        throw Error("distance matrix shape " + std::to_string(values_.rows()) + "x" +
                    std::to_string(values_.cols()) + " does not match registries " +
                    std::to_string(rows_.size()) + "x" + std::to_string(cols_.size()));
    }
    for (double v : values_.data()) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error("distance matrix contains a negative or non-finite value");
        }
    }
    validate_registry(rows_, "row registry");
    validate_registry(cols_, "column registry");
    self_ = rows_ == cols_;
    if (self_) {
        const std::size_t n = values_.rows();
        for (std::size_t i = 0; i < n; ++i) {
            if (values_(i, i) != 0.0) throw Error("self-distance matrix has a nonzero diagonal");
            for (std::size_t j = i + 1; j < n; ++j) {
                if (values_(i, j) != values_(j, i)) {
                    throw Error("self-distance matrix is not symmetric");
                }
            }
        }
    }
}

DistanceMatrix DistanceMatrix::slice(std::span<const std::size_t> rows,
                                     std::span<const std::size_t> cols) const {
    Registry r, c;
    r.reserve(rows.size());
    c.reserve(cols.size());
    for (auto i : rows) r.push_back(rows_.at(i));
    for (auto j : cols) c.push_back(cols_.at(j));
    Matrix<double> v(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < cols.size(); ++b) v(a, b) = values_(rows[a], cols[b]);
    }
    return DistanceMatrix(std::move(r), std::move(c), std::move(v));
}

std::optional<Triple> triangle_violation(const Matrix<double>& d, double tol) {
    const std::size_t n = d.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t t = 0; t < n; ++t)
                if (d(i, j) + d(j, t) < d(i, t) - tol) return Triple{i, j, t};
    return std::nullopt;
}

SimParams validate_params(const SimParams& p, std::size_t n_gallery) {
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(p.lambda)) throw ParamError("lambda outside [0,1]", std::to_string(p.lambda));
    if (!in_unit(p.alpha)) throw ParamError("alpha outside [0,1]", std::to_string(p.alpha));
    if (p.big_k == 0) throw ParamError("bigK must be positive", "");
    if (p.k_q == 0) throw ParamError("k_q must be positive", "");
    if (p.k_g == 0) throw ParamError("k_g must be positive", "");
    const std::size_t prune = p.effective_prune_k();
    if (prune == 0) throw ParamError("prune_k must be positive", "");
    if (p.big_k > prune) {
        throw ParamError("bigK exceeds prune_k",
                         std::to_string(p.big_k) + " > " + std::to_string(prune));
    }
    if (n_gallery == 0) throw ParamError("gallery is empty", "");
    if (p.big_k > n_gallery) {
        throw ParamError("bigK exceeds gallery size",
                         std::to_string(p.big_k) + " > " + std::to_string(n_gallery));
    }
    if (p.k_q > n_gallery) {
        throw ParamError("k_q exceeds gallery size",
                         std::to_string(p.k_q) + " > " + std::to_string(n_gallery));
    }
    if (p.k_g > n_gallery) {
        throw ParamError("k_g exceeds gallery size",
                         std::to_string(p.k_g) + " > " + std::to_string(n_gallery));
    }
    SimParams out = p;
    out.prune_k = prune;
    return out;
}

}  // namespace sim
