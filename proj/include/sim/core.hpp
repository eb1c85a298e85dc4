#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sim {

/// Base class for every error raised by the library. The CLI maps these to
/// exit status 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter constraint was violated. `constraint()` names the rule.
class ParamError : public Error {
public:
    ParamError(std::string constraint, const std::string& detail)
        : Error(constraint + (detail.empty() ? "" : ": " + detail))
        , constraint_(std::move(constraint)) {}

    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

/// Dense row-major matrix.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw Error("matrix payload size does not match shape");
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const T> data() const noexcept { return data_; }
    std::span<T> data() noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

enum class Modality { IR, RGB };

const char* to_string(Modality m) noexcept;
Modality parse_modality(const std::string& s);

struct SampleId {
    std::size_t index = 0;
    std::int64_t person = 0;
    Modality modality = Modality::RGB;
    std::optional<std::int32_t> camera;

    bool operator==(const SampleId&) const = default;
};

using Registry = std::vector<SampleId>;

/// Registry of `n` samples with index == person == position.
Registry default_registry(std::size_t n, Modality modality);

/// Throws if indices repeat or modality is mixed.
void validate_registry(const Registry& reg, const char* what);

/// Per-sample feature vectors with their labels.
class EmbeddingSet {
public:
    EmbeddingSet(std::size_t dim, Registry samples, std::vector<double> vectors);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return samples_.size(); }
    const Registry& samples() const noexcept { return samples_; }
    std::span<const double> vector(std::size_t i) const {
        return {vectors_.data() + i * dim_, dim_};
    }
    std::span<const double> vectors() const noexcept { return vectors_; }

    /// Copy with every vector scaled to unit L2 norm (zero vectors stay zero).
    EmbeddingSet normalized() const;

    /// Copy restricted to the given rows, in the given order.
    EmbeddingSet subset(std::span<const std::size_t> rows) const;

private:
    std::size_t dim_;
    Registry samples_;
    std::vector<double> vectors_;
};

/// Nonnegative distances between a row registry and a column registry.
///
/// When both registries are identical the matrix is treated as a
/// gallery-gallery matrix and must be symmetric with a zero diagonal. The
/// triangle inequality is not checked here (it is cubic); see
/// `triangle_violation`.
class DistanceMatrix {
public:
    DistanceMatrix(Registry rows, Registry cols, Matrix<double> values);

    const Registry& rows() const noexcept { return rows_; }
    const Registry& cols() const noexcept { return cols_; }
    const Matrix<double>& values() const noexcept { return values_; }
    std::size_t n_rows() const noexcept { return values_.rows(); }
    std::size_t n_cols() const noexcept { return values_.cols(); }
    double operator()(std::size_t r, std::size_t c) const { return values_(r, c); }
    bool is_self() const noexcept { return self_; }

    /// Sub-matrix over the given row and column positions.
    DistanceMatrix slice(std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols) const;

private:
    Registry rows_;
    Registry cols_;
    Matrix<double> values_;
    bool self_ = false;
};

struct Triple {
    std::size_t i, j, t;
};

/// First triple with d(i,j) + d(j,t) < d(i,t) - tol, if any.
std::optional<Triple> triangle_violation(const Matrix<double>& d, double tol);

/// How the cross-modality neighbor set N_c of each query is ranked.
enum class KnnSource { Sgr, RawDistance };

struct SimParams {
    double lambda = 0.01;
    std::size_t big_k = 9;
    double alpha = 0.3;
    std::size_t k_q = 10;
    std::size_t k_g = 10;
    /// Gallery pruning size; unset means "same as big_k".
    std::optional<std::size_t> prune_k;
    bool expand_reciprocal = false;
    /// Per-query min-max normalization of the SGR term before blending.
    bool normalize_sgr = false;
    KnnSource knn_source = KnnSource::Sgr;

    std::size_t effective_prune_k() const noexcept { return prune_k.value_or(big_k); }

    bool operator==(const SimParams&) const = default;
};

/// Checks every parameter constraint against a gallery of `n_gallery` items
/// and returns the params with `prune_k` resolved. Throws ParamError naming
/// the first violated constraint.
SimParams validate_params(const SimParams& p, std::size_t n_gallery);

}  // namespace sim
