#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sim/core.hpp"
#include "sim/pipeline.hpp"
#include "sim/rng.hpp"

namespace sim {

/// relevance[q][g]: gallery position g is a correct match for query q.
using Relevance = std::vector<std::vector<bool>>;

struct EvalReport {
    double map = 0.0;
    /// cmc[r] = fraction of evaluated queries whose first match is within rank r+1.
    std::vector<double> cmc;
    /// Per-query AP averaged over the trials in which the query had a match;
    /// NaN for queries that never had one.
    std::vector<double> per_query_ap;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    /// Query evaluations skipped for lack of any relevant gallery item,
    /// summed over trials.
    std::size_t excluded_queries = 0;

    double rank(std::size_t r) const { return cmc.at(r - 1); }
};

/// Mean over relevant items of precision at their 1-based rank. nullopt when
/// nothing in `relevance` is relevant.
std::optional<double> average_precision(std::span<const std::size_t> ranking,
                                        const std::vector<bool>& relevance);

/// 1-based rank of the first relevant item, or nullopt.
std::optional<std::size_t> first_hit(std::span<const std::size_t> ranking,
                                     const std::vector<bool>& relevance);

/// Queries without any relevant item are left out of the denominator.
/// Ranks past the gallery size repeat the final value.
std::vector<double> cmc_curve(const Rankings& rankings, const Relevance& relevance,
                              std::size_t max_rank);

struct EvalOptions {
    std::size_t max_rank = 20;
    /// Drop gallery items sharing both person and camera with the query.
    bool exclude_same_camera = false;
};

/// Relevance by identity: same person label.
Relevance identity_relevance(const Registry& queries, const Registry& gallery);

/// Single evaluation of fixed rankings.
EvalReport evaluate(const Rankings& rankings, const Registry& queries, const Registry& gallery,
                    const EvalOptions& opts = {});

struct RetrievalDataset {
    DistanceMatrix dqg;
    DistanceMatrix dgg;
};

enum class Variant { Baseline, Sim };

struct PipelineConfig {
    Variant variant = Variant::Sim;
    SimParams params;
};

/// Runs the configured pipeline on a dataset as-is.
SimResult run_pipeline(const RetrievalDataset& data, const PipelineConfig& cfg);

struct TrialProtocol {
    std::size_t trials = 10;
    /// Gallery images sampled per identity each trial; 0 keeps the full gallery.
    std::size_t shot = 10;
    std::uint64_t seed = 0;
    EvalOptions eval;
};

/// Gallery positions kept in one trial: up to `shot` per identity, drawn
/// with `rng`, returned in ascending order.
std::vector<std::size_t> sample_gallery(const Registry& gallery, std::size_t shot, Rng& rng);

/// Multi-shot protocol: every trial samples a gallery with the RNG stream
/// derive_seed(seed, trial), runs the pipeline and evaluates. Metrics are
/// averaged over trials.
EvalReport multi_shot_trials(const RetrievalDataset& data, const PipelineConfig& cfg,
                             const TrialProtocol& protocol);

}  // namespace sim
