#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sim/core.hpp"

namespace sim {

/// Clustered two-modality embeddings. Each identity gets a mean on the
/// sphere of radius `mean_scale`; gallery (RGB) samples scatter around it
/// with Gaussian noise of std `cluster_spread`, and query (IR) samples
/// additionally shift by a per-identity random direction of length
/// `modality_offset`.
struct SynthConfig {
    std::size_t n_identities = 40;
    std::size_t images_per_identity_per_modality = 10;
    std::size_t dim = 32;
    double cluster_spread = 1.0;
    double modality_offset = 6.0;
    double mean_scale = 10.0;
    std::uint64_t seed = 0;
};

void validate_synth(const SynthConfig& cfg);

struct SynthDataset {
    EmbeddingSet query;
    EmbeddingSet gallery;
};

/// Deterministic in cfg. Samples are laid out identity-major; person labels
/// are identity numbers.
SynthDataset generate(const SynthConfig& cfg);

struct GapReport {
    double cross_map;
    double intra_map;
};

/// mAP of cross-modality retrieval (queries against gallery by raw L2)
/// next to leave-one-out intra-gallery retrieval.
GapReport gap_report(const EmbeddingSet& query, const EmbeddingSet& gallery);

struct AblationRow {
    std::string variant;
    double map;
    double rank1;
};

/// baseline, SGR-only (alpha = 1), MNNR-only (alpha = 0, N_c by raw D_qg)
/// and full SIM on one generated dataset, full gallery.
std::vector<AblationRow> ablation_suite(const SynthConfig& cfg, const SimParams& p);

}  // namespace sim
