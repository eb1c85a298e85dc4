#include "sim/synth.hpp"

#include <algorithm>
#include <cmath>

#include "sim/distance.hpp"
#include "sim/eval.hpp"
#include "sim/pipeline.hpp"
#include "sim/rng.hpp"

namespace sim {

namespace {

std::vector<double> random_direction(Rng& rng, std::size_t dim, double length) {
    std::vector<double> v(dim);
    double sq = 0.0;
    do {
        sq = 0.0;
        for (double& x : v) {
            x = rng.normal();
            sq += x * x;
        }
    } while (sq == 0.0);
    const double scale = length / std::sqrt(sq);
    for (double& x : v) x *= scale;
    return v;
}

}  // namespace

void validate_synth(const SynthConfig& cfg) {
    if (cfg.n_identities == 0 || cfg.images_per_identity_per_modality == 0 || cfg.dim == 0) {
        throw Error("synthetic config counts must be at least 1");
    }
    auto ok = [](double x) { return std::isfinite(x) && x >= 0.0; };
    if (!ok(cfg.cluster_spread) || !ok(cfg.modality_offset) || !ok(cfg.mean_scale)) {
        throw Error("synthetic config spreads must be finite and nonnegative");
    }
}

SynthDataset generate(const SynthConfig& cfg) {
    validate_synth(cfg);
    Rng rng(cfg.seed);
    const std::size_t ids = cfg.n_identities;
    const std::size_t per = cfg.images_per_identity_per_modality;
    const std::size_t dim = cfg.dim;

    std::vector<std::vector<double>> means, offsets;
    means.reserve(ids);
    offsets.reserve(ids);
    for (std::size_t k = 0; k < ids; ++k) {
        means.push_back(random_direction(rng, dim, cfg.mean_scale));
        offsets.push_back(random_direction(rng, dim, cfg.modality_offset));
    }

    auto draw = [&](Modality modality, bool shifted) {
        Registry reg;
        std::vector<double> vectors;
        reg.reserve(ids * per);
        vectors.reserve(ids * per * dim);
        for (std::size_t k = 0; k < ids; ++k) {
            for (std::size_t s = 0; s < per; ++s) {
                reg.push_back(SampleId{reg.size(), static_cast<std::int64_t>(k), modality,
                                       std::nullopt});
                for (std::size_t d = 0; d < dim; ++d) {
                    double x = means[k][d] + cfg.cluster_spread * rng.normal();
                    if (shifted) x += offsets[k][d];
                    vectors.push_back(x);
                }
            }
        }
        return EmbeddingSet(dim, std::move(reg), std::move(vectors));
    };
    EmbeddingSet gallery = draw(Modality::RGB, false);
    EmbeddingSet query = draw(Modality::IR, true);
    return SynthDataset{std::move(query), std::move(gallery)};
}

GapReport gap_report(const EmbeddingSet& query, const EmbeddingSet& gallery) {
    std::size_t identities = 0;
    {
        std::vector<std::int64_t> persons;
        for (const auto& s : gallery.samples()) persons.push_back(s.person);
        std::sort(persons.begin(), persons.end());
        identities = static_cast<std::size_t>(
            std::unique(persons.begin(), persons.end()) - persons.begin());
    }
    if (identities < 2) throw Error("gap report needs at least two identities");

    const auto cross = run_baseline(pairwise_l2(query, gallery));
    const double cross_map = evaluate(cross.rankings, query.samples(), gallery.samples()).map;

    // Leave-one-out: each gallery sample queries the rest of the gallery.
    const auto dgg = self_distances(gallery);
    const Rankings full = rank_rows(dgg.values());
    Rankings loo(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) {
        for (std::size_t g : full[i]) {
            if (g != i) loo[i].push_back(g);
        }
    }
    const Relevance rel = identity_relevance(gallery.samples(), gallery.samples());
    double sum = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < loo.size(); ++i) {
        if (const auto ap = average_precision(loo[i], rel[i])) {
            sum += *ap;
            ++valid;
        }
    }
    const double intra_map = valid > 0 ? sum / static_cast<double>(valid) : 0.0;
    return GapReport{cross_map, intra_map};
}

std::vector<AblationRow> ablation_suite(const SynthConfig& cfg, const SimParams& p) {
    const SynthDataset data = generate(cfg);
    const RetrievalDataset dist{pairwise_l2(data.query, data.gallery),
                                self_distances(data.gallery)};

    SimParams sgr_only = p;
    sgr_only.alpha = 1.0;
    SimParams mnnr_only = p;
    mnnr_only.alpha = 0.0;
    mnnr_only.knn_source = KnnSource::RawDistance;

    const std::pair<const char*, PipelineConfig> variants[] = {
        {"baseline", {Variant::Baseline, p}},
        {"sgr", {Variant::Sim, sgr_only}},
        {"mnnr", {Variant::Sim, mnnr_only}},
        {"sim", {Variant::Sim, p}},
    };
    std::vector<AblationRow> rows;
    for (const auto& [name, pc] : variants) {
        const SimResult r = run_pipeline(dist, pc);
        const EvalReport e = evaluate(r.rankings, data.query.samples(), data.gallery.samples());
        rows.push_back(AblationRow{name, e.map, e.rank(1)});
    }
    return rows;
}

}  // namespace sim
