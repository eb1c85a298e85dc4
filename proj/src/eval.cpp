#include "sim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sim {

std::optional<double> average_precision(std::span<const std::size_t> ranking,
                                        const std::vector<bool>& relevance) {
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        if (relevance.at(ranking[r])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(r + 1);
        }
    }
    if (hits == 0) return std::nullopt;
    return sum / static_cast<double>(hits);
}

std::optional<std::size_t> first_hit(std::span<const std::size_t> ranking,
                                     const std::vector<bool>& relevance) {
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        if (relevance.at(ranking[r])) return r + 1;
    }
    return std::nullopt;
}

std::vector<double> cmc_curve(const Rankings& rankings, const Relevance& relevance,
                              std::size_t max_rank) {
    if (rankings.size() != relevance.size()) throw Error("rankings and relevance differ in length");
    std::vector<double> counts(max_rank, 0.0);
    std::size_t valid = 0;
    for (std::size_t q = 0; q < rankings.size(); ++q) {
        const auto hit = first_hit(rankings[q], relevance[q]);
        if (!hit) continue;
        ++valid;
        for (std::size_t r = *hit - 1; r < max_rank; ++r) counts[r] += 1.0;
    }
    if (valid > 0) {
        for (double& c : counts) c /= static_cast<double>(valid);
    }
    return counts;
}

Relevance identity_relevance(const Registry& queries, const Registry& gallery) {
    Relevance rel(queries.size(), std::vector<bool>(gallery.size(), false));
    for (std::size_t q = 0; q < queries.size(); ++q) {
        for (std::size_t g = 0; g < gallery.size(); ++g) {
            rel[q][g] = queries[q].person == gallery[g].person;
        }
    }
    return rel;
}

EvalReport evaluate(const Rankings& rankings, const Registry& queries, const Registry& gallery,
                    const EvalOptions& opts) {
    if (rankings.size() != queries.size()) throw Error("one ranking per query is required");
    const Relevance rel = identity_relevance(queries, gallery);

    Rankings filtered;
    const Rankings* used = &rankings;
    if (opts.exclude_same_camera) {
        filtered.resize(rankings.size());
        for (std::size_t q = 0; q < rankings.size(); ++q) {
            const auto& qs = queries[q];
            for (std::size_t g : rankings[q]) {
                const auto& gs = gallery[g];
                const bool junk = qs.person == gs.person && qs.camera && gs.camera &&
                                  *qs.camera == *gs.camera;
                if (!junk) filtered[q].push_back(g);
            }
        }
        used = &filtered;
    }

    EvalReport report;
    report.per_query_ap.assign(queries.size(), std::numeric_limits<double>::quiet_NaN());
    double sum = 0.0;
    std::size_t valid = 0;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const auto ap = average_precision((*used)[q], rel[q]);
        if (!ap) {
            ++report.excluded_queries;
            continue;
        }
        report.per_query_ap[q] = *ap;
        sum += *ap;
        ++valid;
    }
    report.map = valid > 0 ? sum / static_cast<double>(valid) : 0.0;
    report.cmc = cmc_curve(*used, rel, opts.max_rank);
    return report;
}

SimResult run_pipeline(const RetrievalDataset& data, const PipelineConfig& cfg) {
    return cfg.variant == Variant::Baseline ? run_baseline(data.dqg)
                                            : run_sim(data.dqg, data.dgg, cfg.params);
}

std::vector<std::size_t> sample_gallery(const Registry& gallery, std::size_t shot, Rng& rng) {
    std::vector<std::size_t> keep;
    if (shot == 0) {
        keep.resize(gallery.size());
        for (std::size_t g = 0; g < gallery.size(); ++g) keep[g] = g;
        return keep;
    }
    // Identities are visited in ascending label order so the RNG stream is
    // consumed identically on every platform.
    std::map<std::int64_t, std::vector<std::size_t>> by_person;
    for (std::size_t g = 0; g < gallery.size(); ++g) by_person[gallery[g].person].push_back(g);
    for (const auto& [person, positions] : by_person) {
        if (positions.size() <= shot) {
            keep.insert(keep.end(), positions.begin(), positions.end());
            continue;
        }
        for (std::size_t pick : rng.sample_without_replacement(positions.size(), shot)) {
            keep.push_back(positions[pick]);
        }
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

EvalReport multi_shot_trials(const RetrievalDataset& data, const PipelineConfig& cfg,
                             const TrialProtocol& protocol) {
    if (protocol.trials == 0) throw Error("at least one trial is required");
    const std::size_t n_q = data.dqg.n_rows();
    std::vector<std::size_t> all_queries(n_q);
    for (std::size_t q = 0; q < n_q; ++q) all_queries[q] = q;

    std::vector<double> ap_sum(n_q, 0.0);
    std::vector<std::size_t> ap_count(n_q, 0);
    std::vector<double> cmc_sum(protocol.eval.max_rank, 0.0);
    EvalReport report;
    report.trials = protocol.trials;
    report.seed = protocol.seed;

    for (std::size_t t = 0; t < protocol.trials; ++t) {
        Rng rng(derive_seed(protocol.seed, t));
        const auto keep = sample_gallery(data.dqg.cols(), protocol.shot, rng);
        if (keep.empty()) throw Error("gallery is empty after sampling");
        const RetrievalDataset trial{data.dqg.slice(all_queries, keep), data.dgg.slice(keep, keep)};
        const SimResult result = run_pipeline(trial, cfg);
        const EvalReport one =
            evaluate(result.rankings, trial.dqg.rows(), trial.dqg.cols(), protocol.eval);
        for (std::size_t q = 0; q < n_q; ++q) {
            if (std::isnan(one.per_query_ap[q])) continue;
            ap_sum[q] += one.per_query_ap[q];
            ++ap_count[q];
        }
        for (std::size_t r = 0; r < cmc_sum.size(); ++r) cmc_sum[r] += one.cmc[r];
        report.excluded_queries += one.excluded_queries;
    }

    report.per_query_ap.assign(n_q, std::numeric_limits<double>::quiet_NaN());
    double sum = 0.0;
    std::size_t valid = 0;
    for (std::size_t q = 0; q < n_q; ++q) {
        if (ap_count[q] == 0) continue;
        report.per_query_ap[q] = ap_sum[q] / static_cast<double>(ap_count[q]);
        sum += report.per_query_ap[q];
        ++valid;
    }
    report.map = valid > 0 ? sum / static_cast<double>(valid) : 0.0;
    report.cmc.resize(cmc_sum.size());
    for (std::size_t r = 0; r < cmc_sum.size(); ++r) {
        report.cmc[r] = cmc_sum[r] / static_cast<double>(protocol.trials);
    }
    return report;
}

}  // namespace sim
