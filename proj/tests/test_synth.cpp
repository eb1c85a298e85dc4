#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sim/synth.hpp"

using namespace sim;

TEST_CASE("generation is deterministic in the config") {
    SynthConfig cfg;
    cfg.n_identities = 5;
    cfg.images_per_identity_per_modality = 3;
    cfg.dim = 4;
    cfg.seed = 17;
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    CHECK(std::equal(a.query.vectors().begin(), a.query.vectors().end(), b.query.vectors().begin()));
    CHECK(std::equal(a.gallery.vectors().begin(), a.gallery.vectors().end(),
                     b.gallery.vectors().begin()));
    cfg.seed = 18;
    const auto c = generate(cfg);
    CHECK_FALSE(std::equal(a.query.vectors().begin(), a.query.vectors().end(),
                           c.query.vectors().begin()));
}

TEST_CASE("generated layout and labels") {
    SynthConfig cfg;
    cfg.n_identities = 4;
    cfg.images_per_identity_per_modality = 3;
    cfg.dim = 5;
    const auto d = generate(cfg);
    CHECK(d.query.size() == 12);
    CHECK(d.gallery.size() == 12);
    CHECK(d.query.dim() == 5);
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(d.query.samples()[i].person == static_cast<std::int64_t>(i / 3));
        CHECK(d.query.samples()[i].modality == Modality::IR);
        CHECK(d.gallery.samples()[i].modality == Modality::RGB);
    }
}

TEST_CASE("validate_synth rejects empty or negative settings") {
    SynthConfig cfg;
    cfg.n_identities = 0;
    CHECK_THROWS_AS(generate(cfg), Error);
    SynthConfig neg;
    neg.cluster_spread = -1.0;
    CHECK_THROWS_AS(generate(neg), Error);
}

TEST_CASE("zero noise makes every ablation variant perfect") {
    SynthConfig cfg;
    cfg.n_identities = 8;
    cfg.dim = 8;
    cfg.cluster_spread = 0.0;
    cfg.modality_offset = 0.0;
    for (const auto& row : ablation_suite(cfg, SimParams{})) {
        CHECK(row.map == 1.0);
        CHECK(row.rank1 == 1.0);
    }
}

TEST_CASE("a single identity is trivially retrieved") {
    SynthConfig cfg;
    cfg.n_identities = 1;
    cfg.dim = 4;
    for (const auto& row : ablation_suite(cfg, SimParams{})) CHECK(row.map == 1.0);
    const auto d = generate(cfg);
    CHECK_THROWS_AS(gap_report(d.query, d.gallery), Error);
}

TEST_CASE("without a modality offset cross and intra retrieval are comparable") {
    SynthConfig cfg;
    cfg.modality_offset = 0.0;
    cfg.cluster_spread = 3.0;
    const auto d = generate(cfg);
    const auto g = gap_report(d.query, d.gallery);
    CHECK(std::abs(g.cross_map - g.intra_map) <= 0.05);
}

TEST_CASE("a large modality offset opens a gap") {
    SynthConfig cfg;
    cfg.modality_offset = 20.0;
    const auto d = generate(cfg);
    const auto g = gap_report(d.query, d.gallery);
    CHECK(g.intra_map - g.cross_map > 0.2);
}

TEST_CASE("ablation rows come in a fixed order and SIM leads on a hard split") {
    SynthConfig cfg;
    cfg.modality_offset = 14.0;
    const auto rows = ablation_suite(cfg, SimParams{});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].variant == "baseline");
    CHECK(rows[1].variant == "sgr");
    CHECK(rows[2].variant == "mnnr");
    CHECK(rows[3].variant == "sim");
    double best = 0.0;
    for (const auto& r : rows) best = std::max(best, r.map);
    CHECK(rows[3].map >= best - 0.02);
    CHECK(rows[3].map > rows[0].map);
    CHECK(rows[1].map > rows[0].map);
    CHECK(rows[2].map > rows[0].map);
}
