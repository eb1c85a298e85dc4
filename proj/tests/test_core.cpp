#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "sim/core.hpp"
#include "sim/distance.hpp"
#include "sim/io.hpp"
#include "sim/rng.hpp"

using namespace sim;

namespace {

std::string violated(const SimParams& p, std::size_t n) {
    try {
        validate_params(p, n);
    } catch (const ParamError& e) {
        return e.constraint();
    }
    return "";
}

}  // namespace

TEST_CASE("validate_params accepts the tuned defaults") {
    SimParams p;
    p.lambda = 0.01;
    p.big_k = 9;
    p.alpha = 0.3;
    p.prune_k = 9;
    const SimParams v = validate_params(p, 100);
    CHECK(v == p);
}

TEST_CASE("validate_params accepts the minimal configuration") {
    SimParams p;
    p.lambda = 0.0;
    p.big_k = 1;
    p.alpha = 1.0;
    p.prune_k = 1;
    p.k_q = 1;
    p.k_g = 1;
    CHECK(validate_params(p, 1) == p);
}

TEST_CASE("validate_params resolves prune_k to bigK when unset") {
    SimParams p;
    p.big_k = 5;
    CHECK(validate_params(p, 50).prune_k == 5u);
}

TEST_CASE("validate_params names the violated constraint") {
    SimParams p;
    p.big_k = 10;
    p.prune_k = 9;
    CHECK(violated(p, 100) == "bigK exceeds prune_k");

    SimParams bad_lambda;
    bad_lambda.lambda = 1.5;
    CHECK(violated(bad_lambda, 100) == "lambda outside [0,1]");
    bad_lambda.lambda = std::nan("");
    CHECK(violated(bad_lambda, 100) == "lambda outside [0,1]");

    SimParams bad_alpha;
    bad_alpha.alpha = -0.1;
    CHECK(violated(bad_alpha, 100) == "alpha outside [0,1]");

    SimParams zero_k;
    zero_k.big_k = 0;
    CHECK(violated(zero_k, 100) == "bigK must be positive");

    SimParams defaults;
    CHECK(violated(defaults, 8) == "bigK exceeds gallery size");
    CHECK(violated(defaults, 9) == "k_q exceeds gallery size");
    defaults.k_q = 9;
    CHECK(violated(defaults, 9) == "k_g exceeds gallery size");
    CHECK(violated(defaults, 0) == "gallery is empty");
}

TEST_CASE("EmbeddingSet rejects bad input") {
    CHECK_THROWS_AS(EmbeddingSet(0, {}, {}), Error);
    CHECK_THROWS_AS(EmbeddingSet(2, default_registry(1, Modality::IR), {1.0}), Error);
    CHECK_THROWS_AS(EmbeddingSet(1, default_registry(1, Modality::IR),
                                 {std::numeric_limits<double>::infinity()}),
                    Error);
    Registry dup = default_registry(2, Modality::IR);
    dup[1].index = 0;
    CHECK_THROWS_AS(EmbeddingSet(1, dup, {1.0, 2.0}), Error);
    Registry mixed = default_registry(2, Modality::IR);
    mixed[1].modality = Modality::RGB;
    CHECK_THROWS_AS(EmbeddingSet(1, mixed, {1.0, 2.0}), Error);
}

TEST_CASE("EmbeddingSet normalization gives unit rows") {
    EmbeddingSet e(2, default_registry(2, Modality::RGB), {3.0, 4.0, 0.0, 0.0});
    const auto n = e.normalized();
    CHECK(n.vector(0)[0] == doctest::Approx(0.6));
    CHECK(n.vector(0)[1] == doctest::Approx(0.8));
    CHECK(n.vector(1)[0] == 0.0);
}

TEST_CASE("DistanceMatrix enforces its invariants") {
    const auto g = default_registry(2, Modality::RGB);
    const auto q = default_registry(1, Modality::IR);
    CHECK_THROWS_AS(DistanceMatrix(q, g, Matrix<double>(1, 2, std::vector<double>{-1.0, 0.0})), Error);
    CHECK_THROWS_AS(DistanceMatrix(q, g, Matrix<double>(1, 2, std::vector<double>{std::nan(""), 0.0})),
                    Error);
    CHECK_THROWS_AS(DistanceMatrix(q, g, Matrix<double>(2, 2)), Error);
    CHECK_THROWS_AS(DistanceMatrix(g, g, Matrix<double>(2, 2, std::vector<double>{0, 1, 2, 0})), Error);
    CHECK_THROWS_AS(DistanceMatrix(g, g, Matrix<double>(2, 2, std::vector<double>{1, 1, 1, 0})), Error);
    const DistanceMatrix ok(g, g, Matrix<double>(2, 2, std::vector<double>{0, 1, 1, 0}));
    CHECK(ok.is_self());
    CHECK_FALSE(DistanceMatrix(q, g, Matrix<double>(1, 2)).is_self());
}

TEST_CASE("distances from embeddings are nonnegative; self distances symmetric with zero diagonal") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::to_embeddings(oracle::random_points(rng, 7, 5, 3.0), Modality::IR);
        const auto b = oracle::to_embeddings(oracle::random_points(rng, 9, 5, 3.0), Modality::RGB);
        const auto d = pairwise_l2(a, b);
        for (double v : d.values().data()) CHECK(v >= 0.0);
        const auto s = self_distances(b);
        for (std::size_t i = 0; i < s.n_rows(); ++i) {
            CHECK(s(i, i) == 0.0);
            for (std::size_t j = 0; j < s.n_cols(); ++j) CHECK(s(i, j) == s(j, i));
        }
    }
}

TEST_CASE("triangle_violation finds a broken triple") {
    Matrix<double> d(3, 3, std::vector<double>{0, 1, 5, 1, 0, 1, 5, 1, 0});
    const auto v = triangle_violation(d, 1e-6);
    REQUIRE(v.has_value());
    CHECK(d(v->i, v->j) + d(v->j, v->t) < d(v->i, v->t));
    Matrix<double> ok(3, 3, std::vector<double>{0, 1, 2, 1, 0, 1, 2, 1, 0});
    CHECK_FALSE(triangle_violation(ok, 1e-6).has_value());
}

TEST_CASE("sample registries round-trip through the text format exactly") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(30);
        Registry reg;
        const Modality m = rng.uniform_below(2) == 0 ? Modality::IR : Modality::RGB;
        for (std::size_t i = 0; i < n; ++i) {
            SampleId s;
            s.index = i * 3 + rng.uniform_below(3);
            s.person = static_cast<std::int64_t>(rng.next() >> 1) - (std::int64_t{1} << 62);
            s.modality = m;
            if (rng.uniform_below(2) == 0) s.camera = static_cast<std::int32_t>(rng.uniform_below(10));
            reg.push_back(s);
        }
        std::istringstream in(io::format_registry(reg));
        const auto raw = io::parse_registry(in);
        const auto [back, unused] = io::resolve_person_labels(raw, {});
        CHECK(back == reg);
    }
}
