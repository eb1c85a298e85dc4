#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "sim/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run simrank(std::vector<std::string> args) {
    args.insert(args.begin(), "simrank");
    std::ostringstream out, err;
    const int code = sim::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const char* base = std::getenv("SIM_TEST_TMP");
    fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes a small synthetic dataset and returns the input flags for it.
std::vector<std::string> synth_inputs(const fs::path& dir, const std::string& extra_offset = "12") {
    const Run r = simrank({"synth", "--ids", "8", "--per-id", "6", "--dim", "8", "--offset", extra_offset,
                           "--seed", "3", "--out-dir", dir.string()});
    REQUIRE(r.code == 0);
    return {"--query-emb",  (dir / "query_emb.simm").string(),  "--gallery-emb",
            (dir / "gallery_emb.simm").string(), "--registry-q", (dir / "registry_q.txt").string(),
            "--registry-g", (dir / "registry_g.txt").string()};
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const std::vector<std::string> kSmall{"--kq", "4", "--kg", "4", "--bigk", "3"};

}  // namespace

TEST_CASE("rerank writes a distance matrix and rankings") {
    const fs::path dir = scratch("rerank");
    const auto in = synth_inputs(dir / "data");
    const Run r = simrank(cat(cat({"rerank", "--out-dir", (dir / "out").string()}, in), kSmall));
    REQUIRE(r.code == 0);
    const auto m = sim::io::read_matrix_file(dir / "out" / "d_sim.simm");
    CHECK(m.rows() == 48);
    CHECK(m.cols() == 48);
    std::istringstream rankings(slurp(dir / "out" / "rankings.txt"));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(rankings, line)) {
        std::istringstream fields(line);
        std::size_t v = 0, n = 0;
        while (fields >> v) ++n;
        CHECK(n == 49);
        ++lines;
    }
    CHECK(lines == 48);
}

TEST_CASE("rerank accepts distance matrices in binary and CSV form") {
    const fs::path dir = scratch("matrices");
    sim::io::write_text_file(dir / "dqg.csv", "2,3\n1,2,3\n3,2,1\n");
    sim::io::write_text_file(dir / "dgg.csv", "3,3\n0,1,2\n1,0,1\n2,1,0\n");
    const Run csv = simrank({"rerank", "--dqg", (dir / "dqg.csv").string(), "--dgg",
                             (dir / "dgg.csv").string(), "--kq", "2", "--kg", "2", "--bigk", "2",
                             "--out-dir", (dir / "a").string()});
    REQUIRE(csv.code == 0);
    sim::io::write_matrix_file(dir / "dqg.simm", sim::Matrix<float>(2, 3, std::vector<float>{1, 2, 3, 3, 2, 1}));
    sim::io::write_matrix_file(dir / "dgg.simm",
                               sim::Matrix<float>(3, 3, std::vector<float>{0, 1, 2, 1, 0, 1, 2, 1, 0}));
    const Run bin = simrank({"rerank", "--dqg", (dir / "dqg.simm").string(), "--dgg",
                             (dir / "dgg.simm").string(), "--kq", "2", "--kg", "2", "--bigk", "2",
                             "--out-dir", (dir / "b").string()});
    REQUIRE(bin.code == 0);
    CHECK(slurp(dir / "a" / "rankings.txt") == slurp(dir / "b" / "rankings.txt"));
    CHECK(slurp(dir / "a" / "d_sim.simm") == slurp(dir / "b" / "d_sim.simm"));
}

TEST_CASE("--alpha 1 is the SGR-only variant") {
    const fs::path dir = scratch("alpha");
    const auto in = synth_inputs(dir / "data");
    REQUIRE(simrank(cat(cat({"rerank", "--alpha", "1", "--out-dir", (dir / "a").string()}, in), kSmall))
                .code == 0);
    REQUIRE(simrank(cat(cat({"rerank", "--variant", "sgr", "--out-dir", (dir / "b").string()}, in), kSmall))
                .code == 0);
    CHECK(slurp(dir / "a" / "d_sim.simm") == slurp(dir / "b" / "d_sim.simm"));
    CHECK(slurp(dir / "a" / "rankings.txt") == slurp(dir / "b" / "rankings.txt"));
}

TEST_CASE("malformed input exits with status 2") {
    const fs::path dir = scratch("bad");
    sim::io::write_text_file(dir / "dqg.simm", "XXXX garbage that is long enough");
    sim::io::write_matrix_file(dir / "dgg.simm", sim::Matrix<float>(1, 1, 0.0f));
    const Run r = simrank({"rerank", "--dqg", (dir / "dqg.simm").string(), "--dgg",
                           (dir / "dgg.simm").string(), "--out-dir", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad matrix header") != std::string::npos);
    CHECK(r.err.find("dqg.simm") != std::string::npos);

    CHECK(simrank({"rerank", "--dqg", (dir / "missing.simm").string(), "--dgg",
                   (dir / "dgg.simm").string()})
              .code == 2);
    CHECK(simrank({"rerank"}).code == 2);
    CHECK(simrank({"nonsense"}).code == 2);
    const auto in = synth_inputs(dir / "data");
    const Run invalid = simrank(cat(cat({"rerank", "--out-dir", dir.string()}, in), {"--lambda", "2"}));
    CHECK(invalid.code == 2);
    CHECK(invalid.err.find("lambda outside [0,1]") != std::string::npos);
    const Run too_big = simrank(cat(cat({"rerank", "--out-dir", dir.string()}, in), {"--bigk", "10", "--prune-k", "9"}));
    CHECK(too_big.err.find("bigK exceeds prune_k") != std::string::npos);
}

TEST_CASE("eval requires registries") {
    const fs::path dir = scratch("noreg");
    synth_inputs(dir);
    const Run r = simrank({"eval", "--query-emb", (dir / "query_emb.simm").string(), "--gallery-emb",
                           (dir / "gallery_emb.simm").string()});
    CHECK(r.code == 2);
}

TEST_CASE("sweep prints one row per grid value and matches eval") {
    const fs::path dir = scratch("sweep");
    const auto in = synth_inputs(dir / "data");
    const std::vector<std::string> protocol{"--trials", "2", "--shot", "3", "--seed", "5"};
    const Run sweep = simrank(cat(cat(cat({"sweep", "--lambda-grid", "0.0,0.01,0.1"}, in), kSmall), protocol));
    REQUIRE(sweep.code == 0);
    std::istringstream lines(sweep.out);
    std::string header, row;
    std::getline(lines, header);
    CHECK(header == "param,value,map,rank1");
    std::size_t rows = 0;
    std::string second_map;
    while (std::getline(lines, row)) {
        ++rows;
        if (rows == 2) {
            CHECK(row.rfind("lambda,0.010000,", 0) == 0);
            second_map = row.substr(16, 8);
        }
    }
    CHECK(rows == 3);

    const Run eval = simrank(cat(cat(cat({"eval", "--lambda", "0.01"}, in), kSmall), protocol));
    REQUIRE(eval.code == 0);
    CHECK(eval.out.rfind("mAP " + second_map + "\n", 0) == 0);

    CHECK(simrank(cat(cat({"sweep"}, in), kSmall)).code == 2);
}

TEST_CASE("noise-free sweep scores 1 everywhere") {
    const fs::path dir = scratch("clean");
    const Run s = simrank({"synth", "--ids", "6", "--per-id", "5", "--dim", "4", "--spread", "0", "--offset",
                           "0", "--out-dir", dir.string()});
    REQUIRE(s.code == 0);
    const Run r = simrank({"sweep", "--query-emb", (dir / "query_emb.simm").string(), "--gallery-emb",
                           (dir / "gallery_emb.simm").string(), "--registry-q",
                           (dir / "registry_q.txt").string(), "--registry-g",
                           (dir / "registry_g.txt").string(), "--kq", "5", "--kg", "5", "--bigk", "2",
                           "--alpha-grid", "0,0.5,1", "--full-gallery"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "param,value,map,rank1\n"
                   "alpha,0.000000,1.000000,1.000000\n"
                   "alpha,0.500000,1.000000,1.000000\n"
                   "alpha,1.000000,1.000000,1.000000\n");
}

TEST_CASE("evaluation output is reproducible") {
    const fs::path dir = scratch("repro");
    const auto in = synth_inputs(dir / "data");
    const auto full = cat(cat({"eval", "--full-gallery"}, in), kSmall);
    const Run a = simrank(full);
    const Run b = simrank(full);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("trials 1\n") != std::string::npos);

    const auto seeded = cat(cat({"eval", "--seed", "11", "--trials", "3", "--shot", "2", "--out-dir",
                                 (dir / "r").string()},
                                in),
                            kSmall);
    const Run c = simrank(seeded);
    const std::string first = slurp(dir / "r" / "report.txt");
    const Run d = simrank(seeded);
    CHECK(c.out == d.out);
    CHECK(first == slurp(dir / "r" / "report.txt"));
    CHECK(first == c.out);
}

TEST_CASE("synthetic eval input and the ablation and gap commands") {
    const Run e = simrank({"eval", "--synth", "--synth-ids", "6", "--synth-per-id", "5", "--synth-dim", "4",
                           "--kq", "3", "--kg", "3", "--bigk", "2", "--full-gallery"});
    REQUIRE(e.code == 0);
    CHECK(e.out.rfind("mAP ", 0) == 0);

    const Run a = simrank({"ablation", "--ids", "6", "--per-id", "5", "--dim", "4", "--kq", "3", "--kg", "3",
                           "--bigk", "2"});
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("variant,map,rank1\nbaseline,", 0) == 0);

    const Run g = simrank({"gap", "--ids", "6", "--per-id", "5", "--dim", "4"});
    REQUIRE(g.code == 0);
    CHECK(g.out.rfind("cross_map ", 0) == 0);
    CHECK(g.out.find("\nintra_map ") != std::string::npos);
}
