#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>

#include "sim/distance.hpp"
#include "sim/eval.hpp"
#include "sim/io.hpp"
#include "sim/pipeline.hpp"
#include "sim/synth.hpp"

namespace sim::cli {

namespace {

namespace fs = std::filesystem;

struct InputFlags {
    std::string dqg, dgg, query_emb, gallery_emb, registry_q, registry_g;
    bool normalize = false;
    bool synth = false;
    SynthConfig synth_cfg;
};

struct SimFlags {
    double lambda = 0.01;
    std::size_t bigk = 9;
    double alpha = 0.3;
    std::size_t kq = 10;
    std::size_t kg = 10;
    std::size_t prune_k = 0;
    bool expand = false;
    bool normalize_sgr = false;
    std::string knn_source = "sgr";
    std::string variant = "sim";
};

struct EvalFlags {
    std::uint64_t seed = 0;
    std::size_t trials = 10;
    std::size_t shot = 10;
    bool full_gallery = false;
    bool exclude_same_camera = false;
};

void add_input_flags(CLI::App& app, InputFlags& f, bool allow_synth) {
    app.add_option("--dqg", f.dqg, "query-gallery distance matrix (.simm or .csv)");
    app.add_option("--dgg", f.dgg, "gallery-gallery distance matrix (.simm or .csv)");
    app.add_option("--query-emb", f.query_emb, "query embeddings, one row per sample");
    app.add_option("--gallery-emb", f.gallery_emb, "gallery embeddings, one row per sample");
    app.add_option("--registry-q", f.registry_q, "query registry (index,person,modality,camera)");
    app.add_option("--registry-g", f.registry_g, "gallery registry (index,person,modality,camera)");
    app.add_flag("--normalize", f.normalize, "unit-L2 normalize embeddings before distances");
    if (allow_synth) {
        app.add_flag("--synth", f.synth, "use a generated dataset instead of input files");
        app.add_option("--synth-ids", f.synth_cfg.n_identities, "identities")->capture_default_str();
        app.add_option("--synth-per-id", f.synth_cfg.images_per_identity_per_modality,
                       "images per identity per modality")
            ->capture_default_str();
        app.add_option("--synth-dim", f.synth_cfg.dim, "embedding dimension")->capture_default_str();
        app.add_option("--synth-spread", f.synth_cfg.cluster_spread, "intra-identity noise std")
            ->capture_default_str();
        app.add_option("--synth-offset", f.synth_cfg.modality_offset, "modality offset length")
            ->capture_default_str();
        app.add_option("--synth-seed", f.synth_cfg.seed, "generator seed")->capture_default_str();
    }
}

void add_synth_flags(CLI::App& app, SynthConfig& cfg) {
    app.add_option("--ids", cfg.n_identities, "identities")->capture_default_str();
    app.add_option("--per-id", cfg.images_per_identity_per_modality,
                   "images per identity per modality")
        ->capture_default_str();
    app.add_option("--dim", cfg.dim, "embedding dimension")->capture_default_str();
    app.add_option("--spread", cfg.cluster_spread, "intra-identity noise std")->capture_default_str();
    app.add_option("--offset", cfg.modality_offset, "modality offset length")->capture_default_str();
    app.add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
}

void add_sim_flags(CLI::App& app, SimFlags& f) {
    app.add_option("--lambda", f.lambda, "gallery edge scale in [0,1]")->capture_default_str();
    app.add_option("--bigk", f.bigk, "number of averaged paths K")->capture_default_str();
    app.add_option("--alpha", f.alpha, "SGR weight in the blend, in [0,1]")->capture_default_str();
    app.add_option("--kq", f.kq, "cross-modality neighbors per query (artifact default)")
        ->capture_default_str();
    app.add_option("--kg", f.kg, "intra-gallery reciprocal neighbors (artifact default)")
        ->capture_default_str();
    app.add_option("--prune-k", f.prune_k, "gallery neighbors kept per node (0 = bigk)")
        ->capture_default_str();
    app.add_flag("--expand-reciprocal", f.expand, "expand reciprocal sets with half-k sets");
    app.add_flag("--normalize-sgr", f.normalize_sgr, "min-max normalize SGR per query before blending");
    app.add_option("--knn-source", f.knn_source, "rank cross neighbors by sgr or raw distance")
        ->check(CLI::IsMember({"sgr", "raw"}))
        ->capture_default_str();
    app.add_option("--variant", f.variant, "sim, sgr (alpha=1), mnnr (alpha=0, raw knn) or baseline")
        ->check(CLI::IsMember({"sim", "sgr", "mnnr", "baseline"}))
        ->capture_default_str();
}

void add_eval_flags(CLI::App& app, EvalFlags& f) {
    app.add_option("--seed", f.seed, "master seed for gallery sampling")->capture_default_str();
    app.add_option("--trials", f.trials, "number of sampling trials")->capture_default_str();
    app.add_option("--shot", f.shot, "gallery images per identity per trial")->capture_default_str();
    app.add_flag("--full-gallery", f.full_gallery, "single evaluation on the whole gallery");
    app.add_flag("--exclude-same-camera", f.exclude_same_camera,
                 "drop same-person same-camera gallery items");
}

PipelineConfig pipeline_config(const SimFlags& f) {
    PipelineConfig cfg;
    SimParams& p = cfg.params;
    p.lambda = f.lambda;
    p.big_k = f.bigk;
    p.alpha = f.alpha;
    p.k_q = f.kq;
    p.k_g = f.kg;
    if (f.prune_k != 0) p.prune_k = f.prune_k;
    p.expand_reciprocal = f.expand;
    p.normalize_sgr = f.normalize_sgr;
    p.knn_source = f.knn_source == "raw" ? KnnSource::RawDistance : KnnSource::Sgr;
    if (f.variant == "baseline") {
        cfg.variant = Variant::Baseline;
    } else if (f.variant == "sgr") {
        p.alpha = 1.0;
    } else if (f.variant == "mnnr") {
        p.alpha = 0.0;
        p.knn_source = KnnSource::RawDistance;
    }
    return cfg;
}

TrialProtocol protocol(const EvalFlags& f) {
    TrialProtocol t;
    t.seed = f.seed;
    t.trials = f.full_gallery ? 1 : f.trials;
    t.shot = f.full_gallery ? 0 : f.shot;
    t.eval.exclude_same_camera = f.exclude_same_camera;
    return t;
}

std::pair<Registry, Registry> load_registries(const InputFlags& f, std::size_t n_q,
                                              std::size_t n_g, bool labels_required) {
    if (f.registry_q.empty() != f.registry_g.empty()) {
        throw Error("--registry-q and --registry-g must be given together");
    }
    if (f.registry_q.empty()) {
        if (labels_required) throw Error("--registry-q and --registry-g are required for evaluation");
        return {default_registry(n_q, Modality::IR), default_registry(n_g, Modality::RGB)};
    }
    auto regs = io::resolve_person_labels(io::read_registry_file(f.registry_q),
                                          io::read_registry_file(f.registry_g));
    if (regs.first.size() != n_q) {
        throw Error(f.registry_q + ": " + std::to_string(regs.first.size()) +
                    " samples, matrix has " + std::to_string(n_q) + " queries");
    }
    if (regs.second.size() != n_g) {
        throw Error(f.registry_g + ": " + std::to_string(regs.second.size()) +
                    " samples, matrix has " + std::to_string(n_g) + " gallery items");
    }
    return regs;
}

RetrievalDataset load_dataset(const InputFlags& f, bool labels_required) {
    const bool have_dist = !f.dqg.empty() || !f.dgg.empty();
    const bool have_emb = !f.query_emb.empty() || !f.gallery_emb.empty();
    const int sources = int(have_dist) + int(have_emb) + int(f.synth);
    if (sources != 1) {
        throw Error("give exactly one input: --dqg/--dgg, --query-emb/--gallery-emb or --synth");
    }
    if (f.synth) {
        SynthDataset data = generate(f.synth_cfg);
        if (f.normalize) data = SynthDataset{data.query.normalized(), data.gallery.normalized()};
        return RetrievalDataset{pairwise_l2(data.query, data.gallery), self_distances(data.gallery)};
    }
    if (have_dist) {
        if (f.dqg.empty() || f.dgg.empty()) throw Error("--dqg and --dgg must be given together");
        Matrix<double> dqg = io::read_matrix(f.dqg);
        Matrix<double> dgg = io::read_matrix(f.dgg);
        if (dgg.rows() != dgg.cols() || dgg.rows() != dqg.cols()) {
            throw Error(f.dgg + ": shape " + std::to_string(dgg.rows()) + "x" +
                        std::to_string(dgg.cols()) + " does not match " +
                        std::to_string(dqg.cols()) + " gallery columns of " + f.dqg);
        }
        auto [rq, rg] = load_registries(f, dqg.rows(), dqg.cols(), labels_required);
        try {
            DistanceMatrix q(rq, rg, std::move(dqg));
            DistanceMatrix g(rg, rg, std::move(dgg));
            return RetrievalDataset{std::move(q), std::move(g)};
        } catch (const Error& e) {
            throw Error(f.dqg + ", " + f.dgg + ": " + e.what());
        }
    }
    if (f.query_emb.empty() || f.gallery_emb.empty()) {
        throw Error("--query-emb and --gallery-emb must be given together");
    }
    Matrix<double> qe = io::read_matrix(f.query_emb);
    Matrix<double> ge = io::read_matrix(f.gallery_emb);
    auto [rq, rg] = load_registries(f, qe.rows(), ge.rows(), labels_required);
    auto embed = [](const std::string& path, const Matrix<double>& m, Registry reg) {
        try {
            const auto data = m.data();
            return EmbeddingSet(m.cols(), std::move(reg), std::vector<double>(data.begin(), data.end()));
        } catch (const Error& e) {
            throw Error(path + ": " + e.what());
        }
    };
    EmbeddingSet q = embed(f.query_emb, qe, std::move(rq));
    EmbeddingSet g = embed(f.gallery_emb, ge, std::move(rg));
    if (f.normalize) {
        q = q.normalized();
        g = g.normalized();
    }
    return RetrievalDataset{pairwise_l2(q, g), self_distances(g)};
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw io::FormatError(dir + ": cannot create output directory");
    return p;
}

int cmd_rerank(const InputFlags& in, const SimFlags& sf, const std::string& out_dir,
               std::ostream& out) {
    const RetrievalDataset data = load_dataset(in, false);
    const SimResult result = run_pipeline(data, pipeline_config(sf));
    const fs::path dir = prepare_out_dir(out_dir);
    io::write_matrix_file(dir / "d_sim.simm", io::to_float(result.d_sim));
    io::write_text_file(dir / "rankings.txt",
                        io::format_rankings(data.dqg.rows(), data.dqg.cols(), result.rankings));
    out << "wrote " << (dir / "d_sim.simm").string() << " and " << (dir / "rankings.txt").string()
        << '\n';
    return 0;
}

int cmd_eval(const InputFlags& in, const SimFlags& sf, const EvalFlags& ef,
             const std::string& out_dir, std::ostream& out) {
    const RetrievalDataset data = load_dataset(in, true);
    const EvalReport report = multi_shot_trials(data, pipeline_config(sf), protocol(ef));
    const std::string text = io::format_report(report);
    if (!out_dir.empty()) io::write_text_file(prepare_out_dir(out_dir) / "report.txt", text);
    out << text;
    return 0;
}

int cmd_sweep(const InputFlags& in, const SimFlags& sf, const EvalFlags& ef,
              const std::vector<double>& lambdas, const std::vector<double>& alphas,
              const std::vector<std::size_t>& bigks, const std::string& out_dir,
              std::ostream& out) {
    if (lambdas.empty() && alphas.empty() && bigks.empty()) {
        throw Error("sweep grid is empty: give --lambda-grid, --alpha-grid or --bigk-grid");
    }
    const RetrievalDataset data = load_dataset(in, true);
    const TrialProtocol tp = protocol(ef);
    std::string csv = "param,value,map,rank1\n";
    auto point = [&](const std::string& name, const std::string& value, const SimFlags& f) {
        const EvalReport r = multi_shot_trials(data, pipeline_config(f), tp);
        csv += name + ',' + value + ',' + io::format_fixed(r.map) + ',' +
               io::format_fixed(r.rank(1)) + '\n';
    };
    for (double v : lambdas) {
        SimFlags f = sf;
        f.lambda = v;
        point("lambda", io::format_fixed(v), f);
    }
    for (double v : alphas) {
        SimFlags f = sf;
        f.alpha = v;
        point("alpha", io::format_fixed(v), f);
    }
    for (std::size_t v : bigks) {
        SimFlags f = sf;
        f.bigk = v;
        point("bigk", std::to_string(v), f);
    }
    if (!out_dir.empty()) io::write_text_file(prepare_out_dir(out_dir) / "sweep.csv", csv);
    out << csv;
    return 0;
}

int cmd_synth(const SynthConfig& cfg, const std::string& out_dir, std::ostream& out) {
    const SynthDataset data = generate(cfg);
    const fs::path dir = prepare_out_dir(out_dir);
    auto as_matrix = [](const EmbeddingSet& e) {
        const auto v = e.vectors();
        return Matrix<double>(e.size(), e.dim(), std::vector<double>(v.begin(), v.end()));
    };
    io::write_matrix_file(dir / "query_emb.simm", io::to_float(as_matrix(data.query)));
    io::write_matrix_file(dir / "gallery_emb.simm", io::to_float(as_matrix(data.gallery)));
    io::write_text_file(dir / "registry_q.txt", io::format_registry(data.query.samples()));
    io::write_text_file(dir / "registry_g.txt", io::format_registry(data.gallery.samples()));
    out << "wrote " << data.query.size() << " query and " << data.gallery.size()
        << " gallery embeddings to " << dir.string() << '\n';
    return 0;
}

int cmd_ablation(const SynthConfig& cfg, const SimFlags& sf, std::ostream& out) {
    out << "variant,map,rank1\n";
    for (const auto& row : ablation_suite(cfg, pipeline_config(sf).params)) {
        out << row.variant << ',' << io::format_fixed(row.map) << ','
            << io::format_fixed(row.rank1) << '\n';
    }
    return 0;
}

int cmd_gap(const SynthConfig& cfg, std::ostream& out) {
    const SynthDataset data = generate(cfg);
    const GapReport g = gap_report(data.query, data.gallery);
    out << "cross_map " << io::format_fixed(g.cross_map) << '\n'
        << "intra_map " << io::format_fixed(g.intra_map) << '\n';
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Similarity inference re-ranking for cross-modality retrieval", "simrank"};
    app.require_subcommand(1);

    InputFlags in;
    SimFlags sf;
    EvalFlags ef;
    SynthConfig synth_cfg;
    std::string out_dir = ".";
    std::string report_dir;
    std::vector<double> lambda_grid, alpha_grid;
    std::vector<std::size_t> bigk_grid;

    auto* rerank = app.add_subcommand("rerank", "re-rank a gallery and write d_sim + rankings");
    add_input_flags(*rerank, in, false);
    add_sim_flags(*rerank, sf);
    rerank->add_option("--out-dir", out_dir, "output directory")->capture_default_str();

    auto* eval = app.add_subcommand("eval", "multi-shot evaluation (mAP, CMC)");
    add_input_flags(*eval, in, true);
    add_sim_flags(*eval, sf);
    add_eval_flags(*eval, ef);
    eval->add_option("--out-dir", report_dir, "also write report.txt here");

    auto* sweep = app.add_subcommand("sweep", "evaluate a grid over lambda, alpha and K");
    add_input_flags(*sweep, in, true);
    add_sim_flags(*sweep, sf);
    add_eval_flags(*sweep, ef);
    sweep->add_option("--lambda-grid", lambda_grid, "comma-separated lambda values")->delimiter(',');
    sweep->add_option("--alpha-grid", alpha_grid, "comma-separated alpha values")->delimiter(',');
    sweep->add_option("--bigk-grid", bigk_grid, "comma-separated K values")->delimiter(',');
    sweep->add_option("--out-dir", report_dir, "also write sweep.csv here");

    auto* synth = app.add_subcommand("synth", "write a synthetic dataset");
    add_synth_flags(*synth, synth_cfg);
    synth->add_option("--out-dir", out_dir, "output directory")->capture_default_str();

    auto* ablation = app.add_subcommand("ablation", "baseline / SGR / MNNR / SIM on synthetic data");
    add_synth_flags(*ablation, synth_cfg);
    add_sim_flags(*ablation, sf);

    auto* gap = app.add_subcommand("gap", "cross- vs intra-modality mAP on synthetic data");
    add_synth_flags(*gap, synth_cfg);

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    if (storage.empty()) storage.emplace_back("simrank");
    for (auto& a : storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*rerank) return cmd_rerank(in, sf, out_dir, out);
        if (*eval) return cmd_eval(in, sf, ef, report_dir, out);
        if (*sweep) {
            return cmd_sweep(in, sf, ef, lambda_grid, alpha_grid, bigk_grid, report_dir, out);
        }
        if (*synth) return cmd_synth(synth_cfg, out_dir, out);
        if (*ablation) return cmd_ablation(synth_cfg, sf, out);
        if (*gap) return cmd_gap(synth_cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace sim::cli
