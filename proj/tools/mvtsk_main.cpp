#include "mvtsk/coop.hpp"
#include "mvtsk/experiment.hpp"
#include "mvtsk/kernels.hpp"
#include "mvtsk/model_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace mvtsk;

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct TrainArgs {
    std::string data, schema, out = "model.json";
    TrainOptions opt;
};

int run_train(const TrainArgs& a) {
    const MultiViewDataset data = load_multiview_csv(a.data, a.schema);
    const CoopModel model = train_model(data, a.opt);
    save_model(model, a.out);
    std::cout << "trained on " << data.samples() << " samples, " << data.view_count()
              << " views\n";
    std::cout << "training accuracy: " << model.training_accuracy << "\n";
    std::cout << "view weights:";
    for (std::size_t b = 0; b < model.weights.size(); ++b)
        std::cout << ' ' << model.block_names[b] << '=' << model.weights[b];
    std::cout << "\nmodel written to " << a.out << "\n";
    return 0;
}

struct PredictArgs {
    std::string model, data, schema, out = "predictions.csv";
};

int run_predict(const PredictArgs& a) {
    const CoopModel model = load_model(a.model);
    const MultiViewDataset data = load_multiview_csv(a.data, a.schema);
    const PredictResult res = predict_model(model, data);

    std::ofstream f(a.out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write " << a.out << "\n";
        return 1;
    }
    f << "predicted";
    for (const std::string& c : model.class_list) f << ",score_" << c;
    f << ",truth\n";
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        f << res.rows[i].label;
        for (double s : res.rows[i].fused) f << ',' << fmt17(s);
        f << ',' << data.labels[i] << "\n";
    }
    std::cout << res.rows.size() << " predictions written to " << a.out << "\n";
    if (res.accuracy) std::cout << "accuracy: " << *res.accuracy << "\n";
    return 0;
}

struct DumpArgs {
    std::string model;
    std::string block; // empty -> all
};

int run_dump(const DumpArgs& a) {
    const CoopModel model = load_model(a.model);
    bool found = false;
    for (std::size_t b = 0; b < model.rule_bases.size(); ++b) {
        if (!a.block.empty() && model.block_names[b] != a.block) continue;
        found = true;
        std::cout << "== " << model.block_names[b] << " (weight " << model.weights[b] << ") ==\n";
        std::cout << dump_rules(model.rule_bases[b], model.block_feature_names[b]);
    }
    if (!found) {
        std::cerr << "error: no block named '" << a.block << "' in this model\n";
        return 1;
    }
    return 0;
}

struct SynthArgs {
    std::string kind = "latent";
    std::size_t n = 150;
    std::uint64_t seed = 0;
    std::string data = "synth.csv", schema = "synth.schema.json";
};

int run_synth(const SynthArgs& a) {
    MultiViewDataset ds;
    if (a.kind == "latent")
        ds = synth_latent(a.n, a.seed);
    else if (a.kind == "xor")
        ds = synth_xor(a.n, a.seed);
    else if (a.kind == "noise-view")
        ds = synth_noise_view(a.n, a.seed);
    else {
        std::cerr << "error: unknown kind '" << a.kind << "'\n";
        return 1;
    }
    write_dataset_csv(ds, a.data, a.schema);
    std::cout << "wrote " << ds.samples() << " samples to " << a.data << " / " << a.schema << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-view TSK fuzzy classifier with a learned hidden view"};
    app.require_subcommand(1);

    TrainArgs ta;
    CLI::App* train = app.add_subcommand("train", "fit a model with fixed hyperparameters");
    train->add_option("--data", ta.data, "delimited data file")->required();
    train->add_option("--schema", ta.schema, "JSON schema sidecar")->required();
    train->add_option("--out", ta.out, "model output path")->capture_default_str();
    train->add_option("--seed", ta.opt.coop.seed, "random seed")->capture_default_str();
    train->add_option("--lambda1", ta.opt.coop.lambda1, "entropy strength")->capture_default_str();
    train->add_option("--lambda2", ta.opt.coop.lambda2, "ridge strength")->capture_default_str();
    train->add_option("--lambda3", ta.opt.coop.lambda3, "cooperation strength")->capture_default_str();
    train->add_option("--rules", ta.opt.coop.rules_visible, "rules per visible view")->capture_default_str();
    train->add_option("--rules-hidden", ta.opt.coop.rules_hidden,
                      "rules for the hidden view (0 = same as --rules)")->capture_default_str();
    train->add_option("--scale-h", ta.opt.coop.scale_h, "antecedent spread scale")->capture_default_str();
    train->add_option("--max-outer-iter", ta.opt.coop.max_outer_iter, "outer iteration cap")->capture_default_str();
    train->add_option("--fuzzifier", ta.opt.coop.fcm.fuzzifier, "clustering fuzzifier")->capture_default_str();
    train->add_flag("--no-hidden", [&ta](std::int64_t) { ta.opt.use_hidden = false; },
                    "train without the hidden view");
    train->add_option("--rank", ta.opt.nmf.rank, "hidden dimension")->capture_default_str();
    train->add_option("--beta", ta.opt.nmf.beta, "graph smoothness strength")->capture_default_str();
    train->add_option("--neighbors", ta.opt.nmf.neighbors, "graph neighbor count")->capture_default_str();
    train->add_option("--nmf-max-iter", ta.opt.nmf.max_iter, "factorization sweep cap")->capture_default_str();

    PredictArgs pa;
    CLI::App* predict = app.add_subcommand("predict", "score a data file with a trained model");
    predict->add_option("--model", pa.model, "model JSON path")->required();
    predict->add_option("--data", pa.data, "delimited data file")->required();
    predict->add_option("--schema", pa.schema, "JSON schema sidecar")->required();
    predict->add_option("--out", pa.out, "predictions output path")->capture_default_str();

    DumpArgs da;
    CLI::App* dump = app.add_subcommand("dump-rules", "print a model's rule bases");
    dump->add_option("--model", da.model, "model JSON path")->required();
    dump->add_option("--block", da.block, "only this feature block (view name or 'hidden')");

    ExperimentConfig ec;
    std::string config_path;
    CLI::App* exp = app.add_subcommand("experiment", "cross-validated benchmark with baselines");
    exp->add_option("--config", config_path, "JSON config file (flags override it)");
    auto* o_data = exp->add_option("--data", ec.data_path, "delimited data file");
    auto* o_schema = exp->add_option("--schema", ec.schema_path, "JSON schema sidecar");
    auto* o_out = exp->add_option("--out-dir", ec.out_dir, "report output directory")->capture_default_str();
    auto* o_seed = exp->add_option("--seed", ec.seed, "random seed")->required();
    auto* o_folds = exp->add_option("--folds", ec.folds, "outer folds")->capture_default_str();
    auto* o_inner = exp->add_option("--inner-folds", ec.inner_folds, "selection folds")->capture_default_str();
    auto* o_rules = exp->add_option("--rule-grid", ec.rule_grid, "rule count candidates");
    auto* o_frac = exp->add_option("--hidden-fractions", ec.hidden_fractions,
                                   "hidden size as fractions of the smallest view");
    auto* o_l1 = exp->add_option("--lambda1-grid", ec.lambda1_grid, "entropy grid");
    auto* o_l2 = exp->add_option("--lambda2-grid", ec.lambda2_grid, "ridge grid");
    auto* o_l3 = exp->add_option("--lambda3-grid", ec.lambda3_grid, "cooperation grid");
    auto* o_beta = exp->add_option("--beta", ec.beta, "graph smoothness strength")->capture_default_str();
    auto* o_nb = exp->add_option("--neighbors", ec.neighbors, "graph neighbor count")->capture_default_str();
    auto* o_h = exp->add_option("--scale-h", ec.scale_h, "antecedent spread scale")->capture_default_str();
    auto* o_fz = exp->add_option("--fuzzifier", ec.fuzzifier, "clustering fuzzifier")->capture_default_str();
    auto* o_moi = exp->add_option("--max-outer-iter", ec.max_outer_iter, "outer iteration cap")->capture_default_str();
    auto* o_nmi = exp->add_option("--nmf-max-iter", ec.nmf_max_iter, "factorization sweep cap")->capture_default_str();
    auto* o_nobl = exp->add_flag("--no-baselines", "skip every baseline");

    SynthArgs sa;
    CLI::App* synth = app.add_subcommand("synth", "generate a seeded synthetic dataset");
    synth->add_option("--kind", sa.kind, "latent | xor | noise-view")->capture_default_str();
    synth->add_option("--n", sa.n, "sample count")->capture_default_str();
    synth->add_option("--seed", sa.seed, "random seed")->capture_default_str();
    synth->add_option("--data", sa.data, "data output path")->capture_default_str();
    synth->add_option("--schema", sa.schema, "schema output path")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(train)) return run_train(ta);
        if (app.got_subcommand(predict)) return run_predict(pa);
        if (app.got_subcommand(dump)) return run_dump(da);
        if (app.got_subcommand(synth)) return run_synth(sa);
        if (app.got_subcommand(exp)) {
            if (!config_path.empty()) {
                ExperimentConfig file_cfg = config_from_json(config_path);
                // Explicit flags win over the config file.
                if (!*o_data) ec.data_path = file_cfg.data_path;
                if (!*o_schema) ec.schema_path = file_cfg.schema_path;
                if (!*o_out) ec.out_dir = file_cfg.out_dir;
                if (!*o_seed) ec.seed = file_cfg.seed;
                if (!*o_folds) ec.folds = file_cfg.folds;
                if (!*o_inner) ec.inner_folds = file_cfg.inner_folds;
                if (!*o_rules) ec.rule_grid = file_cfg.rule_grid;
                if (!*o_frac) ec.hidden_fractions = file_cfg.hidden_fractions;
                if (!*o_l1) ec.lambda1_grid = file_cfg.lambda1_grid;
                if (!*o_l2) ec.lambda2_grid = file_cfg.lambda2_grid;
                if (!*o_l3) ec.lambda3_grid = file_cfg.lambda3_grid;
                if (!*o_beta) ec.beta = file_cfg.beta;
                if (!*o_nb) ec.neighbors = file_cfg.neighbors;
                if (!*o_h) ec.scale_h = file_cfg.scale_h;
                if (!*o_fz) ec.fuzzifier = file_cfg.fuzzifier;
                if (!*o_moi) ec.max_outer_iter = file_cfg.max_outer_iter;
                if (!*o_nmi) ec.nmf_max_iter = file_cfg.nmf_max_iter;
                ec.baselines = file_cfg.baselines;
            }
            if (*o_nobl) ec.baselines = BaselineToggles{false, false, false, false};
            const ExperimentReport rep = run_experiment(ec);
            emit_report(rep, ec.out_dir);
            std::cout << "method,mean,std\n";
            for (const MethodResult& m : rep.methods)
                std::cout << m.name << ',' << m.mean << ',' << m.stdev << "\n";
            std::cout << "report written to " << ec.out_dir << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
