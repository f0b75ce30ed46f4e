#include "mvtsk/experiment.hpp"

#include "mvtsk/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mvtsk {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

double pop_std(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / double(v.size()));
}

double fold_accuracy(const PredictResult& pred) {
    if (!pred.accuracy) throw std::runtime_error("experiment: evaluation data has no labels");
    return *pred.accuracy;
}

/// Accuracy of one block's own (unfused) outputs.
double block_accuracy(const PredictResult& pred, const std::vector<std::string>& labels,
                      const std::vector<std::string>& class_list, std::size_t block) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.rows.size(); ++i)
        if (decode_argmax(pred.rows[i].per_block.at(block), class_list) == labels[i]) ++correct;
    return double(correct) / double(pred.rows.size());
}

MultiViewDataset single_view(const MultiViewDataset& data, std::size_t k) {
    MultiViewDataset out;
    out.views = {data.views[k]};
    out.labels = data.labels;
    out.view_names = {data.view_names[k]};
    out.feature_names = {data.feature_names[k]};
    return out;
}

TrainOptions make_options(const ExperimentConfig& cfg, std::size_t rules, double l1, double l2,
                          double l3, bool hidden, std::size_t rank, std::uint64_t seed) {
    TrainOptions o;
    o.coop.lambda1 = l1;
    o.coop.lambda2 = l2;
    o.coop.lambda3 = l3;
    o.coop.rules_visible = rules;
    o.coop.rules_hidden = 0;
    o.coop.scale_h = cfg.scale_h;
    o.coop.max_outer_iter = cfg.max_outer_iter;
    o.coop.seed = seed;
    o.coop.fcm.fuzzifier = cfg.fuzzifier;
    o.use_hidden = hidden;
    o.nmf.rank = rank;
    o.nmf.beta = cfg.beta;
    o.nmf.neighbors = cfg.neighbors;
    o.nmf.max_iter = cfg.nmf_max_iter;
    o.record_training_accuracy = false;
    return o;
}

struct InnerSplits {
    std::vector<MultiViewDataset> train, test;
};

InnerSplits materialize_inner(const MultiViewDataset& tr, std::size_t folds, std::uint64_t seed) {
    InnerSplits out;
    for (const FoldSplit& s : stratified_kfold(tr, folds, seed)) {
        out.train.push_back(tr.subset(s.train));
        out.test.push_back(tr.subset(s.test));
    }
    return out;
}

double inner_cv_accuracy(const InnerSplits& inner, TrainOptions opts, std::uint64_t seed_base) {
    double sum = 0.0;
    for (std::size_t i = 0; i < inner.train.size(); ++i) {
        opts.coop.seed = mix_seed(seed_base, i + 1);
        const CoopModel model = train_model(inner.train[i], opts);
        sum += fold_accuracy(predict_model(model, inner.test[i]));
    }
    return sum / double(inner.train.size());
}

std::vector<std::size_t> rank_candidates(const std::vector<double>& fractions, std::size_t r_min) {
    std::vector<std::size_t> ranks;
    for (double f : fractions) {
        const auto r = std::max<std::size_t>(1, std::size_t(std::ceil(f * double(r_min) - 1e-9)));
        if (std::find(ranks.begin(), ranks.end(), r) == ranks.end()) ranks.push_back(r);
    }
    return ranks;
}

json config_to_json(const ExperimentConfig& c) {
    return json{{"data", c.data_path},
                {"schema", c.schema_path},
                {"out_dir", c.out_dir},
                {"folds", c.folds},
                {"inner_folds", c.inner_folds},
                {"seed", c.seed},
                {"rule_grid", c.rule_grid},
                {"hidden_fractions", c.hidden_fractions},
                {"lambda1_grid", c.lambda1_grid},
                {"lambda2_grid", c.lambda2_grid},
                {"lambda3_grid", c.lambda3_grid},
                {"beta", c.beta},
                {"neighbors", c.neighbors},
                {"scale_h", c.scale_h},
                {"fuzzifier", c.fuzzifier},
                {"max_outer_iter", c.max_outer_iter},
                {"nmf_max_iter", c.nmf_max_iter},
                {"baselines",
                 {{"no_hidden", c.baselines.no_hidden},
                  {"single_view", c.baselines.single_view},
                  {"concat", c.baselines.concat},
                  {"average", c.baselines.average}}}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string sanitize(const std::string& name) {
    std::string s = name;
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

} // namespace

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.folds < 2) throw std::invalid_argument("config: folds must be at least 2");
    if (cfg.inner_folds < 2) throw std::invalid_argument("config: inner_folds must be at least 2");
    if (cfg.rule_grid.empty() || cfg.hidden_fractions.empty() || cfg.lambda1_grid.empty() ||
        cfg.lambda2_grid.empty() || cfg.lambda3_grid.empty())
        throw std::invalid_argument("config: grids must be non-empty");
    for (std::size_t r : cfg.rule_grid)
        if (r < 1) throw std::invalid_argument("config: rule counts must be at least 1");
    for (double f : cfg.hidden_fractions)
        if (!(f > 0.0) || f > 1.0)
            throw std::invalid_argument("config: hidden fractions must lie in (0, 1]");
    for (const auto* grid : {&cfg.lambda1_grid, &cfg.lambda2_grid, &cfg.lambda3_grid})
        for (double l : *grid)
            if (!(l > 0.0)) throw std::invalid_argument("config: lambda grid values must be positive");
    if (!(cfg.beta >= 0.0)) throw std::invalid_argument("config: beta must be non-negative");
    if (!(cfg.scale_h > 0.0)) throw std::invalid_argument("config: scale_h must be positive");
    if (!(cfg.fuzzifier > 1.0)) throw std::invalid_argument("config: fuzzifier must exceed 1");
    if (cfg.neighbors < 1) throw std::invalid_argument("config: neighbors must be at least 1");
    if (cfg.max_outer_iter < 1 || cfg.nmf_max_iter < 1)
        throw std::invalid_argument("config: iteration caps must be at least 1");
}

ExperimentConfig config_from_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": config JSON parse error: " + e.what());
    }

    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("data", c.data_path);
    get("schema", c.schema_path);
    get("out_dir", c.out_dir);
    get("folds", c.folds);
    get("inner_folds", c.inner_folds);
    get("seed", c.seed);
    get("rule_grid", c.rule_grid);
    get("hidden_fractions", c.hidden_fractions);
    get("lambda1_grid", c.lambda1_grid);
    get("lambda2_grid", c.lambda2_grid);
    get("lambda3_grid", c.lambda3_grid);
    get("beta", c.beta);
    get("neighbors", c.neighbors);
    get("scale_h", c.scale_h);
    get("fuzzifier", c.fuzzifier);
    get("max_outer_iter", c.max_outer_iter);
    get("nmf_max_iter", c.nmf_max_iter);
    if (j.contains("baselines")) {
        const json& b = j.at("baselines");
        if (b.contains("no_hidden")) c.baselines.no_hidden = b.at("no_hidden").get<bool>();
        if (b.contains("single_view")) c.baselines.single_view = b.at("single_view").get<bool>();
        if (b.contains("concat")) c.baselines.concat = b.at("concat").get<bool>();
        if (b.contains("average")) c.baselines.average = b.at("average").get<bool>();
    }
    return c;
}

ExperimentReport run_experiment(const MultiViewDataset& data, const ExperimentConfig& cfg,
                                const std::string& dataset_name) {
    validate_config(cfg);
    if (data.view_count() == 0 || data.samples() == 0)
        throw std::invalid_argument("experiment: empty dataset");

    ExperimentReport rep;
    rep.dataset_name = dataset_name;
    rep.samples = data.samples();
    rep.view_names = data.view_names;
    rep.class_list = collect_classes(data.labels);
    rep.config = cfg;
    rep.block_names = data.view_names;
    rep.block_names.push_back("hidden");

    const std::size_t k_views = data.view_count();
    std::size_t r_min = data.views[0].cols();
    for (const Matrix& v : data.views) r_min = std::min(r_min, v.cols());
    const std::vector<std::size_t> ranks = rank_candidates(cfg.hidden_fractions, r_min);

    // Fixed row order for the accuracy table.
    std::vector<MethodResult> methods;
    for (const std::string& name : data.view_names) methods.push_back({"view:" + name, {}, 0, 0});
    methods.push_back({"hidden", {}, 0, 0});
    methods.push_back({"integration", {}, 0, 0});
    if (cfg.baselines.no_hidden) methods.push_back({"no_hidden", {}, 0, 0});
    if (cfg.baselines.single_view)
        for (const std::string& name : data.view_names)
            methods.push_back({"single:" + name, {}, 0, 0});
    if (cfg.baselines.concat) methods.push_back({"concat", {}, 0, 0});
    if (cfg.baselines.average) methods.push_back({"average_fusion", {}, 0, 0});
    auto method = [&](const std::string& name) -> MethodResult& {
        for (MethodResult& m : methods)
            if (m.name == name) return m;
        throw std::logic_error("unknown method row " + name);
    };

    const auto splits = stratified_kfold(data, cfg.folds, mix_seed(cfg.seed, 0xf01d5));
    const auto mid = [](const std::vector<double>& g) { return g[g.size() / 2]; };

    for (std::size_t fold = 0; fold < splits.size(); ++fold) {
        const auto t0 = std::chrono::steady_clock::now();
        const MultiViewDataset tr = data.subset(splits[fold].train);
        const MultiViewDataset te = data.subset(splits[fold].test);
        const std::uint64_t fold_seed = mix_seed(cfg.seed, fold + 1);
        const InnerSplits inner =
            materialize_inner(tr, cfg.inner_folds, mix_seed(fold_seed, 0x1c5));

        // Stage 1: rule count and lambdas without the hidden view. Lambdas
        // are tuned one grid at a time from the grid midpoints; ties keep the
        // earliest candidate so the search is deterministic.
        std::size_t best_rules = cfg.rule_grid[0];
        double best_l1 = mid(cfg.lambda1_grid), best_l2 = mid(cfg.lambda2_grid),
               best_l3 = mid(cfg.lambda3_grid);
        double best_acc = -1.0;
        for (std::size_t rules : cfg.rule_grid) {
            double l1 = mid(cfg.lambda1_grid), l2 = mid(cfg.lambda2_grid),
                   l3 = mid(cfg.lambda3_grid);
            double acc = -1.0;
            const std::vector<double>* grids[3] = {&cfg.lambda1_grid, &cfg.lambda2_grid,
                                                   &cfg.lambda3_grid};
            double* coords[3] = {&l1, &l2, &l3};
            for (int c = 0; c < 3; ++c) {
                double best_v = *coords[c], best_v_acc = -1.0;
                for (double v : *grids[c]) {
                    *coords[c] = v;
                    const double a = inner_cv_accuracy(
                        inner, make_options(cfg, rules, l1, l2, l3, false, 1, 0),
                        mix_seed(fold_seed, 0x57a6e1));
                    if (a > best_v_acc) {
                        best_v_acc = a;
                        best_v = v;
                    }
                }
                *coords[c] = best_v;
                acc = best_v_acc;
            }
            if (acc > best_acc) {
                best_acc = acc;
                best_rules = rules;
                best_l1 = l1;
                best_l2 = l2;
                best_l3 = l3;
            }
        }

        // Stage 2: hidden dimension sweep with the stage-1 choices fixed.
        std::size_t best_rank = ranks[0];
        double best_rank_acc = -1.0;
        for (std::size_t rank : ranks) {
            const double a = inner_cv_accuracy(
                inner, make_options(cfg, best_rules, best_l1, best_l2, best_l3, true, rank, 0),
                mix_seed(fold_seed, 0x57a6e2));
            if (a > best_rank_acc) {
                best_rank_acc = a;
                best_rank = rank;
            }
        }

        // Final fits on the full outer-train split.
        const std::uint64_t final_seed = mix_seed(fold_seed, 0xf17);
        TrainOptions main_opts =
            make_options(cfg, best_rules, best_l1, best_l2, best_l3, true, best_rank, final_seed);
        const CoopModel main_model = train_model(tr, main_opts);
        const PredictResult main_pred = predict_model(main_model, te);

        // Block scores follow the fold model's class order, not the
        // whole-dataset order; decode them with the order they carry.
        for (std::size_t k = 0; k < k_views; ++k)
            method("view:" + data.view_names[k])
                .fold_accuracies.push_back(
                    block_accuracy(main_pred, te.labels, main_model.class_list, k));
        method("hidden").fold_accuracies.push_back(
            block_accuracy(main_pred, te.labels, main_model.class_list, k_views));
        method("integration").fold_accuracies.push_back(fold_accuracy(main_pred));

        if (cfg.baselines.no_hidden) {
            TrainOptions opts = main_opts;
            opts.use_hidden = false;
            method("no_hidden").fold_accuracies.push_back(
                fold_accuracy(predict_model(train_model(tr, opts), te)));
        }
        std::vector<PredictResult> single_preds;
        std::vector<std::string> single_classes; // shared by all k: same train labels
        if (cfg.baselines.single_view || cfg.baselines.average) {
            for (std::size_t k = 0; k < k_views; ++k) {
                TrainOptions opts = main_opts;
                opts.use_hidden = false;
                const CoopModel m = train_model(single_view(tr, k), opts);
                if (k == 0) single_classes = m.class_list;
                single_preds.push_back(predict_model(m, single_view(te, k)));
            }
        }
        if (cfg.baselines.single_view)
            for (std::size_t k = 0; k < k_views; ++k)
                method("single:" + data.view_names[k])
                    .fold_accuracies.push_back(fold_accuracy(single_preds[k]));
        if (cfg.baselines.concat) {
            TrainOptions opts = main_opts;
            opts.use_hidden = false;
            const CoopModel m = train_model(tr.concatenated(), opts);
            method("concat").fold_accuracies.push_back(
                fold_accuracy(predict_model(m, te.concatenated())));
        }
        if (cfg.baselines.average) {
            std::size_t correct = 0;
            const std::vector<double> uniform(k_views, 1.0 / double(k_views));
            for (std::size_t i = 0; i < te.samples(); ++i) {
                std::vector<std::vector<double>> scores;
                scores.reserve(k_views);
                for (std::size_t k = 0; k < k_views; ++k)
                    scores.push_back(single_preds[k].rows[i].fused);
                if (decode_argmax(fuse_scores(scores, uniform), single_classes) == te.labels[i])
                    ++correct;
            }
            method("average_fusion")
                .fold_accuracies.push_back(double(correct) / double(te.samples()));
        }

        FoldDetail detail;
        detail.fold = fold;
        detail.rules = best_rules;
        detail.lambda1 = best_l1;
        detail.lambda2 = best_l2;
        detail.lambda3 = best_l3;
        detail.rank = best_rank;
        detail.weights = main_model.weights;
        detail.coop_trace = main_model.objective_trace;
        detail.nmf_trace = main_model.hidden.objective_trace;
        rep.fold_details.push_back(std::move(detail));

        if (fold == 0)
            for (std::size_t b = 0; b < main_model.rule_bases.size(); ++b)
                rep.rule_dumps.emplace_back(
                    main_model.block_names[b],
                    dump_rules(main_model.rule_bases[b], main_model.block_feature_names[b]));

        rep.fold_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }

    for (MethodResult& m : methods) {
        m.mean = mean_of(m.fold_accuracies);
        m.stdev = pop_std(m.fold_accuracies, m.mean);
    }
    rep.methods = std::move(methods);
    return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.data_path.empty() || cfg.schema_path.empty())
        throw std::invalid_argument("experiment: data and schema paths are required");
    const MultiViewDataset data = load_multiview_csv(cfg.data_path, cfg.schema_path);
    return run_experiment(data, cfg, cfg.data_path);
}

std::string report_to_json(const ExperimentReport& rep) {
    json j;
    j["format"] = "mvtsk-report";
    j["version"] = rep.version;
    j["dataset"] = json{{"name", rep.dataset_name},
                        {"samples", rep.samples},
                        {"views", rep.view_names},
                        {"classes", rep.class_list}};
    j["config"] = config_to_json(rep.config);
    j["block_names"] = rep.block_names;
    json methods = json::array();
    for (const MethodResult& m : rep.methods)
        methods.push_back(json{{"name", m.name},
                               {"fold_accuracies", m.fold_accuracies},
                               {"mean", m.mean},
                               {"std", m.stdev}});
    j["methods"] = std::move(methods);
    json folds = json::array();
    for (const FoldDetail& f : rep.fold_details)
        folds.push_back(json{{"fold", f.fold},
                             {"rules", f.rules},
                             {"lambda1", f.lambda1},
                             {"lambda2", f.lambda2},
                             {"lambda3", f.lambda3},
                             {"rank", f.rank},
                             {"weights", f.weights},
                             {"coop_trace", f.coop_trace},
                             {"nmf_trace", f.nmf_trace}});
    j["folds"] = std::move(folds);
    return j.dump(2) + "\n";
}

void emit_report(const ExperimentReport& rep, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    write_file(dir / "report.json", report_to_json(rep));

    std::string table = "method,mean,std";
    for (std::size_t f = 0; f < rep.config.folds; ++f)
        table += ",fold_" + std::to_string(f + 1);
    table += "\n";
    for (const MethodResult& m : rep.methods) {
        table += m.name + "," + fmt("%.10g", m.mean) + "," + fmt("%.10g", m.stdev);
        for (double a : m.fold_accuracies) table += "," + fmt("%.10g", a);
        table += "\n";
    }
    write_file(dir / "accuracy_table.csv", table);

    std::string conv = "context,fold,iteration,objective\n";
    for (const FoldDetail& f : rep.fold_details) {
        for (std::size_t i = 0; i < f.coop_trace.size(); ++i)
            conv += "coop," + std::to_string(f.fold) + "," + std::to_string(i) + "," +
                    fmt("%.17g", f.coop_trace[i]) + "\n";
        for (std::size_t i = 0; i < f.nmf_trace.size(); ++i)
            conv += "nmf," + std::to_string(f.fold) + "," + std::to_string(i) + "," +
                    fmt("%.17g", f.nmf_trace[i]) + "\n";
    }
    write_file(dir / "convergence.csv", conv);

    for (const auto& [block, text] : rep.rule_dumps)
        write_file(dir / ("rules_" + sanitize(block) + ".txt"), text);

    // Wall-clock times live outside the report so reruns of the same
    // experiment stay byte-identical in everything above.
    std::string times = "fold,seconds\n";
    for (std::size_t f = 0; f < rep.fold_seconds.size(); ++f)
        times += std::to_string(f) + "," + fmt("%.6f", rep.fold_seconds[f]) + "\n";
    write_file(dir / "timings.csv", times);
}

MultiViewDataset synth_latent(std::size_t n, std::uint64_t seed) {
    const double mu[3][2] = {{0.2, 0.2}, {0.8, 0.3}, {0.5, 0.9}};
    const std::size_t dims[2] = {4, 4};
    Matrix maps[2] = {Matrix(2, dims[0], 0.0), Matrix(2, dims[1], 0.0)};
    for (int k = 0; k < 2; ++k) {
        Rng map_rng(mix_seed(seed, 0xa0 + std::uint64_t(k)));
        for (double& v : maps[k].storage()) v = map_rng.uniform(0.2, 1.0);
    }

    MultiViewDataset ds;
    ds.view_names = {"view_a", "view_b"};
    ds.feature_names = {{"a1", "a2", "a3", "a4"}, {"b1", "b2", "b3", "b4"}};
    ds.views = {Matrix(n, dims[0], 0.0), Matrix(n, dims[1], 0.0)};
    Rng rng(mix_seed(seed, 0x5a11));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i % 3;
        const double z0 = mu[c][0] + 0.08 * rng.gaussian();
        const double z1 = mu[c][1] + 0.08 * rng.gaussian();
        ds.labels.push_back("c" + std::to_string(c + 1));
        for (int k = 0; k < 2; ++k)
            for (std::size_t d = 0; d < dims[k]; ++d)
                ds.views[k](i, d) = z0 * maps[k](0, d) + z1 * maps[k](1, d) + 0.12 * rng.gaussian();
    }
    return ds;
}

MultiViewDataset synth_xor(std::size_t n, std::uint64_t seed) {
    MultiViewDataset ds;
    ds.view_names = {"view_a", "view_b"};
    ds.feature_names = {{"a1", "a2", "a3"}, {"b1", "b2", "b3"}};
    ds.views = {Matrix(n, 3, 0.0), Matrix(n, 3, 0.0)};
    Rng rng(mix_seed(seed, 0x0e12));
    for (std::size_t i = 0; i < n; ++i) {
        double x = 0.0, y = 0.0;
        // Margin around the axes keeps the checkerboard classes separable.
        do {
            x = rng.uniform(-1.0, 1.0);
        } while (std::abs(x) < 0.15);
        do {
            y = rng.uniform(-1.0, 1.0);
        } while (std::abs(y) < 0.15);
        ds.labels.push_back(x * y > 0.0 ? "same" : "diff");
        ds.views[0](i, 0) = x + 0.05 * rng.gaussian();
        ds.views[0](i, 1) = 0.3 * rng.gaussian();
        ds.views[0](i, 2) = 0.3 * rng.gaussian();
        ds.views[1](i, 0) = y + 0.05 * rng.gaussian();
        ds.views[1](i, 1) = 0.3 * rng.gaussian();
        ds.views[1](i, 2) = 0.3 * rng.gaussian();
    }
    return ds;
}

MultiViewDataset synth_noise_view(std::size_t n, std::uint64_t seed) {
    const double mu[3][2] = {{0.1, 0.1}, {0.5, 0.9}, {0.9, 0.2}};
    MultiViewDataset ds;
    ds.view_names = {"signal", "noise"};
    ds.feature_names = {{"s1", "s2"}, {"n1", "n2"}};
    ds.views = {Matrix(n, 2, 0.0), Matrix(n, 2, 0.0)};
    Rng rng(mix_seed(seed, 0x015e));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i % 3;
        ds.labels.push_back("c" + std::to_string(c + 1));
        ds.views[0](i, 0) = mu[c][0] + 0.1 * rng.gaussian();
        ds.views[0](i, 1) = mu[c][1] + 0.1 * rng.gaussian();
        ds.views[1](i, 0) = rng.gaussian();
        ds.views[1](i, 1) = rng.gaussian();
    }
    return ds;
}

void write_dataset_csv(const MultiViewDataset& data, const std::string& data_path,
                       const std::string& schema_path) {
    std::string csv;
    for (std::size_t k = 0; k < data.view_count(); ++k)
        for (const std::string& f : data.feature_names[k]) csv += f + ",";
    csv += "label\n";
    for (std::size_t i = 0; i < data.samples(); ++i) {
        for (std::size_t k = 0; k < data.view_count(); ++k)
            for (std::size_t d = 0; d < data.views[k].cols(); ++d)
                csv += fmt("%.17g", data.views[k](i, d)) + ",";
        csv += data.labels[i] + "\n";
    }
    write_file(data_path, csv);

    json views = json::array();
    for (std::size_t k = 0; k < data.view_count(); ++k)
        views.push_back(json{{"name", data.view_names[k]}, {"columns", data.feature_names[k]}});
    write_file(schema_path, json{{"views", std::move(views)}, {"label", "label"}}.dump(2) + "\n");
}

} // namespace mvtsk
