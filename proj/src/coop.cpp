#include "mvtsk/coop.hpp"

#include "mvtsk/kernels.hpp"
#include "mvtsk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvtsk {

namespace {

void check_lambdas(const CoopConfig& cfg) {
    if (!(cfg.lambda1 > 0.0) || !(cfg.lambda2 > 0.0) || !(cfg.lambda3 > 0.0))
        throw std::invalid_argument("coop: lambda1, lambda2, lambda3 must be positive");
}

void scale_in_place(Matrix& m, double s) {
    for (double& v : m.storage()) v *= s;
}

void add_in_place(Matrix& a, double s, const Matrix& b) {
    active_kernels().axpy(s, b.data(), a.data(), a.rows() * a.cols());
}

/// Average of the other blocks' outputs; the lone-block case has no others,
/// so callers must disable the cooperation term alongside this.
Matrix coop_target(const std::vector<Matrix>& outputs, const Matrix& outputs_sum, std::size_t k) {
    Matrix t = outputs_sum;
    add_in_place(t, -1.0, outputs[k]);
    scale_in_place(t, 1.0 / double(outputs.size() - 1));
    return t;
}

} // namespace

Matrix solve_consequents(const Matrix& g, double view_weight, const Matrix& targets,
                         const Matrix& coop_targets, double lambda2, double lambda3) {
    if (!(lambda2 > 0.0)) throw std::invalid_argument("solve_consequents: lambda2 must be positive");
    if (lambda3 < 0.0) throw std::invalid_argument("solve_consequents: lambda3 must be non-negative");
    if (view_weight < 0.0) throw std::invalid_argument("solve_consequents: negative view weight");
    if (g.rows() != targets.rows() || targets.rows() != coop_targets.rows() ||
        targets.cols() != coop_targets.cols())
        throw std::invalid_argument("solve_consequents: dimension mismatch");
    if (!g.all_finite() || !targets.all_finite() || !coop_targets.all_finite())
        throw std::invalid_argument("solve_consequents: non-finite input");

    Matrix a = matmul_t_left(g, g);
    scale_in_place(a, view_weight + lambda3);
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += lambda2 / 2.0;

    Matrix b = matmul_t_left(g, targets);
    scale_in_place(b, view_weight);
    add_in_place(b, lambda3, matmul_t_left(g, coop_targets));
    return cholesky_solve(a, b);
}

std::vector<double> update_weights(const std::vector<double>& sq_errors, double lambda1) {
    if (sq_errors.empty()) throw std::invalid_argument("update_weights: no errors given");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("update_weights: lambda1 must be positive");
    for (double e : sq_errors)
        if (!std::isfinite(e)) throw std::invalid_argument("update_weights: non-finite error");

    const double shift = *std::min_element(sq_errors.begin(), sq_errors.end());
    std::vector<double> w(sq_errors.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = std::exp(-(sq_errors[k] - shift) / lambda1);
        sum += w[k];
    }
    for (double& v : w) v /= sum;
    return w;
}

double coop_objective(const std::vector<Matrix>& g, const std::vector<Matrix>& consequents,
                      const std::vector<double>& weights, const Matrix& targets, double lambda1,
                      double lambda2, double lambda3) {
    const std::size_t v = g.size();
    if (consequents.size() != v || weights.size() != v)
        throw std::invalid_argument("coop_objective: block count mismatch");

    std::vector<Matrix> outputs;
    outputs.reserve(v);
    for (std::size_t k = 0; k < v; ++k) outputs.push_back(matmul(g[k], consequents[k]));

    double j = 0.0;
    for (std::size_t k = 0; k < v; ++k) {
        j += weights[k] * frobenius_sq_diff(outputs[k], targets);
        j += lambda1 * (weights[k] > 0.0 ? weights[k] * std::log(weights[k]) : 0.0);
        j += lambda2 / 2.0 * frobenius_sq(consequents[k]);
    }
    if (v > 1 && lambda3 > 0.0) {
        Matrix sum(targets.rows(), targets.cols(), 0.0);
        for (const Matrix& o : outputs) add_in_place(sum, 1.0, o);
        for (std::size_t k = 0; k < v; ++k)
            j += lambda3 * frobenius_sq_diff(outputs[k], coop_target(outputs, sum, k));
    }
    return j;
}

CoopSolveResult coop_solve(const std::vector<Matrix>& g, const Matrix& targets,
                           const CoopConfig& cfg) {
    check_lambdas(cfg);
    if (g.empty()) throw std::invalid_argument("coop_solve: no feature blocks");
    for (const Matrix& gk : g)
        if (gk.rows() != targets.rows())
            throw std::invalid_argument("coop_solve: block row count does not match targets");
    if (cfg.max_outer_iter < 1) throw std::invalid_argument("coop_solve: max_outer_iter < 1");

    const std::size_t v = g.size();
    const std::size_t n = targets.rows(), c = targets.cols();
    const double l3 = v > 1 ? cfg.lambda3 : 0.0; // a lone block has nobody to cooperate with
    const Matrix zero_target(n, c, 0.0);

    CoopSolveResult res;
    res.weights.assign(v, 1.0 / double(v));
    res.consequents.reserve(v);
    for (const Matrix& gk : g) res.consequents.emplace_back(gk.cols(), c, 0.0);

    double prev = coop_objective(g, res.consequents, res.weights, targets, cfg.lambda1,
                                 cfg.lambda2, l3);
    res.objective_trace.push_back(prev);

    for (std::size_t it = 0; it < cfg.max_outer_iter; ++it) {
        // Cooperation targets frozen at this sweep's incoming outputs; every
        // block then solves against the same snapshot.
        std::vector<Matrix> outputs;
        outputs.reserve(v);
        for (std::size_t k = 0; k < v; ++k) outputs.push_back(matmul(g[k], res.consequents[k]));
        Matrix sum(n, c, 0.0);
        for (const Matrix& o : outputs) add_in_place(sum, 1.0, o);

        std::vector<Matrix> next;
        next.reserve(v);
        for (std::size_t k = 0; k < v; ++k) {
            const Matrix ybar = v > 1 ? coop_target(outputs, sum, k) : zero_target;
            next.push_back(solve_consequents(g[k], res.weights[k], targets, ybar, cfg.lambda2, l3));
        }

        std::vector<double> errors(v);
        for (std::size_t k = 0; k < v; ++k)
            errors[k] = frobenius_sq_diff(matmul(g[k], next[k]), targets);
        std::vector<double> weights = update_weights(errors, cfg.lambda1);

        const double cur =
            coop_objective(g, next, weights, targets, cfg.lambda1, cfg.lambda2, l3);
        // The simultaneous sweep is not a strict descent step: each block
        // ignores its own effect on the others' cooperation targets. Commit
        // only improving sweeps; the first non-improving one means we are done.
        if (cur > prev) break;
        res.consequents = std::move(next);
        res.weights = std::move(weights);
        res.objective_trace.push_back(cur);
        if (std::abs(prev - cur) < cfg.tol * std::max(std::abs(prev), 1e-300)) break;
        prev = cur;
    }
    return res;
}

CoopFit coop_fit(const std::vector<Matrix>& blocks, const std::vector<std::size_t>& rules_per_block,
                 const Matrix& targets, const CoopConfig& cfg) {
    if (blocks.size() != rules_per_block.size())
        throw std::invalid_argument("coop_fit: one rule count per block required");
    for (std::size_t r : rules_per_block)
        if (r < 1) throw std::invalid_argument("coop_fit: rule counts must be at least 1");

    CoopFit fit;
    fit.rule_bases.resize(blocks.size());
    std::vector<Matrix> mapped;
    mapped.reserve(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        FcmParams fcm = cfg.fcm;
        fcm.seed = mix_seed(cfg.seed, 2000 + b);
        // Rule count cannot exceed the sample count (one cluster per sample
        // at most); clamp so small folds stay usable with coarse grids.
        const std::size_t rules = std::min(rules_per_block[b], blocks[b].rows());
        fit.rule_bases[b].ant = estimate_antecedents(blocks[b], rules, cfg.scale_h, fcm);
        mapped.push_back(map_features_matrix(blocks[b], fit.rule_bases[b].ant));
    }

    CoopSolveResult solved = coop_solve(mapped, targets, cfg);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        fit.rule_bases[b].consequents = std::move(solved.consequents[b]);
    fit.weights = std::move(solved.weights);
    fit.objective_trace = std::move(solved.objective_trace);
    return fit;
}

CoopModel train_model(const MultiViewDataset& train, const TrainOptions& opt) {
    if (train.samples() == 0) throw std::invalid_argument("train_model: empty dataset");
    if (train.view_count() == 0) throw std::invalid_argument("train_model: no views");
    check_lambdas(opt.coop);

    CoopModel model;
    model.norm = fit_minmax(train);
    const MultiViewDataset normd = apply_minmax(train, model.norm);
    model.class_list = collect_classes(train.labels);
    const LabelEncoding enc = one_hot_encode(train.labels, model.class_list);
    model.view_names = train.view_names;
    model.block_names = train.view_names;
    model.block_feature_names = train.feature_names;
    model.options = opt;
    model.has_hidden = opt.use_hidden;

    std::vector<Matrix> blocks = normd.views;
    std::vector<std::size_t> rules(train.view_count(), opt.coop.rules_visible);
    if (opt.use_hidden) {
        HiddenNmfConfig hcfg;
        hcfg.rank = opt.nmf.rank;
        hcfg.beta = opt.nmf.beta;
        hcfg.neighbors = opt.nmf.neighbors;
        hcfg.max_iter = opt.nmf.max_iter;
        hcfg.tol = opt.nmf.tol;
        hcfg.seed = mix_seed(opt.coop.seed, 0x6e6d66);
        model.hidden = nmf_train(blocks, hcfg);
        blocks.push_back(model.hidden.hidden);
        rules.push_back(opt.coop.rules_hidden ? opt.coop.rules_hidden : opt.coop.rules_visible);
        model.block_names.push_back("hidden");
        std::vector<std::string> hnames(model.hidden.rank);
        for (std::size_t j = 0; j < hnames.size(); ++j) hnames[j] = "h" + std::to_string(j + 1);
        model.block_feature_names.push_back(std::move(hnames));
    }

    CoopFit fit = coop_fit(blocks, rules, enc.one_hot, opt.coop);
    model.rule_bases = std::move(fit.rule_bases);
    model.weights = std::move(fit.weights);
    model.objective_trace = std::move(fit.objective_trace);

    if (opt.record_training_accuracy) {
        // Through the prediction path (hidden view re-inferred with frozen
        // mappings), so predicting on the training file reproduces this number.
        const PredictResult self = predict_model(model, train);
        model.training_accuracy = self.accuracy.value_or(0.0);
    }
    return model;
}

std::vector<double> fuse_scores(const std::vector<std::vector<double>>& per_block,
                                const std::vector<double>& weights) {
    if (per_block.size() != weights.size())
        throw std::invalid_argument("fuse_scores: block count mismatch");
    if (per_block.empty()) throw std::invalid_argument("fuse_scores: no scores");
    std::vector<double> fused(per_block[0].size(), 0.0);
    for (std::size_t k = 0; k < per_block.size(); ++k) {
        if (per_block[k].size() != fused.size())
            throw std::invalid_argument("fuse_scores: ragged score vectors");
        active_kernels().axpy(weights[k], per_block[k].data(), fused.data(), fused.size());
    }
    return fused;
}

PredictResult predict_model(const CoopModel& model, const MultiViewDataset& data) {
    if (data.view_count() != model.view_names.size())
        throw std::invalid_argument("predict_model: expected " +
                                    std::to_string(model.view_names.size()) + " views, got " +
                                    std::to_string(data.view_count()));
    for (std::size_t k = 0; k < data.view_count(); ++k) {
        if (data.view_names[k] != model.view_names[k])
            throw std::invalid_argument("predict_model: view '" + data.view_names[k] +
                                        "' does not match model view '" + model.view_names[k] +
                                        "'");
        if (data.views[k].cols() != model.rule_bases[k].ant.dims())
            throw std::invalid_argument(
                "predict_model: view '" + data.view_names[k] + "' has " +
                std::to_string(data.views[k].cols()) + " features, model expects " +
                std::to_string(model.rule_bases[k].ant.dims()));
    }

    const MultiViewDataset normd = apply_minmax(data, model.norm);
    std::vector<Matrix> blocks = normd.views;
    if (model.has_hidden) {
        const InferResult inf = nmf_infer(normd.views, model.hidden, model.options.nmf.max_iter,
                                          model.options.nmf.tol, model.hidden.seed);
        blocks.push_back(inf.hidden);
    }

    PredictResult res;
    res.rows.resize(data.samples());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.samples(); ++i) {
        Prediction& p = res.rows[i];
        p.per_block.resize(blocks.size());
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto g = map_features(std::span(blocks[b].row(i), blocks[b].cols()),
                                        model.rule_bases[b].ant);
            p.per_block[b] = predict_linear(g, model.rule_bases[b].consequents);
        }
        p.fused = fuse_scores(p.per_block, model.weights);
        p.class_index = decode_argmax_index(p.fused);
        p.label = model.class_list.at(p.class_index);
        if (i < data.labels.size() && p.label == data.labels[i]) ++correct;
    }
    if (!data.labels.empty())
        res.accuracy = double(correct) / double(data.samples());
    return res;
}

} // namespace mvtsk
