#include "mvtsk/coop.hpp"

#include "mvtsk/experiment.hpp"
#include "mvtsk/model_io.hpp"
#include "mvtsk/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace mvtsk;

namespace {

void check_simplex(const std::vector<double>& w) {
    double sum = 0.0;
    for (double v : w) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

CoopConfig basic_cfg(double l1, double l2, double l3) {
    CoopConfig cfg;
    cfg.lambda1 = l1;
    cfg.lambda2 = l2;
    cfg.lambda3 = l3;
    cfg.max_outer_iter = 40;
    cfg.tol = 1e-12;
    return cfg;
}

} // namespace

TEST_SUITE("coop") {

TEST_CASE("near-zero ridge reproduces least squares") {
    Rng rng(101);
    const Matrix g = oracle::random_matrix(rng, 20, 5, -1.0, 1.0);
    const Matrix y = oracle::random_matrix(rng, 20, 2, -1.0, 1.0);
    const Matrix zero(20, 2, 0.0);
    const Matrix p = solve_consequents(g, 1.0, y, zero, 1e-12, 0.0);

    // Normal equations: G^T (Y - G P) vanishes at the least-squares solution.
    const Matrix residual = add_scaled(y, -1.0, matmul(g, p));
    const Matrix gtr = matmul_t_left(g, residual);
    for (std::size_t i = 0; i < gtr.rows(); ++i)
        for (std::size_t j = 0; j < gtr.cols(); ++j) CHECK(std::abs(gtr(i, j)) <= 1e-8);
}

TEST_CASE("heavy ridge shrinks the consequents toward zero") {
    Rng rng(102);
    const Matrix g = oracle::random_matrix(rng, 15, 4, -1.0, 1.0);
    const Matrix y = oracle::random_matrix(rng, 15, 2, -1.0, 1.0);
    const Matrix p = solve_consequents(g, 1.0, y, Matrix(15, 2, 0.0), 2e6, 0.0);
    CHECK(frobenius_sq(p) < 1e-6);
}

TEST_CASE("the block solve is stationary for its quadratic objective") {
    Rng rng(103);
    const std::size_t n = 18, d = 4, c = 2;
    const Matrix g = oracle::random_matrix(rng, n, d, -1.0, 1.0);
    const Matrix y = oracle::random_matrix(rng, n, c, -1.0, 1.0);
    const Matrix ybar = oracle::random_matrix(rng, n, c, -1.0, 1.0);
    const double w = 0.6, l2 = 0.7, l3 = 0.9;
    const Matrix p = solve_consequents(g, w, y, ybar, l2, l3);

    const auto f = [&](const std::vector<double>& flat) {
        Matrix pm(d, c, 0.0);
        for (std::size_t i = 0; i < flat.size(); ++i) pm.data()[i] = flat[i];
        const Matrix out = oracle::matmul_naive(g, pm);
        return w * oracle::frobenius_sq_diff_naive(out, y) +
               0.5 * l2 * oracle::frobenius_sq_naive(pm) +
               l3 * oracle::frobenius_sq_diff_naive(out, ybar);
    };
    std::vector<double> flat(p.data(), p.data() + d * c);
    const std::vector<double> grad = oracle::fd_gradient(f, flat);
    for (double gi : grad) CHECK(std::abs(gi) <= 1e-6);
}

TEST_CASE("block solve input validation") {
    const Matrix g{{1.0, 0.0}, {0.0, 1.0}};
    const Matrix y{{1.0}, {2.0}};
    CHECK_THROWS_AS(solve_consequents(g, 1.0, y, y, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_consequents(g, 1.0, y, y, 1.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_consequents(g, -1.0, y, y, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_consequents(g, 1.0, y, Matrix(3, 1, 0.0), 1.0, 0.0),
                    std::invalid_argument);
    Matrix bad = y;
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(solve_consequents(g, 1.0, bad, y, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("weight updates follow the shifted softmax") {
    const std::vector<double> equal = update_weights({3.0, 3.0, 3.0}, 1.0);
    for (double w : equal) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    // A gap of ln 2 at unit strength halves the second weight.
    const std::vector<double> two = update_weights({1.0, 1.0 + std::log(2.0)}, 1.0);
    CHECK(two[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(two[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Huge strength flattens any finite error differences.
    const std::vector<double> flat = update_weights({7.5, 1.2, 3.4}, 1e12);
    for (double w : flat) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-11));

    // Only error differences matter, so a common shift changes nothing.
    const std::vector<double> a = update_weights({0.4, 1.9}, 0.7);
    const std::vector<double> b = update_weights({100.4, 101.9}, 0.7);
    CHECK(a == b);
    check_simplex(a);

    // A dominant error drives its weight to zero without underflowing the rest.
    const std::vector<double> crisp = update_weights({0.0, 1e6}, 1.0);
    CHECK(crisp[0] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(update_weights({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(update_weights({1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(update_weights({std::nan("")}, 1.0), std::invalid_argument);
}

TEST_CASE("objective hand values") {
    Rng rng(104);
    const std::vector<Matrix> g = {oracle::random_matrix(rng, 10, 3, -1.0, 1.0),
                                   oracle::random_matrix(rng, 10, 4, -1.0, 1.0)};
    const Matrix y = oracle::random_matrix(rng, 10, 2, -1.0, 1.0);
    const std::vector<Matrix> zero_p = {Matrix(3, 2, 0.0), Matrix(4, 2, 0.0)};

    // Zero consequents: every output is zero, so the data term is ||Y||^2,
    // the ridge and cooperation terms vanish, and the entropy of (1/2, 1/2)
    // contributes exactly -ln 2.
    const double j_half = coop_objective(g, zero_p, {0.5, 0.5}, y, 1.0, 1.0, 1.0);
    CHECK(j_half == doctest::Approx(frobenius_sq(y) - std::log(2.0)).epsilon(1e-12));

    // A crisp weight vector has zero entropy (0 ln 0 counts as 0).
    const double j_crisp = coop_objective(g, zero_p, {1.0, 0.0}, y, 1.0, 1.0, 1.0);
    CHECK(j_crisp == doctest::Approx(frobenius_sq(y)).epsilon(1e-12));

    CHECK_THROWS_AS(coop_objective(g, {zero_p[0]}, {1.0}, y, 1.0, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("objective matches the reference evaluation") {
    Rng rng(105);
    for (int round = 0; round < 20; ++round) {
        const std::size_t v = 2 + rng.index(2);
        const std::size_t n = 8 + rng.index(8);
        const std::size_t c = 1 + rng.index(2);
        std::vector<Matrix> g, p;
        for (std::size_t k = 0; k < v; ++k) {
            const std::size_t d = 3 + rng.index(4);
            g.push_back(oracle::random_matrix(rng, n, d, -1.0, 1.0));
            p.push_back(oracle::random_matrix(rng, d, c, -1.0, 1.0));
        }
        const Matrix y = oracle::random_matrix(rng, n, c, -1.0, 1.0);
        std::vector<double> raw(v);
        for (double& w : raw) w = rng.uniform();
        const std::vector<double> w = update_weights(raw, 1.0);
        const double l1 = rng.uniform(0.05, 5.0);
        const double l2 = rng.uniform(0.05, 5.0);
        const double l3 = rng.uniform(0.05, 2.0);

        const double got = coop_objective(g, p, w, y, l1, l2, l3);
        const double want = oracle::coop_objective_naive(g, p, w, y, l1, l2, l3);
        CHECK(oracle::rel_err(got, want) <= 1e-12);
    }
}

TEST_CASE("a single block reduces to ridge regression") {
    Rng rng(106);
    const Matrix g = oracle::random_matrix(rng, 15, 4, -1.0, 1.0);
    const Matrix y = oracle::random_matrix(rng, 15, 1, -1.0, 1.0);

    const CoopSolveResult res = coop_solve({g}, y, basic_cfg(1.0, 0.8, 5.0));
    CHECK(res.weights == std::vector<double>{1.0});
    const Matrix direct = solve_consequents(g, 1.0, y, Matrix(15, 1, 0.0), 0.8, 0.0);
    CHECK(res.consequents[0] == direct);

    // The cooperation strength is inert with nobody to cooperate with.
    const CoopSolveResult other = coop_solve({g}, y, basic_cfg(1.0, 0.8, 0.37));
    CHECK(other.consequents[0] == res.consequents[0]);
    CHECK(other.objective_trace == res.objective_trace);
}

TEST_CASE("identical blocks share the weight exactly") {
    Rng rng(107);
    const Matrix g = oracle::random_matrix(rng, 12, 4, -1.0, 1.0);
    const Matrix y = oracle::random_matrix(rng, 12, 2, -1.0, 1.0);
    const CoopSolveResult res = coop_solve({g, g}, y, basic_cfg(0.5, 1.0, 0.5));
    CHECK(res.weights == std::vector<double>{0.5, 0.5});
    CHECK(res.consequents[0] == res.consequents[1]);
}

TEST_CASE("alternating solve: monotone trace from the zero model, exact final objective") {
    Rng rng(108);
    for (int inst = 0; inst < 12; ++inst) {
        const std::size_t v = 2 + rng.index(2);
        const std::size_t n = 10 + rng.index(21);
        const std::size_t c = 1 + rng.index(2);
        std::vector<Matrix> g;
        for (std::size_t k = 0; k < v; ++k)
            g.push_back(oracle::random_matrix(rng, n, 3 + rng.index(4), -1.0, 1.0));
        const Matrix y = oracle::random_matrix(rng, n, c, -1.0, 1.0);
        const CoopConfig cfg = basic_cfg(rng.uniform(0.05, 5.0), rng.uniform(0.05, 5.0),
                                         rng.uniform(0.05, 2.0));

        const CoopSolveResult res = coop_solve(g, y, cfg);
        REQUIRE(res.objective_trace.size() >= 2);

        std::vector<Matrix> zero_p;
        for (std::size_t k = 0; k < v; ++k) zero_p.emplace_back(g[k].cols(), c, 0.0);
        const double j0 = oracle::coop_objective_naive(
            g, zero_p, std::vector<double>(v, 1.0 / double(v)), y, cfg.lambda1, cfg.lambda2,
            cfg.lambda3);
        CHECK(oracle::rel_err(res.objective_trace.front(), j0) <= 1e-10);

        for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
            const double prev = res.objective_trace[i - 1];
            CHECK(res.objective_trace[i] <= prev + 1e-8 * std::max(1.0, std::abs(prev)));
        }

        const double jf = oracle::coop_objective_naive(g, res.consequents, res.weights, y,
                                                       cfg.lambda1, cfg.lambda2, cfg.lambda3);
        CHECK(oracle::rel_err(res.objective_trace.back(), jf) <= 1e-10);
        check_simplex(res.weights);
    }
}

TEST_CASE("solver argument validation") {
    const Matrix g{{1.0}, {2.0}};
    const Matrix y{{1.0}, {0.0}};
    CHECK_THROWS_AS(coop_solve({}, y, basic_cfg(1, 1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(coop_solve({Matrix(3, 1, 0.5)}, y, basic_cfg(1, 1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(coop_solve({g}, y, basic_cfg(0, 1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(coop_solve({g}, y, basic_cfg(1, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(coop_solve({g}, y, basic_cfg(1, 1, 0)), std::invalid_argument);
    CoopConfig cfg = basic_cfg(1, 1, 1);
    cfg.max_outer_iter = 0;
    CHECK_THROWS_AS(coop_solve({g}, y, cfg), std::invalid_argument);
}

TEST_CASE("full fit clamps rule counts and is deterministic") {
    Rng rng(109);
    const std::vector<Matrix> blocks = {oracle::random_matrix(rng, 12, 3, 0.0, 1.0),
                                        oracle::random_matrix(rng, 12, 2, 0.0, 1.0)};
    const Matrix y = oracle::random_matrix(rng, 12, 2, 0.0, 1.0);
    CoopConfig cfg = basic_cfg(1.0, 1.0, 1.0);
    cfg.seed = 5;

    const CoopFit a = coop_fit(blocks, {50, 3}, y, cfg);
    REQUIRE(a.rule_bases.size() == 2);
    CHECK(a.rule_bases[0].ant.rules() == 12); // 50 rules clamped to N
    CHECK(a.rule_bases[1].ant.rules() == 3);
    for (const FuzzyRuleBase& rb : a.rule_bases) {
        CHECK(rb.consequents.rows() == rb.ant.mapped_size());
        CHECK(rb.consequents.cols() == 2);
        CHECK(rb.ant.spreads.all_nonnegative());
    }
    check_simplex(a.weights);

    const CoopFit b = coop_fit(blocks, {50, 3}, y, cfg);
    CHECK(a.rule_bases[0].ant.centers == b.rule_bases[0].ant.centers);
    CHECK(a.rule_bases[0].consequents == b.rule_bases[0].consequents);
    CHECK(a.rule_bases[1].consequents == b.rule_bases[1].consequents);
    CHECK(a.weights == b.weights);
    CHECK(a.objective_trace == b.objective_trace);

    CHECK_THROWS_AS(coop_fit(blocks, {3}, y, cfg), std::invalid_argument);
    CHECK_THROWS_AS(coop_fit(blocks, {3, 0}, y, cfg), std::invalid_argument);
}

TEST_CASE("score fusion") {
    const std::vector<std::vector<double>> scores = {{1.0, 2.0}, {3.0, -2.0}};
    CHECK(fuse_scores(scores, {1.0, 0.0}) == std::vector<double>{1.0, 2.0});

    const std::vector<double> same = fuse_scores({{0.4, 0.6}, {0.4, 0.6}}, {0.3, 0.7});
    CHECK(same[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(same[1] == doctest::Approx(0.6).epsilon(1e-12));

    const std::vector<double> mix = fuse_scores(scores, {0.25, 0.75});
    CHECK(mix[0] == doctest::Approx(0.25 * 1.0 + 0.75 * 3.0).epsilon(1e-12));
    CHECK(mix[1] == doctest::Approx(0.25 * 2.0 + 0.75 * (-2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(fuse_scores(scores, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fuse_scores({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(fuse_scores({{1.0}, {1.0, 2.0}}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("trained models predict their own training data consistently") {
    const MultiViewDataset data = synth_latent(45, 7);
    TrainOptions opt;
    opt.coop.rules_visible = 4;
    opt.coop.seed = 11;
    opt.coop.max_outer_iter = 30;
    opt.nmf.rank = 2;
    opt.nmf.neighbors = 4;
    opt.nmf.max_iter = 150;
    const CoopModel model = train_model(data, opt);

    CHECK(model.has_hidden);
    REQUIRE(model.rule_bases.size() == 3); // two views plus the hidden block
    CHECK(model.block_names == std::vector<std::string>{"view_a", "view_b", "hidden"});
    CHECK(model.block_feature_names[2] == std::vector<std::string>{"h1", "h2"});
    CHECK(model.class_list == std::vector<std::string>{"c1", "c2", "c3"});
    check_simplex(model.weights);
    CHECK(model.objective_trace.size() >= 2);

    const PredictResult self = predict_model(model, data);
    REQUIRE(self.accuracy.has_value());
    CHECK(*self.accuracy == model.training_accuracy);

    const PredictResult again = predict_model(model, data);
    for (std::size_t i = 0; i < self.rows.size(); ++i) {
        CHECK(self.rows[i].fused == again.rows[i].fused);
        CHECK(self.rows[i].label == again.rows[i].label);
        REQUIRE(self.rows[i].per_block.size() == 3);
    }

    MultiViewDataset unlabeled = data;
    unlabeled.labels.clear();
    const PredictResult blind = predict_model(model, unlabeled);
    CHECK_FALSE(blind.accuracy.has_value());
    CHECK(blind.rows[0].label == self.rows[0].label);
}

TEST_CASE("prediction rejects mismatched datasets") {
    const MultiViewDataset data = synth_latent(30, 3);
    TrainOptions opt;
    opt.coop.rules_visible = 3;
    opt.nmf.max_iter = 50;
    const CoopModel model = train_model(data, opt);

    MultiViewDataset one_view = data;
    one_view.views.pop_back();
    one_view.view_names.pop_back();
    one_view.feature_names.pop_back();
    CHECK_THROWS_WITH_AS(predict_model(model, one_view), doctest::Contains("expected 2 views"),
                         std::invalid_argument);

    MultiViewDataset renamed = data;
    renamed.view_names[0] = "other";
    CHECK_THROWS_WITH_AS(predict_model(model, renamed), doctest::Contains("does not match"),
                         std::invalid_argument);

    MultiViewDataset narrow = data;
    narrow.views[1] = Matrix(30, 2, 0.1);
    narrow.feature_names[1] = {"b1", "b2"};
    CHECK_THROWS_WITH_AS(predict_model(model, narrow), doctest::Contains("model expects 4"),
                         std::invalid_argument);
}

TEST_CASE("models survive a save/load round trip unchanged") {
    const MultiViewDataset data = synth_latent(36, 5);
    TrainOptions opt;
    opt.coop.rules_visible = 3;
    opt.coop.seed = 2;
    opt.nmf.rank = 2;
    opt.nmf.max_iter = 100;
    const CoopModel model = train_model(data, opt);

    const auto path =
        (std::filesystem::temp_directory_path() / "mvtsk_coop_roundtrip.model.json").string();
    save_model(model, path);
    const CoopModel loaded = load_model(path);
    CHECK(model_to_json(loaded) == model_to_json(model));

    const PredictResult a = predict_model(model, data);
    const PredictResult b = predict_model(loaded, data);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].fused == b.rows[i].fused);
        CHECK(a.rows[i].label == b.rows[i].label);
    }
    CHECK(loaded.training_accuracy == model.training_accuracy);
}

TEST_CASE("training accuracy recording can be disabled") {
    const MultiViewDataset data = synth_latent(30, 9);
    TrainOptions opt;
    opt.coop.rules_visible = 3;
    opt.nmf.max_iter = 50;
    opt.record_training_accuracy = false;
    const CoopModel model = train_model(data, opt);
    CHECK(model.training_accuracy == 0.0);

    TrainOptions with;
    with.coop.rules_visible = 3;
    with.nmf.max_iter = 50;
    const CoopModel recorded = train_model(data, with);
    CHECK(recorded.training_accuracy > 0.0);
    // Same seeds, same fit: only the bookkeeping differs.
    CHECK(model.rule_bases[0].consequents == recorded.rule_bases[0].consequents);
}

TEST_CASE("training without the hidden view keeps only the visible blocks") {
    const MultiViewDataset data = synth_latent(30, 13);
    TrainOptions opt;
    opt.use_hidden = false;
    opt.coop.rules_visible = 3;
    const CoopModel model = train_model(data, opt);
    CHECK_FALSE(model.has_hidden);
    CHECK(model.rule_bases.size() == 2);
    CHECK(model.block_names == data.view_names);
    check_simplex(model.weights);
    const PredictResult res = predict_model(model, data);
    CHECK(res.rows[0].per_block.size() == 2);
}

TEST_CASE("a lone view ignores the cooperation strength") {
    const MultiViewDataset full = synth_noise_view(30, 4);
    MultiViewDataset solo;
    solo.view_names = {full.view_names[0]};
    solo.feature_names = {full.feature_names[0]};
    solo.views = {full.views[0]};
    solo.labels = full.labels;

    TrainOptions a;
    a.use_hidden = false;
    a.coop.rules_visible = 3;
    a.coop.lambda3 = 9.0;
    TrainOptions b = a;
    b.coop.lambda3 = 0.1;

    const CoopModel ma = train_model(solo, a);
    const CoopModel mb = train_model(solo, b);
    CHECK(ma.rule_bases[0].consequents == mb.rule_bases[0].consequents);
    CHECK(ma.weights == std::vector<double>{1.0});
}

} // TEST_SUITE
