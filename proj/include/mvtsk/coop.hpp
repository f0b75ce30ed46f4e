#pragma once

#include "mvtsk/dataset.hpp"
#include "mvtsk/hidden_view.hpp"
#include "mvtsk/tsk.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvtsk {

struct CoopConfig {
    double lambda1 = 1.0; // entropy strength on view weights
    double lambda2 = 1.0; // ridge strength on consequents
    double lambda3 = 1.0; // cooperation strength between views
    std::size_t rules_visible = 10;
    std::size_t rules_hidden = 0; // 0 -> rules_visible
    double scale_h = 1.0;         // spread scale for antecedent estimation
    std::size_t max_outer_iter = 50;
    double tol = 1e-6; // relative objective change per outer iteration
    std::uint64_t seed = 0;
    FcmParams fcm; // clustering settings; seed is re-derived per feature block
};

/// Ridge solve for one view's consequents with the others' fused outputs as
/// cooperation targets:
///   [(w + lambda3) G^T G + (lambda2/2) I] P = w G^T Y + lambda3 G^T Ybar
/// The system matrix is shared by all output columns: factored once.
Matrix solve_consequents(const Matrix& g, double view_weight, const Matrix& targets,
                         const Matrix& coop_targets, double lambda2, double lambda3);

/// Entropy-regularized weights: w_k proportional to exp(-E_k / lambda1),
/// computed with a min-shift so large errors cannot underflow all terms.
std::vector<double> update_weights(const std::vector<double>& sq_errors, double lambda1);

/// Joint training objective for the current consequents and weights;
/// cooperation targets are recomputed from the consequents themselves.
double coop_objective(const std::vector<Matrix>& g, const std::vector<Matrix>& consequents,
                      const std::vector<double>& weights, const Matrix& targets, double lambda1,
                      double lambda2, double lambda3);

struct CoopSolveResult {
    std::vector<Matrix> consequents; // per block: G_k.cols() x C
    std::vector<double> weights;     // simplex over blocks
    std::vector<double> objective_trace;
};

/// Alternating solve on pre-mapped features: each sweep freezes the
/// cooperation targets at the previous iterate's outputs, solves every block,
/// then refreshes the weights from the new per-block squared errors.
/// A single block degenerates to plain ridge regression (no cooperation).
CoopSolveResult coop_solve(const std::vector<Matrix>& g, const Matrix& targets,
                           const CoopConfig& cfg);

struct CoopFit {
    std::vector<FuzzyRuleBase> rule_bases; // one per feature block
    std::vector<double> weights;
    std::vector<double> objective_trace;
};

/// Antecedent estimation (fuzzy c-means per block) followed by coop_solve on
/// the mapped features. Blocks are the normalized visible views, optionally
/// with the hidden representation appended last.
CoopFit coop_fit(const std::vector<Matrix>& blocks, const std::vector<std::size_t>& rules_per_block,
                 const Matrix& targets, const CoopConfig& cfg);

struct NmfOptions {
    std::size_t rank = 2;
    double beta = 0.01;
    std::size_t neighbors = 5;
    std::size_t max_iter = 300;
    double tol = 1e-6;
};

struct TrainOptions {
    CoopConfig coop;
    bool use_hidden = true;
    NmfOptions nmf;
    /// Self-prediction on the training data is skipped when false (cheaper
    /// inner cross-validation fits); training_accuracy is then 0.
    bool record_training_accuracy = true;
};

struct CoopModel {
    int version = 1;
    std::vector<FuzzyRuleBase> rule_bases; // visible views in schema order, hidden last
    std::vector<double> weights;
    bool has_hidden = false;
    HiddenSpaceModel hidden; // meaningful only when has_hidden
    MinMaxState norm;
    std::vector<std::string> class_list;
    std::vector<std::string> view_names;                     // visible views only
    std::vector<std::string> block_names;                    // aligned with rule_bases
    std::vector<std::vector<std::string>> block_feature_names; // aligned with rule_bases
    TrainOptions options;
    std::vector<double> objective_trace;
    double training_accuracy = 0.0;

    std::size_t outputs() const { return class_list.size(); }
};

/// Full training pipeline: fit min-max normalization, optionally learn the
/// hidden representation, estimate per-block rule antecedents, run the
/// cooperative solve, and record the training accuracy via the same
/// prediction path used at test time.
CoopModel train_model(const MultiViewDataset& train, const TrainOptions& opt);

struct Prediction {
    std::vector<double> fused;                  // per-class fused scores
    std::vector<std::vector<double>> per_block; // per block per-class scores
    std::size_t class_index = 0;
    std::string label;
};

struct PredictResult {
    std::vector<Prediction> rows;
    std::optional<double> accuracy; // set when the data carries labels
};

/// Normalizes with the stored state, infers the hidden representation with
/// the frozen mappings, maps every block and fuses with the learned weights.
PredictResult predict_model(const CoopModel& model, const MultiViewDataset& data);

/// Weighted fusion of per-block score vectors.
std::vector<double> fuse_scores(const std::vector<std::vector<double>>& per_block,
                                const std::vector<double>& weights);

} // namespace mvtsk
