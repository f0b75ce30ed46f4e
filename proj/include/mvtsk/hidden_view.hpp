#pragma once

#include "mvtsk/matrix.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace mvtsk {

/// Symmetric heat-kernel neighbor graph. `weights` has zero diagonal and an
/// edge S_ij > 0 whenever i is among j's `eps` nearest neighbors or vice
/// versa; `laplacian` = diag(degrees) - weights, so its rows sum to zero.
struct NeighborGraph {
    Matrix weights;               // N x N symmetric, non-negative, zero diagonal
    std::vector<double> degrees;  // row sums of weights
    Matrix laplacian;             // diag(degrees) - weights
    std::size_t eps = 0;
    double bandwidth = 0.0;       // kernel sigma actually used
};

/// bandwidth <= 0 selects sigma = mean pairwise Euclidean distance of `view`
/// (falling back to 1 when all points coincide).
NeighborGraph build_graph(const Matrix& view, std::size_t eps, double bandwidth = 0.0);

struct HiddenNmfConfig {
    std::size_t rank = 2;
    std::vector<double> alphas; // per-view factorization weights; empty -> uniform
    std::vector<double> betas;  // per-view smoothness weights; empty -> `beta` shared
    double beta = 0.0;
    std::size_t neighbors = 5;  // graph eps (clamped to N-1)
    std::size_t max_iter = 300;
    double tol = 1e-6;          // relative objective decrease per sweep
    std::uint64_t seed = 0;
    /// Called after every sweep with (sweep index, H, mappings, objective).
    std::function<void(std::size_t, const Matrix&, const std::vector<Matrix>&, double)> on_sweep;
};

struct HiddenSpaceModel {
    Matrix hidden;                 // N x rank, non-negative
    std::vector<Matrix> mappings;  // per view: rank x d_k, non-negative
    std::vector<double> alphas;
    std::vector<double> betas;
    std::size_t rank = 0;
    std::size_t neighbors = 0;
    std::uint64_t seed = 0;
    std::vector<NeighborGraph> graphs;   // training graphs, one per view
    std::vector<double> objective_trace; // initial value plus one entry per sweep
};

/// Sum over views of alpha_k * ||X_k - H W_k||_F^2 + beta_k * tr(H^T L_k H).
double nmf_objective(const std::vector<Matrix>& views, const Matrix& hidden,
                     const std::vector<Matrix>& mappings, const std::vector<double>& alphas,
                     const std::vector<double>& betas, const std::vector<NeighborGraph>& graphs);

/// Joint factorization of all views against a shared non-negative hidden
/// matrix, with per-view graph smoothing. Multiplicative updates keep every
/// factor non-negative and the objective trace non-increasing.
///
/// Rows of `hidden` are initialized from a hash of the sample's bytes across
/// views, so reordering samples reorders hidden rows the same way.
HiddenSpaceModel nmf_train(const std::vector<Matrix>& views, const HiddenNmfConfig& cfg);

struct InferResult {
    Matrix hidden; // N_te x rank
    std::vector<double> objective_trace;
};

/// Hidden representation for new data: the mappings stay frozen and only the
/// hidden matrix is optimized, with fresh neighbor graphs built on the given
/// data. Pass model.seed to reproduce the training initialization on
/// identical data.
InferResult nmf_infer(const std::vector<Matrix>& views, const HiddenSpaceModel& model,
                      std::size_t max_iter, double tol, std::uint64_t seed);

InferResult nmf_infer(const std::vector<Matrix>& views, const HiddenSpaceModel& model);

namespace detail {

/// One multiplicative mapping update: W <- W .* (H^T X) ./ (H^T H W + guard).
void nmf_update_mapping(const Matrix& view, const Matrix& hidden, Matrix& mapping);

/// One multiplicative hidden update across all views:
/// H <- H .* (sum_k a_k X_k W_k^T + b_k S_k H) ./ (sum_k a_k H W_k W_k^T + b_k D_k H + guard).
void nmf_update_hidden(const std::vector<Matrix>& views, const std::vector<Matrix>& mappings,
                       const std::vector<double>& alphas, const std::vector<double>& betas,
                       const std::vector<NeighborGraph>& graphs, Matrix& hidden);

} // namespace detail

} // namespace mvtsk
