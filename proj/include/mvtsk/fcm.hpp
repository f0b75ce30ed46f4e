#pragma once

#include "mvtsk/matrix.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace mvtsk {

struct FcmParams {
    double fuzzifier = 2.0;
    int max_iter = 200;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    /// Optional per-iteration hook (iteration index, memberships, centers);
    /// used by tests to watch invariants while the loop runs.
    std::function<void(int, const Matrix&, const Matrix&)> on_iteration;
};

struct FcmResult {
    Matrix centers;              // c x d
    Matrix memberships;          // N x c, rows sum to 1
    double fuzzifier = 2.0;
    int iterations_run = 0;
    double final_objective = 0.0;
    std::vector<double> objective_trace; // value after each full iteration
};

/// Fuzzy c-means with random row-normalized membership initialization.
/// Alternates exact center and membership updates until the objective
/// decrease falls below tol or max_iter is reached.
FcmResult fcm_cluster(const Matrix& data, std::size_t clusters, const FcmParams& params = {});

/// Same, starting from caller-provided memberships (N x clusters, rows
/// summing to 1). Used to test permutation behavior of the initialization.
FcmResult fcm_cluster_with_init(const Matrix& data, std::size_t clusters, const FcmParams& params,
                                const Matrix& init_memberships);

} // namespace mvtsk
