#include "mvtsk/fcm.hpp"

#include "mvtsk/kernels.hpp"
#include "mvtsk/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mvtsk {

namespace {

Matrix random_memberships(std::size_t n, std::size_t c, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0xfc3u));
    Matrix u(n, c);
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < c; ++k) {
            u(i, k) = rng.uniform();
            row_sum += u(i, k);
        }
        for (std::size_t k = 0; k < c; ++k) u(i, k) /= row_sum;
    }
    return u;
}

// v_k = sum_j u_jk^m x_j / sum_j u_jk^m
void update_centers(const Matrix& data, const Matrix& u, double m, Matrix& centers) {
    const std::size_t n = data.rows(), d = data.cols(), c = centers.rows();
    const auto& K = active_kernels();
    centers.fill(0.0);
    std::vector<double> wsum(c, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < c; ++k) {
            const double w = std::pow(u(j, k), m);
            wsum[k] += w;
            K.axpy(w, data.row(j), centers.row(k), d);
        }
    }
    for (std::size_t k = 0; k < c; ++k) {
        const double denom = wsum[k] > 0.0 ? wsum[k] : 1.0;
        for (std::size_t i = 0; i < d; ++i) centers(k, i) /= denom;
    }
}

// Squared distances sample-to-center.
void update_distances(const Matrix& data, const Matrix& centers, Matrix& dist2) {
    const auto& K = active_kernels();
    for (std::size_t j = 0; j < data.rows(); ++j) {
        for (std::size_t k = 0; k < centers.rows(); ++k) {
            dist2(j, k) = K.sqdist(data.row(j), centers.row(k), data.cols());
        }
    }
}

// u_jk = 1 / sum_l (D_jk/D_jl)^(1/(m-1)); a sample sitting exactly on a
// center gets full membership there.
void update_memberships(const Matrix& dist2, double m, Matrix& u) {
    const double expo = 1.0 / (m - 1.0);
    const std::size_t n = dist2.rows(), c = dist2.cols();
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t zero_at = c;
        for (std::size_t k = 0; k < c; ++k) {
            if (dist2(j, k) == 0.0) {
                zero_at = k;
                break;
            }
        }
        if (zero_at < c) {
            for (std::size_t k = 0; k < c; ++k) u(j, k) = (k == zero_at) ? 1.0 : 0.0;
            continue;
        }
        double total = 0.0;
        for (std::size_t k = 0; k < c; ++k) {
            u(j, k) = std::pow(1.0 / dist2(j, k), expo);
            total += u(j, k);
        }
        for (std::size_t k = 0; k < c; ++k) u(j, k) /= total;
    }
}

double objective(const Matrix& dist2, const Matrix& u, double m) {
    double j = 0.0;
    for (std::size_t r = 0; r < u.rows(); ++r) {
        for (std::size_t k = 0; k < u.cols(); ++k) {
            j += std::pow(u(r, k), m) * dist2(r, k);
        }
    }
    return j;
}

FcmResult run(const Matrix& data, std::size_t clusters, const FcmParams& p, Matrix u) {
    const std::size_t n = data.rows();
    FcmResult res;
    res.fuzzifier = p.fuzzifier;
    res.memberships = std::move(u);
    res.centers = Matrix(clusters, data.cols());

    Matrix dist2(n, clusters);
    double prev = 0.0;
    for (int it = 0; it < p.max_iter; ++it) {
        update_centers(data, res.memberships, p.fuzzifier, res.centers);
        update_distances(data, res.centers, dist2);
        update_memberships(dist2, p.fuzzifier, res.memberships);
        const double cur = objective(dist2, res.memberships, p.fuzzifier);
        res.objective_trace.push_back(cur);
        res.iterations_run = it + 1;
        if (p.on_iteration) p.on_iteration(it, res.memberships, res.centers);
        if (it > 0 && prev - cur < p.tol) {
            prev = cur;
            break;
        }
        prev = cur;
    }
    res.final_objective = prev;
    return res;
}

} // namespace

FcmResult fcm_cluster(const Matrix& data, std::size_t clusters, const FcmParams& params) {
    if (clusters < 1) throw std::invalid_argument("fcm_cluster: need at least one cluster");
    if (clusters > data.rows()) throw std::invalid_argument("fcm_cluster: more clusters than samples");
    if (!(params.fuzzifier > 1.0)) throw std::invalid_argument("fcm_cluster: fuzzifier must exceed 1");
    if (!(params.tol > 0.0)) throw std::invalid_argument("fcm_cluster: tol must be positive");
    if (!data.all_finite()) throw std::invalid_argument("fcm_cluster: data contains non-finite values");
    return run(data, clusters, params, random_memberships(data.rows(), clusters, params.seed));
}

FcmResult fcm_cluster_with_init(const Matrix& data, std::size_t clusters, const FcmParams& params,
                                const Matrix& init_memberships) {
    if (init_memberships.rows() != data.rows() || init_memberships.cols() != clusters) {
        throw std::invalid_argument("fcm_cluster_with_init: membership shape mismatch");
    }
    if (!data.all_finite()) throw std::invalid_argument("fcm_cluster: data contains non-finite values");
    return run(data, clusters, params, init_memberships);
}

} // namespace mvtsk
