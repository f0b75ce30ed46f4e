#include "mvtsk/hidden_view.hpp"

#include "mvtsk/kernels.hpp"
#include "mvtsk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mvtsk {

namespace {

constexpr double kDivGuard = 1e-12;

/// Degenerate graph with no edges; stands in when a dataset is too small to
/// have neighbors (single row), making the smoothness terms vanish.
NeighborGraph empty_graph(std::size_t n) {
    NeighborGraph g;
    g.weights = Matrix(n, n, 0.0);
    g.degrees.assign(n, 0.0);
    g.laplacian = Matrix(n, n, 0.0);
    g.eps = 0;
    g.bandwidth = 1.0;
    return g;
}

std::vector<NeighborGraph> build_graphs(const std::vector<Matrix>& views, std::size_t eps) {
    std::vector<NeighborGraph> graphs;
    graphs.reserve(views.size());
    const std::size_t n = views.empty() ? 0 : views[0].rows();
    const std::size_t e = n >= 2 ? std::min(std::max<std::size_t>(eps, 1), n - 1) : 0;
    for (const Matrix& v : views)
        graphs.push_back(e > 0 ? build_graph(v, e) : empty_graph(n));
    return graphs;
}

/// Per-sample hash across all views; drives row-keyed initialization so that
/// reordering samples reorders the initial hidden rows the same way.
std::vector<std::uint64_t> row_hashes(const std::vector<Matrix>& views) {
    const std::size_t n = views.at(0).rows();
    std::vector<std::uint64_t> hashes(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t h = fnv1a(nullptr, 0);
        for (const Matrix& v : views) h = fnv1a(v.row(i), v.cols() * sizeof(double), h);
        hashes[i] = h;
    }
    return hashes;
}

Matrix init_hidden(const std::vector<Matrix>& views, std::size_t rank, std::uint64_t seed) {
    const std::size_t n = views.at(0).rows();
    Matrix h(n, rank, 0.0);
    const auto hashes = row_hashes(views);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(mix_seed(seed, hashes[i]));
        for (std::size_t j = 0; j < rank; ++j) h(i, j) = rng.uniform();
    }
    return h;
}

void validate_views(const std::vector<Matrix>& views) {
    if (views.empty()) throw std::invalid_argument("nmf: no views given");
    for (std::size_t k = 0; k < views.size(); ++k) {
        if (views[k].rows() != views[0].rows())
            throw std::invalid_argument("nmf: views disagree on sample count");
        if (views[k].rows() == 0 || views[k].cols() == 0)
            throw std::invalid_argument("nmf: empty view");
        if (!views[k].all_nonnegative())
            throw std::invalid_argument("nmf: negative input entry in view " + std::to_string(k));
    }
}

std::vector<double> resolve_alphas(const std::vector<double>& alphas, std::size_t k_views) {
    if (alphas.empty()) return std::vector<double>(k_views, 1.0 / double(k_views));
    if (alphas.size() != k_views)
        throw std::invalid_argument("nmf: alphas size does not match view count");
    double sum = 0.0;
    for (double a : alphas) {
        if (a < 0.0) throw std::invalid_argument("nmf: negative alpha");
        sum += a;
    }
    if (sum <= 0.0) throw std::invalid_argument("nmf: alphas sum to zero");
    std::vector<double> out(alphas);
    for (double& a : out) a /= sum;
    return out;
}

std::vector<double> resolve_betas(const std::vector<double>& betas, double shared,
                                  std::size_t k_views) {
    std::vector<double> out = betas.empty() ? std::vector<double>(k_views, shared) : betas;
    if (out.size() != k_views)
        throw std::invalid_argument("nmf: betas size does not match view count");
    for (double b : out)
        if (b < 0.0) throw std::invalid_argument("nmf: negative beta");
    return out;
}

bool converged(double prev, double cur, double tol) {
    return prev - cur < tol * std::max(std::abs(prev), 1e-300);
}

} // namespace

NeighborGraph build_graph(const Matrix& view, std::size_t eps, double bandwidth) {
    const std::size_t n = view.rows();
    if (n < 2) throw std::invalid_argument("build_graph: need at least two points");
    if (eps < 1 || eps >= n)
        throw std::invalid_argument("build_graph: neighbor count must be in [1, N-1]");

    Matrix dist2(n, n, 0.0);
    double dist_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = active_kernels().sqdist(view.row(i), view.row(j), view.cols());
            dist2(i, j) = dist2(j, i) = d2;
            dist_sum += std::sqrt(d2);
        }
    }
    double sigma = bandwidth;
    if (sigma <= 0.0) {
        sigma = dist_sum / (double(n) * double(n - 1) / 2.0);
        if (sigma <= 0.0) sigma = 1.0; // all points coincide
    }

    NeighborGraph g;
    g.eps = eps;
    g.bandwidth = sigma;
    g.weights = Matrix(n, n, 0.0);

    // Adjacency by the symmetric OR-rule; ties in distance break toward the
    // lower index so the graph is deterministic.
    std::vector<std::size_t> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        order.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) order.push_back(i);
        std::partial_sort(order.begin(), order.begin() + std::ptrdiff_t(eps), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              return dist2(a, j) != dist2(b, j) ? dist2(a, j) < dist2(b, j)
                                                                : a < b;
                          });
        for (std::size_t t = 0; t < eps; ++t) {
            const std::size_t i = order[t];
            const double w = std::exp(-dist2(i, j) / (2.0 * sigma * sigma));
            g.weights(i, j) = w;
            g.weights(j, i) = w;
        }
    }

    g.degrees.assign(n, 0.0);
    g.laplacian = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        g.degrees[i] = active_kernels().sum(g.weights.row(i), n);
        for (std::size_t j = 0; j < n; ++j) g.laplacian(i, j) = -g.weights(i, j);
        g.laplacian(i, i) += g.degrees[i];
    }
    return g;
}

double nmf_objective(const std::vector<Matrix>& views, const Matrix& hidden,
                     const std::vector<Matrix>& mappings, const std::vector<double>& alphas,
                     const std::vector<double>& betas, const std::vector<NeighborGraph>& graphs) {
    const std::size_t k_views = views.size();
    const std::size_t n = hidden.rows(), r = hidden.cols();
    double obj = 0.0;
    for (std::size_t k = 0; k < k_views; ++k) {
        obj += alphas[k] * frobenius_sq_diff(views[k], matmul(hidden, mappings[k]));
        if (betas[k] == 0.0) continue;
        // tr(H^T L H) = sum_i deg_i |h_i|^2 - sum_ij S_ij <h_i, h_j>
        const NeighborGraph& g = graphs[k];
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            tr += g.degrees[i] * active_kernels().dot(hidden.row(i), hidden.row(i), r);
            for (std::size_t j = 0; j < n; ++j) {
                const double s = g.weights(i, j);
                if (s != 0.0) tr -= s * active_kernels().dot(hidden.row(i), hidden.row(j), r);
            }
        }
        obj += betas[k] * tr;
    }
    return obj;
}

namespace detail {

void nmf_update_mapping(const Matrix& view, const Matrix& hidden, Matrix& mapping) {
    const Matrix num = matmul_t_left(hidden, view);           // r x d
    const Matrix den = matmul(matmul_t_left(hidden, hidden), mapping);
    active_kernels().mul_div_guard(mapping.data(), num.data(), den.data(), kDivGuard,
                                   mapping.rows() * mapping.cols());
}

void nmf_update_hidden(const std::vector<Matrix>& views, const std::vector<Matrix>& mappings,
                       const std::vector<double>& alphas, const std::vector<double>& betas,
                       const std::vector<NeighborGraph>& graphs, Matrix& hidden) {
    const std::size_t n = hidden.rows(), r = hidden.cols();
    const auto& K = active_kernels();
    Matrix num(n, r, 0.0), den(n, r, 0.0);
    for (std::size_t k = 0; k < views.size(); ++k) {
        const Matrix xw = matmul_t_right(views[k], mappings[k]);
        K.axpy(alphas[k], xw.data(), num.data(), n * r);
        const Matrix hww = matmul(hidden, matmul_t_right(mappings[k], mappings[k]));
        K.axpy(alphas[k], hww.data(), den.data(), n * r);
        if (betas[k] == 0.0) continue;
        const Matrix sh = matmul(graphs[k].weights, hidden);
        K.axpy(betas[k], sh.data(), num.data(), n * r);
        for (std::size_t i = 0; i < n; ++i)
            K.axpy(betas[k] * graphs[k].degrees[i], hidden.row(i), den.row(i), r);
    }
    K.mul_div_guard(hidden.data(), num.data(), den.data(), kDivGuard, n * r);
}

} // namespace detail

HiddenSpaceModel nmf_train(const std::vector<Matrix>& views, const HiddenNmfConfig& cfg) {
    validate_views(views);
    if (cfg.rank < 1) throw std::invalid_argument("nmf_train: rank must be at least 1");
    const std::size_t k_views = views.size();
    const std::size_t n = views[0].rows();

    HiddenSpaceModel model;
    model.rank = cfg.rank;
    model.seed = cfg.seed;
    model.alphas = resolve_alphas(cfg.alphas, k_views);
    model.betas = resolve_betas(cfg.betas, cfg.beta, k_views);
    model.neighbors = n >= 2 ? std::min(std::max<std::size_t>(cfg.neighbors, 1), n - 1) : 0;
    model.graphs = build_graphs(views, model.neighbors);
    model.hidden = init_hidden(views, cfg.rank, cfg.seed);
    model.mappings.reserve(k_views);
    for (std::size_t k = 0; k < k_views; ++k) {
        Rng rng(mix_seed(cfg.seed, 1000 + k));
        Matrix w(cfg.rank, views[k].cols(), 0.0);
        for (std::size_t i = 0; i < w.rows() * w.cols(); ++i) w.data()[i] = rng.uniform();
        model.mappings.push_back(std::move(w));
    }

    double prev = nmf_objective(views, model.hidden, model.mappings, model.alphas, model.betas,
                                model.graphs);
    model.objective_trace.push_back(prev);
    for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        for (std::size_t k = 0; k < k_views; ++k)
            detail::nmf_update_mapping(views[k], model.hidden, model.mappings[k]);
        detail::nmf_update_hidden(views, model.mappings, model.alphas, model.betas, model.graphs,
                                  model.hidden);
        const double cur = nmf_objective(views, model.hidden, model.mappings, model.alphas,
                                         model.betas, model.graphs);
        model.objective_trace.push_back(cur);
        if (cfg.on_sweep) cfg.on_sweep(it, model.hidden, model.mappings, cur);
        if (converged(prev, cur, cfg.tol)) break;
        prev = cur;
    }
    return model;
}

InferResult nmf_infer(const std::vector<Matrix>& views, const HiddenSpaceModel& model,
                      std::size_t max_iter, double tol, std::uint64_t seed) {
    validate_views(views);
    if (views.size() != model.mappings.size())
        throw std::invalid_argument("nmf_infer: view count does not match model");
    for (std::size_t k = 0; k < views.size(); ++k)
        if (views[k].cols() != model.mappings[k].cols())
            throw std::invalid_argument("nmf_infer: view " + std::to_string(k) +
                                        " width does not match its mapping");

    const auto graphs = build_graphs(views, model.neighbors);
    InferResult res;
    res.hidden = init_hidden(views, model.rank, seed);
    double prev = nmf_objective(views, res.hidden, model.mappings, model.alphas, model.betas,
                                graphs);
    res.objective_trace.push_back(prev);
    for (std::size_t it = 0; it < max_iter; ++it) {
        detail::nmf_update_hidden(views, model.mappings, model.alphas, model.betas, graphs,
                                  res.hidden);
        const double cur = nmf_objective(views, res.hidden, model.mappings, model.alphas,
                                         model.betas, graphs);
        res.objective_trace.push_back(cur);
        if (converged(prev, cur, tol)) break;
        prev = cur;
    }
    return res;
}

InferResult nmf_infer(const std::vector<Matrix>& views, const HiddenSpaceModel& model) {
    return nmf_infer(views, model, 300, 1e-6, model.seed);
}

} // namespace mvtsk
