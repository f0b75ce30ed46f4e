#include "mvtsk/tsk.hpp"

#include "mvtsk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mvtsk {

namespace {

constexpr double kSpreadFloor = 1e-8;

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

Matrix quantile_cuts(const Matrix& data) {
    const std::size_t n = data.rows(), d = data.cols();
    Matrix cuts(d, 4, 0.0);
    std::vector<double> col(n);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < n; ++i) col[i] = data(i, k);
        std::sort(col.begin(), col.end());
        for (std::size_t q = 0; q < 4; ++q) {
            const double pos = 0.2 * double(q + 1) * double(n - 1);
            const std::size_t lo = std::size_t(pos);
            const std::size_t hi = std::min(lo + 1, n - 1);
            const double frac = pos - double(lo);
            cuts(k, q) = col[lo] + frac * (col[hi] - col[lo]);
        }
    }
    return cuts;
}

} // namespace

Antecedents estimate_antecedents(const Matrix& data, std::size_t rules, double h,
                                 const FcmParams& fcm) {
    if (h <= 0.0) throw std::invalid_argument("estimate_antecedents: scale h must be positive");
    const FcmResult res = fcm_cluster(data, rules, fcm);
    const std::size_t n = data.rows(), d = data.cols();

    Antecedents ant;
    ant.scale_h = h;
    ant.centers = Matrix(rules, d, 0.0);
    ant.spreads = Matrix(rules, d, 0.0);
    ant.feature_cuts = quantile_cuts(data);

    for (std::size_t j = 0; j < rules; ++j) {
        double usum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = res.memberships(i, j);
            usum += u;
            active_kernels().axpy(u, data.row(i), ant.centers.row(j), d);
        }
        if (usum <= 0.0) throw std::runtime_error("estimate_antecedents: empty cluster");
        for (std::size_t k = 0; k < d; ++k) ant.centers(j, k) /= usum;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = res.memberships(i, j);
            const double* x = data.row(i);
            for (std::size_t k = 0; k < d; ++k) {
                const double dev = x[k] - ant.centers(j, k);
                ant.spreads(j, k) += u * dev * dev;
            }
        }
        for (std::size_t k = 0; k < d; ++k)
            ant.spreads(j, k) = std::max(h * ant.spreads(j, k) / usum, kSpreadFloor);
    }
    return ant;
}

double gaussian_membership(double x, double center, double spread) {
    const double dev = x - center;
    return std::exp(-dev * dev / (2.0 * spread));
}

FiringStrengths firing_strengths(std::span<const double> x, const Antecedents& ant) {
    const std::size_t L = ant.rules(), d = ant.dims();
    if (x.size() != d) throw std::invalid_argument("firing_strengths: dimension mismatch");
    FiringStrengths fs;
    fs.raw.resize(L);
    fs.normalized.resize(L);
    double total = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
        // Product of per-dimension Gaussians, accumulated in the log domain
        // so one exp per rule decides the underflow behavior.
        double s = 0.0;
        const double* c = ant.centers.row(j);
        const double* sp = ant.spreads.row(j);
        for (std::size_t k = 0; k < d; ++k) {
            const double dev = x[k] - c[k];
            s += dev * dev / (2.0 * sp[k]);
        }
        fs.raw[j] = std::exp(-s);
        total += fs.raw[j];
    }
    if (total > 0.0) {
        for (std::size_t j = 0; j < L; ++j) fs.normalized[j] = fs.raw[j] / total;
    } else {
        // Every rule underflowed: fall back to uniform agreement so the
        // mapped feature stays finite.
        const double u = 1.0 / double(L);
        for (std::size_t j = 0; j < L; ++j) fs.normalized[j] = u;
    }
    return fs;
}

std::vector<double> map_features(std::span<const double> x, const Antecedents& ant) {
    const std::size_t L = ant.rules(), d = ant.dims();
    const FiringStrengths fs = firing_strengths(x, ant);
    std::vector<double> g(L * (d + 1));
    for (std::size_t j = 0; j < L; ++j) {
        double* blk = g.data() + j * (d + 1);
        blk[0] = fs.normalized[j];
        for (std::size_t k = 0; k < d; ++k) blk[k + 1] = fs.normalized[j] * x[k];
    }
    return g;
}

Matrix map_features_matrix(const Matrix& data, const Antecedents& ant) {
    const std::size_t n = data.rows();
    Matrix G(n, ant.mapped_size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = map_features(std::span(data.row(i), data.cols()), ant);
        std::copy(g.begin(), g.end(), G.row(i));
    }
    return G;
}

std::vector<double> predict_linear(std::span<const double> mapped, const Matrix& consequents) {
    if (mapped.size() != consequents.rows())
        throw std::invalid_argument("predict_linear: mapped length mismatch");
    std::vector<double> y(consequents.cols(), 0.0);
    for (std::size_t i = 0; i < consequents.rows(); ++i)
        active_kernels().axpy(mapped[i], consequents.row(i), y.data(), consequents.cols());
    return y;
}

const char* linguistic_label(double center, const double* cuts4) {
    if (center <= cuts4[0]) return "Low";
    if (center <= cuts4[1]) return "A little low";
    if (center <= cuts4[2]) return "Medium";
    if (center <= cuts4[3]) return "A little high";
    return "High";
}

std::string dump_rules(const FuzzyRuleBase& rb, const std::vector<std::string>& feature_names) {
    const std::size_t L = rb.ant.rules(), d = rb.ant.dims(), C = rb.outputs();
    if (rb.consequents.rows() != rb.ant.mapped_size())
        throw std::invalid_argument("dump_rules: consequent rows mismatch");
    const bool have_cuts = rb.ant.feature_cuts.rows() == d && rb.ant.feature_cuts.cols() == 4;

    std::string out;
    out += "rules: " + std::to_string(L) + "\n";
    out += "features: " + std::to_string(d) + "\n";
    out += "outputs: " + std::to_string(C) + "\n";
    for (std::size_t j = 0; j < L; ++j) {
        out += "rule " + std::to_string(j + 1) + ":\n";
        for (std::size_t k = 0; k < d; ++k) {
            out += "  ";
            out += (k < feature_names.size() && !feature_names[k].empty())
                       ? feature_names[k]
                       : "x" + std::to_string(k + 1);
            out += " is ";
            out += have_cuts ? linguistic_label(rb.ant.centers(j, k), rb.ant.feature_cuts.row(k))
                             : "n/a";
            out += " (center=";
            append_num(out, rb.ant.centers(j, k));
            out += ", spread=";
            append_num(out, rb.ant.spreads(j, k));
            out += ")\n";
        }
        for (std::size_t c = 0; c < C; ++c) {
            out += "  consequent[" + std::to_string(c) + "]:";
            for (std::size_t k = 0; k <= d; ++k) {
                out += ' ';
                append_num(out, rb.consequents(j * (d + 1) + k, c));
            }
            out += '\n';
        }
    }
    return out;
}

} // namespace mvtsk
