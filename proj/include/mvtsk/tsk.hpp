#pragma once

#include "mvtsk/fcm.hpp"
#include "mvtsk/matrix.hpp"

#include <span>
#include <string>
#include <vector>

namespace mvtsk {

/// Gaussian rule antecedents for one feature space. Spreads are the
/// variance-like width appearing directly under the exponent denominator
/// (membership = exp(-(x-c)^2 / (2*spread))).
struct Antecedents {
    Matrix centers;      // L x d
    Matrix spreads;      // L x d, strictly positive
    double scale_h = 1.0;
    /// Per-feature 20/40/60/80% quantile cut points (d x 4) captured at fit
    /// time; drives the linguistic labels in rule dumps. May be empty for
    /// hand-built antecedents.
    Matrix feature_cuts;

    std::size_t rules() const { return centers.rows(); }
    std::size_t dims() const { return centers.cols(); }
    /// Mapped feature length L*(d+1).
    std::size_t mapped_size() const { return rules() * (dims() + 1); }
};

/// One rule system: antecedents plus the stacked consequent coefficients,
/// one column per output. Row layout matches map_features: rule-major
/// blocks of (bias, x_1..x_d).
struct FuzzyRuleBase {
    Antecedents ant;
    Matrix consequents; // (L*(d+1)) x C

    std::size_t outputs() const { return consequents.cols(); }
};

/// Rule centers/spreads from fuzzy c-means memberships: membership-weighted
/// means and h-scaled membership-weighted squared deviations. Spreads are
/// floored at 1e-8 so degenerate clusters keep valid memberships.
Antecedents estimate_antecedents(const Matrix& data, std::size_t rules, double h,
                                 const FcmParams& fcm = {});

double gaussian_membership(double x, double center, double spread);

struct FiringStrengths {
    std::vector<double> raw;        // per-rule product of memberships
    std::vector<double> normalized; // raw / sum(raw); uniform if all raw underflow
};

FiringStrengths firing_strengths(std::span<const double> x, const Antecedents& ant);

/// Concatenation over rules of normalized_firing * (1, x^T); length L*(d+1).
std::vector<double> map_features(std::span<const double> x, const Antecedents& ant);

/// map_features applied to every row.
Matrix map_features_matrix(const Matrix& data, const Antecedents& ant);

/// consequents^T * mapped
std::vector<double> predict_linear(std::span<const double> mapped, const Matrix& consequents);

/// Bucket for a rule center given the feature's four quantile cuts.
const char* linguistic_label(double center, const double* cuts4);

/// Human-readable listing: per rule, the per-dimension center/spread pairs
/// with linguistic buckets, then the consequent coefficients per output.
std::string dump_rules(const FuzzyRuleBase& rb, const std::vector<std::string>& feature_names);

} // namespace mvtsk
