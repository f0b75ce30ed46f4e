#pragma once

#include "mvtsk/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvtsk {

/// N samples described by K feature blocks (views) plus one label per
/// sample. Immutable after load; all operations below return new objects.
struct MultiViewDataset {
    std::vector<Matrix> views;                          // view k is N x d_k
    std::vector<std::string> labels;                    // length N
    std::vector<std::string> view_names;                // length K
    std::vector<std::vector<std::string>> feature_names; // per view

    std::size_t samples() const { return views.empty() ? labels.size() : views[0].rows(); }
    std::size_t view_count() const { return views.size(); }

    /// Rows selected by index, in the given order.
    MultiViewDataset subset(const std::vector<std::size_t>& idx) const;
    /// All views side by side as a single feature block.
    MultiViewDataset concatenated(const std::string& name = "all") const;
};

/// Per-view, per-feature min/max observed on training data.
struct MinMaxState {
    std::vector<std::vector<double>> mins; // [view][feature]
    std::vector<std::vector<double>> maxs;
};

struct LabelEncoding {
    std::vector<std::string> class_list; // C distinct classes, fixed order
    Matrix one_hot;                      // N x C
};

/// Column layout sidecar: ordered views with their column names plus the
/// label column. Parsed from a JSON file, see load_multiview_csv.
struct DataSchema {
    std::vector<std::string> view_names;
    std::vector<std::vector<std::string>> view_columns;
    std::string label_column;
};

DataSchema load_schema(const std::string& schema_path);

/// Reads a delimited text file (header row required; ',', ';' or tab,
/// detected from the header) and splits columns into views per the schema.
/// Throws std::runtime_error with the offending row/column on bad input.
MultiViewDataset load_multiview_csv(const std::string& data_path, const std::string& schema_path);
MultiViewDataset load_multiview_csv(const std::string& data_path, const DataSchema& schema);

MinMaxState fit_minmax(const MultiViewDataset& train);

/// Maps every feature by (x-min)/(max-min) and clamps to [0,1]; features
/// that were constant in training map to 0.
MultiViewDataset apply_minmax(const MultiViewDataset& data, const MinMaxState& state);

/// Distinct labels in order of first appearance.
std::vector<std::string> collect_classes(const std::vector<std::string>& labels);

LabelEncoding one_hot_encode(const std::vector<std::string>& labels,
                             const std::vector<std::string>& class_list);

/// Index of the largest output; ties go to the lowest index.
std::size_t decode_argmax_index(const std::vector<double>& output);
std::string decode_argmax(const std::vector<double>& output, const std::vector<std::string>& class_list);

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Class-stratified k-fold partition of 0..N-1, deterministic in the seed.
/// If some class has fewer members than `folds`, degrades to plain shuffled
/// folds and reports it through `stratified` (plus a note on stderr).
std::vector<FoldSplit> stratified_kfold(const MultiViewDataset& dataset, std::size_t folds,
                                        std::uint64_t seed, bool* stratified = nullptr);

} // namespace mvtsk
