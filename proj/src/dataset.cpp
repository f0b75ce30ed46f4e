#include "mvtsk/dataset.hpp"

#include "mvtsk/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mvtsk {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

char detect_delimiter(const std::string& header) {
    for (char c : {',', '\t', ';'}) {
        if (header.find(c) != std::string::npos) return c;
    }
    return ',';
}

} // namespace

MultiViewDataset MultiViewDataset::subset(const std::vector<std::size_t>& idx) const {
    MultiViewDataset out;
    out.view_names = view_names;
    out.feature_names = feature_names;
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) out.labels.push_back(labels[i]);
    for (const Matrix& v : views) {
        Matrix m(idx.size(), v.cols());
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t c = 0; c < v.cols(); ++c) m(r, c) = v(idx[r], c);
        }
        out.views.push_back(std::move(m));
    }
    return out;
}

MultiViewDataset MultiViewDataset::concatenated(const std::string& name) const {
    std::size_t total = 0;
    for (const Matrix& v : views) total += v.cols();
    Matrix m(samples(), total);
    std::vector<std::string> names;
    std::size_t off = 0;
    for (std::size_t k = 0; k < views.size(); ++k) {
        for (std::size_t c = 0; c < views[k].cols(); ++c) {
            for (std::size_t r = 0; r < samples(); ++r) m(r, off + c) = views[k](r, c);
            names.push_back(view_names[k] + "." + feature_names[k][c]);
        }
        off += views[k].cols();
    }
    MultiViewDataset out;
    out.views.push_back(std::move(m));
    out.labels = labels;
    out.view_names = {name};
    out.feature_names = {std::move(names)};
    return out;
}

DataSchema load_schema(const std::string& schema_path) {
    std::ifstream in(schema_path);
    if (!in) fail("cannot open schema file: " + schema_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail("schema " + schema_path + ": invalid JSON (" + e.what() + ")");
    }
    if (!j.contains("views") || !j["views"].is_array() || j["views"].empty()) {
        fail("schema " + schema_path + ": expected a non-empty \"views\" array");
    }
    if (!j.contains("label") || !j["label"].is_string()) {
        fail("schema " + schema_path + ": expected a \"label\" column name");
    }
    DataSchema s;
    s.label_column = j["label"].get<std::string>();
    std::set<std::string> assigned{s.label_column};
    for (const auto& v : j["views"]) {
        if (!v.contains("name") || !v.contains("columns") || !v["columns"].is_array()) {
            fail("schema " + schema_path + ": each view needs \"name\" and \"columns\"");
        }
        const std::string name = v["name"].get<std::string>();
        std::vector<std::string> cols;
        for (const auto& c : v["columns"]) {
            const std::string col = c.get<std::string>();
            if (!assigned.insert(col).second) {
                fail("schema " + schema_path + ": column '" + col + "' assigned more than once");
            }
            cols.push_back(col);
        }
        if (cols.empty()) fail("schema " + schema_path + ": view '" + name + "' has zero columns");
        s.view_names.push_back(name);
        s.view_columns.push_back(std::move(cols));
    }
    return s;
}

MultiViewDataset load_multiview_csv(const std::string& data_path, const std::string& schema_path) {
    return load_multiview_csv(data_path, load_schema(schema_path));
}

MultiViewDataset load_multiview_csv(const std::string& data_path, const DataSchema& schema) {
    std::ifstream in(data_path);
    if (!in) fail("cannot open data file: " + data_path);

    std::string header;
    if (!std::getline(in, header)) fail(data_path + ": empty file (header row required)");
    const char delim = detect_delimiter(header);

    std::vector<std::string> columns = split_line(header, delim);
    for (auto& c : columns) c = trim(c);
    std::map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < columns.size(); ++i) col_index[columns[i]] = i;

    auto require_column = [&](const std::string& name) {
        auto it = col_index.find(name);
        if (it == col_index.end()) fail(data_path + ": column '" + name + "' named in schema is missing");
        return it->second;
    };

    const std::size_t label_idx = require_column(schema.label_column);
    std::vector<std::vector<std::size_t>> view_idx;
    for (const auto& cols : schema.view_columns) {
        std::vector<std::size_t> idx;
        for (const auto& c : cols) idx.push_back(require_column(c));
        view_idx.push_back(std::move(idx));
    }

    std::vector<std::vector<double>> view_data(schema.view_names.size());
    std::vector<std::string> labels;
    std::string line;
    std::size_t row = 1; // header was row 1
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_line(line, delim);
        if (fields.size() != columns.size()) {
            fail(data_path + ": row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                 " fields, expected " + std::to_string(columns.size()));
        }
        labels.push_back(trim(fields[label_idx]));
        for (std::size_t k = 0; k < view_idx.size(); ++k) {
            for (std::size_t c : view_idx[k]) {
                const std::string cell = trim(fields[c]);
                double value = 0.0;
                const char* first = cell.data();
                const char* last = cell.data() + cell.size();
                auto [p, ec] = std::from_chars(first, last, value);
                if (ec != std::errc() || p != last || cell.empty()) {
                    fail(data_path + ": row " + std::to_string(row) + ", column '" + columns[c] +
                         "': non-numeric value '" + cell + "'");
                }
                view_data[k].push_back(value);
            }
        }
    }
    if (labels.empty()) fail(data_path + ": no data rows");

    MultiViewDataset ds;
    ds.labels = std::move(labels);
    ds.view_names = schema.view_names;
    ds.feature_names = schema.view_columns;
    const std::size_t n = ds.labels.size();
    for (std::size_t k = 0; k < view_data.size(); ++k) {
        const std::size_t d = schema.view_columns[k].size();
        // Cells were appended row-major per view already.
        ds.views.emplace_back(n, d, std::move(view_data[k]));
    }
    return ds;
}

MinMaxState fit_minmax(const MultiViewDataset& train) {
    if (train.samples() == 0) fail("fit_minmax: empty dataset");
    MinMaxState st;
    for (const Matrix& v : train.views) {
        std::vector<double> mins(v.cols()), maxs(v.cols());
        for (std::size_t c = 0; c < v.cols(); ++c) {
            double lo = v(0, c), hi = v(0, c);
            for (std::size_t r = 1; r < v.rows(); ++r) {
                lo = std::min(lo, v(r, c));
                hi = std::max(hi, v(r, c));
            }
            mins[c] = lo;
            maxs[c] = hi;
        }
        st.mins.push_back(std::move(mins));
        st.maxs.push_back(std::move(maxs));
    }
    return st;
}

MultiViewDataset apply_minmax(const MultiViewDataset& data, const MinMaxState& state) {
    if (state.mins.size() != data.view_count()) fail("apply_minmax: view count mismatch");
    MultiViewDataset out = data;
    for (std::size_t k = 0; k < out.views.size(); ++k) {
        Matrix& v = out.views[k];
        if (state.mins[k].size() != v.cols()) fail("apply_minmax: feature count mismatch in view " + data.view_names[k]);
        for (std::size_t c = 0; c < v.cols(); ++c) {
            const double lo = state.mins[k][c];
            const double range = state.maxs[k][c] - lo;
            for (std::size_t r = 0; r < v.rows(); ++r) {
                double x = range > 0.0 ? (v(r, c) - lo) / range : 0.0;
                v(r, c) = std::clamp(x, 0.0, 1.0);
            }
        }
    }
    return out;
}

std::vector<std::string> collect_classes(const std::vector<std::string>& labels) {
    std::vector<std::string> classes;
    for (const auto& l : labels) {
        if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
    }
    return classes;
}

LabelEncoding one_hot_encode(const std::vector<std::string>& labels,
                             const std::vector<std::string>& class_list) {
    LabelEncoding enc;
    enc.class_list = class_list;
    enc.one_hot = Matrix(labels.size(), class_list.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = std::find(class_list.begin(), class_list.end(), labels[i]);
        if (it == class_list.end()) fail("one_hot_encode: unknown label '" + labels[i] + "'");
        enc.one_hot(i, static_cast<std::size_t>(it - class_list.begin())) = 1.0;
    }
    return enc;
}

std::size_t decode_argmax_index(const std::vector<double>& output) {
    if (output.empty()) fail("decode_argmax: empty output vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < output.size(); ++i) {
        if (output[i] > output[best]) best = i;
    }
    return best;
}

std::string decode_argmax(const std::vector<double>& output, const std::vector<std::string>& class_list) {
    const std::size_t i = decode_argmax_index(output);
    if (i >= class_list.size()) fail("decode_argmax: output longer than class list");
    return class_list[i];
}

std::vector<FoldSplit> stratified_kfold(const MultiViewDataset& dataset, std::size_t folds,
                                        std::uint64_t seed, bool* stratified) {
    const std::size_t n = dataset.samples();
    if (folds < 2) fail("stratified_kfold: folds must be at least 2");
    if (folds > n) fail("stratified_kfold: more folds than samples");

    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[dataset.labels[i]].push_back(i);

    bool can_stratify = true;
    for (const auto& [cls, idx] : by_class) {
        if (idx.size() < folds) {
            can_stratify = false;
            break;
        }
    }
    if (stratified) *stratified = can_stratify;

    Rng rng(mix_seed(seed, 0x5f01d));
    std::vector<std::vector<std::size_t>> buckets(folds);
    if (can_stratify) {
        for (auto& [cls, idx] : by_class) {
            rng.shuffle(idx);
            for (std::size_t i = 0; i < idx.size(); ++i) buckets[i % folds].push_back(idx[i]);
        }
    } else {
        std::cerr << "stratified_kfold: a class has fewer than " << folds
                  << " members; using plain shuffled folds\n";
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        rng.shuffle(idx);
        for (std::size_t i = 0; i < n; ++i) buckets[i % folds].push_back(idx[i]);
    }

    std::vector<FoldSplit> splits(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        std::sort(buckets[f].begin(), buckets[f].end());
        splits[f].test = buckets[f];
        for (std::size_t g = 0; g < folds; ++g) {
            if (g == f) continue;
            splits[f].train.insert(splits[f].train.end(), buckets[g].begin(), buckets[g].end());
        }
        std::sort(splits[f].train.begin(), splits[f].train.end());
    }
    return splits;
}

} // namespace mvtsk
