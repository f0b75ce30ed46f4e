#include "mvtsk/model_io.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace mvtsk {

namespace {

using json = nlohmann::ordered_json;

constexpr int kModelVersion = 1;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& data = j.at("data");
    if (data.size() != rows) throw std::runtime_error("matrix: row count mismatch");
    Matrix m(rows, cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = data.at(i);
        if (row.size() != cols) throw std::runtime_error("matrix: column count mismatch");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = row.at(c).get<double>();
    }
    return m;
}

json rule_base_to_json(const FuzzyRuleBase& rb) {
    return json{{"centers", matrix_to_json(rb.ant.centers)},
                {"spreads", matrix_to_json(rb.ant.spreads)},
                {"scale_h", rb.ant.scale_h},
                {"feature_cuts", matrix_to_json(rb.ant.feature_cuts)},
                {"consequents", matrix_to_json(rb.consequents)}};
}

FuzzyRuleBase rule_base_from_json(const json& j) {
    FuzzyRuleBase rb;
    rb.ant.centers = matrix_from_json(j.at("centers"));
    rb.ant.spreads = matrix_from_json(j.at("spreads"));
    rb.ant.scale_h = j.at("scale_h").get<double>();
    rb.ant.feature_cuts = matrix_from_json(j.at("feature_cuts"));
    rb.consequents = matrix_from_json(j.at("consequents"));
    return rb;
}

json options_to_json(const TrainOptions& o) {
    return json{{"coop",
                 {{"lambda1", o.coop.lambda1},
                  {"lambda2", o.coop.lambda2},
                  {"lambda3", o.coop.lambda3},
                  {"rules_visible", o.coop.rules_visible},
                  {"rules_hidden", o.coop.rules_hidden},
                  {"scale_h", o.coop.scale_h},
                  {"max_outer_iter", o.coop.max_outer_iter},
                  {"tol", o.coop.tol},
                  {"seed", o.coop.seed},
                  {"fcm",
                   {{"fuzzifier", o.coop.fcm.fuzzifier},
                    {"max_iter", o.coop.fcm.max_iter},
                    {"tol", o.coop.fcm.tol}}}}},
                {"use_hidden", o.use_hidden},
                {"nmf",
                 {{"rank", o.nmf.rank},
                  {"beta", o.nmf.beta},
                  {"neighbors", o.nmf.neighbors},
                  {"max_iter", o.nmf.max_iter},
                  {"tol", o.nmf.tol}}}};
}

TrainOptions options_from_json(const json& j) {
    TrainOptions o;
    const json& c = j.at("coop");
    o.coop.lambda1 = c.at("lambda1").get<double>();
    o.coop.lambda2 = c.at("lambda2").get<double>();
    o.coop.lambda3 = c.at("lambda3").get<double>();
    o.coop.rules_visible = c.at("rules_visible").get<std::size_t>();
    o.coop.rules_hidden = c.at("rules_hidden").get<std::size_t>();
    o.coop.scale_h = c.at("scale_h").get<double>();
    o.coop.max_outer_iter = c.at("max_outer_iter").get<std::size_t>();
    o.coop.tol = c.at("tol").get<double>();
    o.coop.seed = c.at("seed").get<std::uint64_t>();
    const json& f = c.at("fcm");
    o.coop.fcm.fuzzifier = f.at("fuzzifier").get<double>();
    o.coop.fcm.max_iter = f.at("max_iter").get<std::size_t>();
    o.coop.fcm.tol = f.at("tol").get<double>();
    o.use_hidden = j.at("use_hidden").get<bool>();
    const json& n = j.at("nmf");
    o.nmf.rank = n.at("rank").get<std::size_t>();
    o.nmf.beta = n.at("beta").get<double>();
    o.nmf.neighbors = n.at("neighbors").get<std::size_t>();
    o.nmf.max_iter = n.at("max_iter").get<std::size_t>();
    o.nmf.tol = n.at("tol").get<double>();
    return o;
}

json hidden_to_json(const HiddenSpaceModel& h) {
    json mappings = json::array();
    for (const Matrix& w : h.mappings) mappings.push_back(matrix_to_json(w));
    return json{{"rank", h.rank},           {"neighbors", h.neighbors},
                {"seed", h.seed},           {"alphas", h.alphas},
                {"betas", h.betas},         {"hidden", matrix_to_json(h.hidden)},
                {"mappings", std::move(mappings)}, {"objective_trace", h.objective_trace}};
}

HiddenSpaceModel hidden_from_json(const json& j) {
    HiddenSpaceModel h;
    h.rank = j.at("rank").get<std::size_t>();
    h.neighbors = j.at("neighbors").get<std::size_t>();
    h.seed = j.at("seed").get<std::uint64_t>();
    h.alphas = j.at("alphas").get<std::vector<double>>();
    h.betas = j.at("betas").get<std::vector<double>>();
    h.hidden = matrix_from_json(j.at("hidden"));
    for (const json& m : j.at("mappings")) h.mappings.push_back(matrix_from_json(m));
    h.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    return h;
}

} // namespace

std::string model_to_json(const CoopModel& model) {
    json j;
    j["format"] = "mvtsk-model";
    j["version"] = model.version;
    j["class_list"] = model.class_list;
    j["view_names"] = model.view_names;
    j["block_names"] = model.block_names;
    j["block_feature_names"] = model.block_feature_names;
    j["weights"] = model.weights;
    j["training_accuracy"] = model.training_accuracy;
    j["objective_trace"] = model.objective_trace;
    j["normalization"] = json{{"mins", model.norm.mins}, {"maxs", model.norm.maxs}};
    j["options"] = options_to_json(model.options);
    json bases = json::array();
    for (const FuzzyRuleBase& rb : model.rule_bases) bases.push_back(rule_base_to_json(rb));
    j["rule_bases"] = std::move(bases);
    j["has_hidden"] = model.has_hidden;
    if (model.has_hidden) j["hidden"] = hidden_to_json(model.hidden);
    return j.dump(2) + "\n";
}

CoopModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("model JSON parse error: ") + e.what());
    }
    if (!j.contains("format") || j.at("format").get<std::string>() != "mvtsk-model")
        throw std::runtime_error("not a model file (missing format tag)");
    const int version = j.at("version").get<int>();
    if (version != kModelVersion)
        throw std::runtime_error("unsupported model version " + std::to_string(version));

    CoopModel m;
    m.version = version;
    m.class_list = j.at("class_list").get<std::vector<std::string>>();
    m.view_names = j.at("view_names").get<std::vector<std::string>>();
    m.block_names = j.at("block_names").get<std::vector<std::string>>();
    m.block_feature_names = j.at("block_feature_names").get<std::vector<std::vector<std::string>>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.training_accuracy = j.at("training_accuracy").get<double>();
    m.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    m.norm.mins = j.at("normalization").at("mins").get<std::vector<std::vector<double>>>();
    m.norm.maxs = j.at("normalization").at("maxs").get<std::vector<std::vector<double>>>();
    m.options = options_from_json(j.at("options"));
    for (const json& rb : j.at("rule_bases")) m.rule_bases.push_back(rule_base_from_json(rb));
    m.has_hidden = j.at("has_hidden").get<bool>();
    if (m.has_hidden) m.hidden = hidden_from_json(j.at("hidden"));
    return m;
}

void save_model(const CoopModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << model_to_json(model);
    if (!out) throw std::runtime_error("write failed: " + path);
}

CoopModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read model file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return model_from_json(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

} // namespace mvtsk
