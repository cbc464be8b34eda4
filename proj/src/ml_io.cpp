#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "snsel/ml.hpp"

namespace snsel {

namespace {

using nlohmann::json; // std::map-backed, so keys serialize sorted

json row_to_json(const FeatureRow& row) {
    return json{row[0], row[1], row[2]};
}

FeatureRow row_from_json(const json& j) {
    if (!j.is_array() || j.size() != kNumFeatures)
        throw std::runtime_error("model file: malformed feature row");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

using Matrix3 = std::array<std::array<double, kNumFeatures>, kNumFeatures>;

json matrix_to_json(const Matrix3& m) {
    json j = json::array();
    for (const auto& row : m) j.push_back(json{row[0], row[1], row[2]});
    return j;
}

Matrix3 matrix_from_json(const json& j) {
    if (!j.is_array() || j.size() != kNumFeatures)
        throw std::runtime_error("model file: malformed matrix");
    Matrix3 m{};
    for (int r = 0; r < kNumFeatures; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.size() != kNumFeatures)
            throw std::runtime_error("model file: malformed matrix row");
        for (int c = 0; c < kNumFeatures; ++c) m[r][c] = row[c].get<double>();
    }
    return m;
}

json params_to_json(const TrainedModel& model) {
    json j;
    if (model.kind == "lda") {
        const auto& p = std::get<LdaParams>(model.params);
        json means = json::array();
        for (const auto& m : p.class_means) means.push_back(row_to_json(m));
        j["class_means"] = std::move(means);
        j["pooled_cov"] = matrix_to_json(p.pooled_cov);
        j["inv_cov"] = matrix_to_json(p.inv_cov);
        j["priors"] = json{p.priors[0], p.priors[1], p.priors[2]};
        j["ridge"] = p.ridge;
    } else if (model.kind == "knn") {
        const auto& p = std::get<KnnParams>(model.params);
        j["k"] = p.k;
        json rows = json::array();
        for (const auto& row : p.train_features) rows.push_back(row_to_json(row));
        j["train_features"] = std::move(rows);
        j["train_labels"] = p.train_labels;
    } else if (model.kind == "svm") {
        const auto& p = std::get<SvmParams>(model.params);
        j["c"] = p.c;
        j["gamma"] = p.gamma;
        json machines = json::array();
        for (const auto& m : p.machines) {
            json mj;
            mj["class_a"] = m.class_a;
            mj["class_b"] = m.class_b;
            json svs = json::array();
            for (const auto& sv : m.support_vectors) svs.push_back(row_to_json(sv));
            mj["support_vectors"] = std::move(svs);
            mj["coefficients"] = m.coefficients;
            mj["bias"] = m.bias;
            machines.push_back(std::move(mj));
        }
        j["machines"] = std::move(machines);
    } else if (model.kind == "mlp") {
        const auto& p = std::get<MlpParams>(model.params);
        j["hidden_size"] = p.hidden_size;
        j["w1"] = p.w1;
        j["b1"] = p.b1;
        j["w2"] = p.w2;
        j["b2"] = p.b2;
        j["learning_rate"] = p.learning_rate;
        j["epochs"] = p.epochs;
        j["seed"] = p.seed;
    } else if (model.kind == "rf") {
        const auto& p = std::get<RfParams>(model.params);
        j["n_trees"] = p.n_trees;
        j["feature_subset_size"] = p.feature_subset_size;
        j["min_leaf"] = p.min_leaf;
        j["seed"] = p.seed;
        json trees = json::array();
        for (const DecisionTree& tree : p.trees) {
            json nodes = json::array();
            for (const TreeNode& node : tree.nodes) {
                // [feature, threshold, left, right, count0, count1, count2]
                nodes.push_back(json{node.feature, node.threshold, node.left,
                                     node.right, node.counts[0], node.counts[1],
                                     node.counts[2]});
            }
            trees.push_back(std::move(nodes));
        }
        j["trees"] = std::move(trees);
    } else {
        throw std::runtime_error("model file: unknown kind '" + model.kind + "'");
    }
    return j;
}

void params_from_json(const json& j, TrainedModel& model) {
    if (model.kind == "lda") {
        LdaParams p;
        const json& means = j.at("class_means");
        if (!means.is_array() || means.size() != kNumClasses)
            throw std::runtime_error("model file: malformed class_means");
        for (int k = 0; k < kNumClasses; ++k) p.class_means[k] = row_from_json(means[k]);
        p.pooled_cov = matrix_from_json(j.at("pooled_cov"));
        p.inv_cov = matrix_from_json(j.at("inv_cov"));
        const json& priors = j.at("priors");
        if (!priors.is_array() || priors.size() != kNumClasses)
            throw std::runtime_error("model file: malformed priors");
        for (int k = 0; k < kNumClasses; ++k) p.priors[k] = priors[k].get<double>();
        p.ridge = j.at("ridge").get<double>();
        model.params = std::move(p);
    } else if (model.kind == "knn") {
        KnnParams p;
        p.k = j.at("k").get<int>();
        for (const json& row : j.at("train_features"))
            p.train_features.push_back(row_from_json(row));
        p.train_labels = j.at("train_labels").get<std::vector<int>>();
        if (p.train_features.size() != p.train_labels.size())
            throw std::runtime_error("model file: feature/label count mismatch");
        model.params = std::move(p);
    } else if (model.kind == "svm") {
        SvmParams p;
        p.c = j.at("c").get<double>();
        p.gamma = j.at("gamma").get<double>();
        for (const json& mj : j.at("machines")) {
            SvmBinary m;
            m.class_a = mj.at("class_a").get<int>();
            m.class_b = mj.at("class_b").get<int>();
            for (const json& sv : mj.at("support_vectors"))
                m.support_vectors.push_back(row_from_json(sv));
            m.coefficients = mj.at("coefficients").get<std::vector<double>>();
            m.bias = mj.at("bias").get<double>();
            if (m.support_vectors.size() != m.coefficients.size())
                throw std::runtime_error("model file: support vector count mismatch");
            p.machines.push_back(std::move(m));
        }
        model.params = std::move(p);
    } else if (model.kind == "mlp") {
        MlpParams p;
        p.hidden_size = j.at("hidden_size").get<int>();
        p.w1 = j.at("w1").get<std::vector<double>>();
        p.b1 = j.at("b1").get<std::vector<double>>();
        p.w2 = j.at("w2").get<std::vector<double>>();
        p.b2 = j.at("b2").get<std::vector<double>>();
        p.learning_rate = j.at("learning_rate").get<double>();
        p.epochs = j.at("epochs").get<int>();
        p.seed = j.at("seed").get<std::uint64_t>();
        const std::size_t h = static_cast<std::size_t>(p.hidden_size);
        if (p.w1.size() != h * kNumFeatures || p.b1.size() != h ||
            p.w2.size() != static_cast<std::size_t>(kNumClasses) * h ||
            p.b2.size() != kNumClasses)
            throw std::runtime_error("model file: layer size mismatch");
        model.params = std::move(p);
    } else if (model.kind == "rf") {
        RfParams p;
        p.n_trees = j.at("n_trees").get<int>();
        p.feature_subset_size = j.at("feature_subset_size").get<int>();
        p.min_leaf = j.at("min_leaf").get<int>();
        p.seed = j.at("seed").get<std::uint64_t>();
        for (const json& nodes : j.at("trees")) {
            DecisionTree tree;
            for (const json& nj : nodes) {
                if (!nj.is_array() || nj.size() != 7)
                    throw std::runtime_error("model file: malformed tree node");
                TreeNode node;
                node.feature = nj[0].get<int>();
                node.threshold = nj[1].get<double>();
                node.left = nj[2].get<int>();
                node.right = nj[3].get<int>();
                node.counts = {nj[4].get<int>(), nj[5].get<int>(), nj[6].get<int>()};
                tree.nodes.push_back(node);
            }
            if (tree.nodes.empty())
                throw std::runtime_error("model file: empty tree");
            p.trees.push_back(std::move(tree));
        }
        if (static_cast<int>(p.trees.size()) != p.n_trees)
            throw std::runtime_error("model file: tree count mismatch");
        model.params = std::move(p);
    } else {
        throw std::runtime_error("model file: unknown kind '" + model.kind + "'");
    }
}

} // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    json j;
    j["format"] = "snsel-model";
    j["version"] = 1;
    j["kind"] = model.kind;
    if (model.scaling) {
        j["scaling"] = {{"mean", row_to_json(model.scaling->mean)},
                        {"sd", row_to_json(model.scaling->sd)}};
    } else {
        j["scaling"] = nullptr;
    }
    j["params"] = params_to_json(model);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed writing model file: " + path);
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("model file " + path + ": " + e.what());
    }

    try {
        if (j.at("format").get<std::string>() != "snsel-model")
            throw std::runtime_error("model file " + path + ": unrecognized format");
        if (j.at("version").get<int>() != 1)
            throw std::runtime_error("model file " + path + ": unsupported version");

        TrainedModel model;
        model.kind = j.at("kind").get<std::string>();
        const json& scaling = j.at("scaling");
        if (!scaling.is_null()) {
            Scaling s;
            s.mean = row_from_json(scaling.at("mean"));
            s.sd = row_from_json(scaling.at("sd"));
            model.scaling = s;
        }
        params_from_json(j.at("params"), model);
        return model;
    } catch (const json::exception& e) {
        throw std::runtime_error("model file " + path + ": " + e.what());
    }
}

} // namespace snsel
