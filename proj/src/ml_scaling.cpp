#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "snsel/ml.hpp"

namespace snsel {

namespace {
// Encoding order is alphabetical over solver names.
const std::array<std::string, kNumClasses> kClassNames{"dsa", "nda", "richardson"};
} // namespace

int class_index(Solver s) {
    switch (s) {
        case Solver::dsa: return 0;
        case Solver::nda: return 1;
        default: return 2;
    }
}

Solver class_solver(int index) {
    switch (index) {
        case 0: return Solver::dsa;
        case 1: return Solver::nda;
        case 2: return Solver::richardson;
        default: throw std::invalid_argument("class index out of range");
    }
}

const std::string& class_name(int index) {
    if (index < 0 || index >= kNumClasses)
        throw std::invalid_argument("class index out of range");
    return kClassNames[static_cast<std::size_t>(index)];
}

const std::array<std::string, kNumClasses>& class_names() { return kClassNames; }

FeatureRow apply_scaling(const Scaling& s, const FeatureRow& row) {
    FeatureRow scaled;
    for (int j = 0; j < kNumFeatures; ++j)
        scaled[j] = (row[j] - s.mean[j]) / s.sd[j];
    return scaled;
}

LabeledDataset LabeledDataset::from_records(const std::vector<CaseRecord>& records,
                                            LabelCriterion criterion) {
    LabeledDataset dataset;
    dataset.features.reserve(records.size());
    dataset.labels.reserve(records.size());
    for (const CaseRecord& r : records) {
        dataset.features.push_back({static_cast<double>(r.sn_order),
                                    static_cast<double>(r.num_cells),
                                    r.scattering_ratio});
        const Solver best = criterion == LabelCriterion::sweeps ? r.best_by_sweeps
                                                                : r.best_by_runtime;
        dataset.labels.push_back(class_index(best));
    }
    return dataset;
}

void standardize(LabeledDataset& dataset) {
    const std::size_t n = dataset.size();
    if (n == 0) throw std::invalid_argument("cannot standardize an empty dataset");
    if (dataset.labels.size() != n)
        throw std::invalid_argument("features and labels differ in length");
    for (int label : dataset.labels)
        if (label < 0 || label >= kNumClasses)
            throw std::invalid_argument("label outside the class set");

    Scaling scaling;
    for (int j = 0; j < kNumFeatures; ++j) {
        double sum = 0.0;
        for (const FeatureRow& row : dataset.features) sum += row[j];
        const double mean = sum / static_cast<double>(n);

        double sq = 0.0;
        for (const FeatureRow& row : dataset.features) {
            const double d = row[j] - mean;
            sq += d * d;
        }
        double sd = std::sqrt(sq / static_cast<double>(n)); // population sd
        if (sd == 0.0) sd = 1.0;                            // constant column

        scaling.mean[j] = mean;
        scaling.sd[j] = sd;
    }

    for (FeatureRow& row : dataset.features) row = apply_scaling(scaling, row);
    dataset.scaling = scaling;
}

const std::vector<std::string>& model_kinds() {
    static const std::vector<std::string> kinds{"lda", "knn", "svm", "mlp", "rf"};
    return kinds;
}

TrainedModel train_model(const std::string& kind, const LabeledDataset& dataset,
                         const Hyperparams& hp, std::uint64_t seed) {
    if (kind == "lda") return train_lda(dataset, hp.lda_ridge);
    if (kind == "knn") return train_knn(dataset, hp.knn_k);
    if (kind == "svm") return train_svm(dataset, hp.svm_c, hp.svm_gamma);
    if (kind == "mlp")
        return train_mlp(dataset, hp.mlp_hidden, hp.mlp_lr, hp.mlp_epochs, seed);
    if (kind == "rf") {
        RfOptions options;
        options.n_trees = hp.rf_trees;
        options.feature_subset_size = hp.rf_feature_subset;
        options.min_leaf = hp.rf_min_leaf;
        options.seed = seed;
        return train_rf(dataset, options);
    }
    throw std::invalid_argument("unknown model kind: " + kind);
}

int predict_class(const TrainedModel& model, const FeatureRow& raw_row) {
    if (model.kind == "lda") return predict_lda(model, raw_row).first;
    if (model.kind == "knn") return predict_knn(model, raw_row);
    if (model.kind == "svm") return predict_svm(model, raw_row).first;
    if (model.kind == "mlp") return predict_mlp(model, raw_row).first;
    if (model.kind == "rf") return predict_rf(model, raw_row).first;
    throw std::invalid_argument("unknown model kind: " + model.kind);
}

std::array<double, kNumClasses> class_scores(const TrainedModel& model,
                                             const FeatureRow& raw_row) {
    std::array<double, kNumClasses> scores{};
    if (model.kind == "lda") {
        scores = predict_lda(model, raw_row).second;
    } else if (model.kind == "knn") {
        // Neighbor votes of the k nearest.
        const auto& params = std::get<KnnParams>(model.params);
        const FeatureRow scaled = apply_scaling(*model.scaling, raw_row);
        std::vector<std::pair<double, std::size_t>> order;
        order.reserve(params.train_features.size());
        for (std::size_t i = 0; i < params.train_features.size(); ++i) {
            double dist = 0.0;
            for (int j = 0; j < kNumFeatures; ++j) {
                const double d = params.train_features[i][j] - scaled[j];
                dist += d * d;
            }
            order.emplace_back(dist, i);
        }
        std::partial_sort(order.begin(),
                          order.begin() + std::min<std::size_t>(params.k, order.size()),
                          order.end());
        for (int i = 0; i < params.k && i < static_cast<int>(order.size()); ++i)
            scores[params.train_labels[order[i].second]] += 1.0;
    } else if (model.kind == "svm") {
        const auto votes = predict_svm(model, raw_row).second;
        for (int k = 0; k < kNumClasses; ++k) scores[k] = votes[k];
    } else if (model.kind == "mlp") {
        scores = predict_mlp(model, raw_row).second;
    } else if (model.kind == "rf") {
        const auto votes = predict_rf(model, raw_row).second;
        for (int k = 0; k < kNumClasses; ++k) scores[k] = votes[k];
    } else {
        throw std::invalid_argument("unknown model kind: " + model.kind);
    }
    return scores;
}

} // namespace snsel
