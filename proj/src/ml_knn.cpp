#include <algorithm>
#include <stdexcept>
#include <utility>

#include "snsel/ml.hpp"

namespace snsel {

TrainedModel train_knn(const LabeledDataset& dataset, int k) {
    if (k < 1) throw std::invalid_argument("KNN: K must be at least 1");
    if (static_cast<std::size_t>(k) > dataset.size())
        throw std::invalid_argument("KNN: K exceeds the training-set size");

    LabeledDataset scaled = dataset;
    standardize(scaled);

    KnnParams params;
    params.k = k;
    params.train_features = std::move(scaled.features);
    params.train_labels = std::move(scaled.labels);

    TrainedModel model;
    model.kind = "knn";
    model.scaling = scaled.scaling;
    model.params = std::move(params);
    return model;
}

int predict_knn(const TrainedModel& model, const FeatureRow& row) {
    const auto& params = std::get<KnnParams>(model.params);
    const FeatureRow x = apply_scaling(*model.scaling, row);
    const std::size_t n = params.train_features.size();
    const std::size_t k = static_cast<std::size_t>(params.k);

    // Squared Euclidean distances; ties in distance resolved by the lower
    // training-row index via the (distance, index) pair ordering.
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        double dist = 0.0;
        for (int j = 0; j < kNumFeatures; ++j) {
            const double d = params.train_features[i][j] - x[j];
            dist += d * d;
        }
        order[i] = {dist, i};
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end());

    std::array<int, kNumClasses> votes{};
    for (std::size_t i = 0; i < k; ++i) ++votes[params.train_labels[order[i].second]];

    int top = 0;
    for (int c = 1; c < kNumClasses; ++c)
        if (votes[c] > votes[top]) top = c;

    // A vote tie goes to the tied class whose representative is nearest.
    int tied = 0;
    for (int c = 0; c < kNumClasses; ++c) tied += votes[c] == votes[top] ? 1 : 0;
    if (tied > 1) {
        for (std::size_t i = 0; i < k; ++i) {
            const int label = params.train_labels[order[i].second];
            if (votes[label] == votes[top]) return label;
        }
    }
    return top;
}

} // namespace snsel
