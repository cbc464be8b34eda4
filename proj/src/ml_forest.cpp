#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "snsel/ml.hpp"
#include "snsel/rng.hpp"

namespace snsel {

namespace {

double gini(const std::array<int, kNumClasses>& counts, int total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

int majority(const std::array<int, kNumClasses>& counts) {
    int best = 0;
    for (int k = 1; k < kNumClasses; ++k)
        if (counts[k] > counts[best]) best = k;
    return best;
}

struct TreeBuilder {
    const std::vector<FeatureRow>& x;
    const std::vector<int>& y;
    int subset_size;
    int min_leaf;
    Rng& rng;
    std::vector<TreeNode> nodes;

    // Depth-first, left child first, so the per-node feature draws happen in
    // a reproducible order.
    int build(const std::vector<int>& rows) {
        const int index = static_cast<int>(nodes.size());
        nodes.emplace_back();

        std::array<int, kNumClasses> counts{};
        for (int r : rows) ++counts[y[r]];
        nodes[index].counts = counts;

        const int n = static_cast<int>(rows.size());
        const double node_gini = gini(counts, n);
        if (node_gini == 0.0 || n < 2 * min_leaf) return index;

        // Candidate features: a partial Fisher-Yates draw without replacement.
        std::array<int, kNumFeatures> pool{};
        for (int j = 0; j < kNumFeatures; ++j) pool[j] = j;
        for (int t = 0; t < subset_size; ++t) {
            const std::size_t pick =
                t + rng.next_below(static_cast<std::uint64_t>(kNumFeatures - t));
            std::swap(pool[t], pool[pick]);
        }

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_score = 1e300;
        std::vector<std::pair<double, int>> ordered; // (value, label)
        for (int t = 0; t < subset_size; ++t) {
            const int feature = pool[t];
            ordered.clear();
            for (int r : rows) ordered.emplace_back(x[r][feature], y[r]);
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            // One pass over the sorted values with running left-side counts;
            // candidate thresholds are midpoints between distinct neighbors.
            std::array<int, kNumClasses> left{};
            for (int i = 0; i + 1 < n; ++i) {
                ++left[ordered[i].second];
                if (ordered[i].first == ordered[i + 1].first) continue;
                const double threshold =
                    0.5 * (ordered[i].first + ordered[i + 1].first);
                // Degenerate rounding (adjacent representable values) would
                // desynchronize the midpoint from the prefix partition.
                if (!(ordered[i].first < threshold &&
                      threshold < ordered[i + 1].first))
                    continue;
                const int n_left = i + 1;
                const int n_right = n - n_left;
                if (n_left < min_leaf || n_right < min_leaf) continue;
                std::array<int, kNumClasses> right{};
                for (int k = 0; k < kNumClasses; ++k) right[k] = counts[k] - left[k];
                const double score =
                    (n_left * gini(left, n_left) + n_right * gini(right, n_right)) / n;
                if (score < best_score) {
                    best_score = score;
                    best_feature = feature;
                    best_threshold = threshold;
                }
            }
        }
        if (best_feature < 0) return index;

        std::vector<int> left_rows, right_rows;
        for (int r : rows)
            (x[r][best_feature] <= best_threshold ? left_rows : right_rows).push_back(r);

        nodes[index].feature = best_feature;
        nodes[index].threshold = best_threshold;
        const int left_index = build(left_rows);
        const int right_index = build(right_rows);
        nodes[index].left = left_index;
        nodes[index].right = right_index;
        return index;
    }
};

int leaf_for(const DecisionTree& tree, const FeatureRow& row) {
    int index = 0;
    while (tree.nodes[index].feature >= 0) {
        const TreeNode& node = tree.nodes[index];
        index = row[node.feature] <= node.threshold ? node.left : node.right;
    }
    return index;
}

} // namespace

DecisionTree train_tree(const std::vector<FeatureRow>& features,
                        const std::vector<int>& labels, int feature_subset_size,
                        int min_leaf, Rng& rng) {
    if (features.empty() || features.size() != labels.size())
        throw std::invalid_argument("tree: bad training set");
    if (feature_subset_size < 1 || feature_subset_size > kNumFeatures)
        throw std::invalid_argument("tree: feature subset size out of range");
    if (min_leaf < 1) throw std::invalid_argument("tree: min_leaf must be positive");

    TreeBuilder builder{features, labels, feature_subset_size, min_leaf, rng, {}};
    std::vector<int> rows(features.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
    builder.build(rows);

    DecisionTree tree;
    tree.nodes = std::move(builder.nodes);
    return tree;
}

int predict_tree(const DecisionTree& tree, const FeatureRow& row) {
    return majority(tree.nodes[leaf_for(tree, row)].counts);
}

TrainedModel train_rf(const LabeledDataset& dataset, const RfOptions& options) {
    if (dataset.size() == 0) throw std::invalid_argument("forest: empty training set");
    if (dataset.labels.size() != dataset.size())
        throw std::invalid_argument("forest: features and labels differ in length");
    for (int label : dataset.labels)
        if (label < 0 || label >= kNumClasses)
            throw std::invalid_argument("forest: label outside the class set");
    if (options.n_trees < 1) throw std::invalid_argument("forest: need at least one tree");

    RfParams params;
    params.n_trees = options.n_trees;
    params.feature_subset_size = options.feature_subset_size;
    params.min_leaf = options.min_leaf;
    params.seed = options.seed;
    params.trees.reserve(options.n_trees);

    const std::size_t n = dataset.size();
    for (int t = 0; t < options.n_trees; ++t) {
        Rng rng(Rng::derive_seed(options.seed, static_cast<std::uint64_t>(t)));
        std::vector<FeatureRow> x(n);
        std::vector<int> y(n);
        if (options.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t pick = rng.next_below(n);
                x[i] = dataset.features[pick];
                y[i] = dataset.labels[pick];
            }
        } else {
            x = dataset.features;
            y = dataset.labels;
        }
        params.trees.push_back(
            train_tree(x, y, options.feature_subset_size, options.min_leaf, rng));
    }

    TrainedModel model;
    model.kind = "rf";
    model.params = std::move(params);
    return model;
}

std::pair<int, std::array<int, kNumClasses>>
predict_rf(const TrainedModel& model, const FeatureRow& row) {
    const auto& params = std::get<RfParams>(model.params);
    std::array<int, kNumClasses> votes{};
    for (const DecisionTree& tree : params.trees) ++votes[predict_tree(tree, row)];
    int best = 0;
    for (int k = 1; k < kNumClasses; ++k)
        if (votes[k] > votes[best]) best = k;
    return {best, votes};
}

std::array<double, kNumFeatures> gini_importance(const TrainedModel& model) {
    if (model.kind != "rf")
        throw std::invalid_argument("gini_importance: model is not a random forest");
    const auto& params = std::get<RfParams>(model.params);

    std::array<double, kNumFeatures> importance{};
    for (const DecisionTree& tree : params.trees) {
        for (const TreeNode& node : tree.nodes) {
            if (node.feature < 0) continue;
            const auto& lc = tree.nodes[node.left].counts;
            const auto& rc = tree.nodes[node.right].counts;
            int n_left = 0, n_right = 0;
            for (int c : lc) n_left += c;
            for (int c : rc) n_right += c;
            const int n = n_left + n_right;
            importance[node.feature] += n * gini(node.counts, n) -
                                        n_left * gini(lc, n_left) -
                                        n_right * gini(rc, n_right);
        }
    }
    for (double& value : importance) value /= params.trees.size();
    return importance;
}

} // namespace snsel
