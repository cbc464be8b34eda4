#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "snsel/dataset.hpp"
#include "snsel/rng.hpp"

namespace snsel {

inline constexpr int kNumFeatures = 3; // sn_order, num_cells, scattering_ratio
inline constexpr int kNumClasses = 3;

using FeatureRow = std::array<double, kNumFeatures>;

// Class encoding is fixed alphabetically: dsa = 0, nda = 1, richardson = 2.
int class_index(Solver s);
Solver class_solver(int index);
const std::string& class_name(int index);
const std::array<std::string, kNumClasses>& class_names();

struct Scaling {
    FeatureRow mean{};
    FeatureRow sd{}; // population sd; constant columns stored as 1
};

FeatureRow apply_scaling(const Scaling& s, const FeatureRow& row);

struct LabeledDataset {
    std::vector<FeatureRow> features;
    std::vector<int> labels; // class indices
    std::optional<Scaling> scaling; // set once standardize() has been applied

    std::size_t size() const { return features.size(); }
    static LabeledDataset from_records(const std::vector<CaseRecord>& records,
                                       LabelCriterion criterion);
};

// Z-scores every column in place (population sd, constant columns get sd 1)
// and records the parameters for inference-time reuse.
void standardize(LabeledDataset& dataset);

// ---- model parameter blocks ------------------------------------------------

struct LdaParams {
    std::array<FeatureRow, kNumClasses> class_means{};
    std::array<std::array<double, kNumFeatures>, kNumFeatures> pooled_cov{};
    std::array<std::array<double, kNumFeatures>, kNumFeatures> inv_cov{};
    std::array<double, kNumClasses> priors{};
    double ridge = 1e-8;
};

struct KnnParams {
    int k = 5;
    std::vector<FeatureRow> train_features; // standardized
    std::vector<int> train_labels;
};

// One binary soft-margin machine of the one-vs-one set. Decision value
// f(x) = sum_i coeff_i K(sv_i, x) + bias with K the RBF kernel;
// f(x) >= 0 votes for class_a, otherwise class_b.
struct SvmBinary {
    int class_a = 0;
    int class_b = 0;
    std::vector<FeatureRow> support_vectors;
    std::vector<double> coefficients; // alpha_i * y_i
    double bias = 0.0;
};

struct SvmParams {
    double c = 1.0;
    double gamma = 1.0 / 3.0;
    std::vector<SvmBinary> machines; // pairs in encoding order
};

struct MlpParams {
    int hidden_size = 5;
    std::vector<double> w1; // hidden_size x kNumFeatures, row-major
    std::vector<double> b1; // hidden_size
    std::vector<double> w2; // kNumClasses x hidden_size, row-major
    std::vector<double> b2; // kNumClasses
    double learning_rate = 0.05;
    int epochs = 2000;
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::array<int, kNumClasses> counts{}; // training samples reaching the node
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root
};

struct RfParams {
    int n_trees = 500;
    int feature_subset_size = 1;
    int min_leaf = 1;
    std::uint64_t seed = 0;
    std::vector<DecisionTree> trees;
};

struct TrainedModel {
    std::string kind; // "lda" | "knn" | "svm" | "mlp" | "rf"
    std::optional<Scaling> scaling; // absent for rf (trees are scale-free)
    std::variant<LdaParams, KnnParams, SvmParams, MlpParams, RfParams> params;
};

// ---- training / prediction --------------------------------------------------

// All train_* functions take the dataset in RAW feature units and handle
// standardization themselves where the method needs it.

TrainedModel train_lda(const LabeledDataset& dataset, double ridge = 1e-8);
// Returns (class, per-class discriminant scores).
std::pair<int, std::array<double, kNumClasses>>
predict_lda(const TrainedModel& model, const FeatureRow& row);

TrainedModel train_knn(const LabeledDataset& dataset, int k = 5);
int predict_knn(const TrainedModel& model, const FeatureRow& row);

TrainedModel train_svm(const LabeledDataset& dataset, double c = 1.0,
                       double gamma = 1.0 / 3.0);
// Returns (class, per-class pairwise vote counts).
std::pair<int, std::array<int, kNumClasses>>
predict_svm(const TrainedModel& model, const FeatureRow& row);

TrainedModel train_mlp(const LabeledDataset& dataset, int hidden_size = 5,
                       double learning_rate = 0.05, int epochs = 2000,
                       std::uint64_t seed = 0);
// Returns (class, softmax probabilities).
std::pair<int, std::array<double, kNumClasses>>
predict_mlp(const TrainedModel& model, const FeatureRow& row);

// Maximum relative disagreement between the analytic cross-entropy gradient
// and a central finite difference (step fd_step) at the seeded initial
// weights, over every weight and bias. Used to vet the backpropagation.
double mlp_max_gradient_error(const std::vector<FeatureRow>& features,
                              const std::vector<int>& labels, int hidden_size,
                              std::uint64_t seed, double fd_step = 1e-5);

// Single CART-style tree on raw features. Candidate split features are drawn
// per node as a random subset of size feature_subset_size; thresholds are
// midpoints between consecutive sorted distinct values; the best split
// minimizes the childrens' sample-weighted Gini impurity.
DecisionTree train_tree(const std::vector<FeatureRow>& features,
                        const std::vector<int>& labels,
                        int feature_subset_size, int min_leaf, Rng& rng);
int predict_tree(const DecisionTree& tree, const FeatureRow& row);

struct RfOptions {
    int n_trees = 500;
    int feature_subset_size = 1;
    int min_leaf = 1;
    std::uint64_t seed = 0;
    bool bootstrap = true; // test hook: false trains every tree on the
                           // identity sample instead of a bootstrap
};

TrainedModel train_rf(const LabeledDataset& dataset, const RfOptions& options);
// Returns (class, per-class tree vote counts).
std::pair<int, std::array<int, kNumClasses>>
predict_rf(const TrainedModel& model, const FeatureRow& row);

// Total decrease in Gini impurity per feature, summed over every split of
// every tree and divided by the tree count. Throws unless model.kind == "rf".
std::array<double, kNumFeatures> gini_importance(const TrainedModel& model);

// ---- generic dispatch --------------------------------------------------------

struct Hyperparams {
    int knn_k = 5;
    int rf_trees = 500;
    int rf_feature_subset = 1;
    int rf_min_leaf = 1;
    double svm_c = 1.0;
    double svm_gamma = 1.0 / 3.0;
    int mlp_hidden = 5;
    double mlp_lr = 0.05;
    int mlp_epochs = 2000;
    double lda_ridge = 1e-8;
};

const std::vector<std::string>& model_kinds(); // {"lda","knn","svm","mlp","rf"}

TrainedModel train_model(const std::string& kind, const LabeledDataset& dataset,
                         const Hyperparams& hp, std::uint64_t seed);
int predict_class(const TrainedModel& model, const FeatureRow& raw_row);
// Per-class scores in encoding order, for human-facing output; the meaning
// depends on the kind (discriminants, votes, probabilities, neighbor votes).
std::array<double, kNumClasses> class_scores(const TrainedModel& model,
                                             const FeatureRow& raw_row);

// ---- persistence -------------------------------------------------------------

// Versioned single-file JSON; loading reproduces identical predictions and
// re-saving reproduces identical bytes. Throws std::runtime_error on I/O or
// format errors.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

} // namespace snsel
