#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "snsel/ml.hpp"

namespace snsel {

namespace {

using Matrix3 = std::array<std::array<double, kNumFeatures>, kNumFeatures>;

// Gauss-Jordan inverse with partial pivoting; throws on singularity.
Matrix3 invert(Matrix3 a) {
    Matrix3 inv{};
    for (int i = 0; i < kNumFeatures; ++i) inv[i][i] = 1.0;

    for (int col = 0; col < kNumFeatures; ++col) {
        int pivot_row = col;
        for (int r = col + 1; r < kNumFeatures; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot_row][col])) pivot_row = r;
        if (std::abs(a[pivot_row][col]) < 1e-300)
            throw std::runtime_error("LDA: pooled covariance is singular after ridge");
        std::swap(a[col], a[pivot_row]);
        std::swap(inv[col], inv[pivot_row]);

        const double pivot = a[col][col];
        for (int j = 0; j < kNumFeatures; ++j) {
            a[col][j] /= pivot;
            inv[col][j] /= pivot;
        }
        for (int r = 0; r < kNumFeatures; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (int j = 0; j < kNumFeatures; ++j) {
                a[r][j] -= factor * a[col][j];
                inv[r][j] -= factor * inv[col][j];
            }
        }
    }
    return inv;
}

} // namespace

TrainedModel train_lda(const LabeledDataset& dataset, double ridge) {
    const std::size_t n = dataset.size();
    if (n <= kNumClasses)
        throw std::invalid_argument("LDA needs more samples than classes");

    LabeledDataset scaled = dataset;
    standardize(scaled);

    std::array<std::size_t, kNumClasses> counts{};
    for (int label : scaled.labels) ++counts[label];
    int present = 0;
    for (std::size_t c : counts) present += c > 0 ? 1 : 0;
    if (present < 2) throw std::invalid_argument("LDA needs at least two classes");

    LdaParams params;
    params.ridge = ridge;
    for (std::size_t i = 0; i < n; ++i) {
        const int k = scaled.labels[i];
        for (int j = 0; j < kNumFeatures; ++j)
            params.class_means[k][j] += scaled.features[i][j];
    }
    for (int k = 0; k < kNumClasses; ++k) {
        params.priors[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
        if (counts[k] == 0) continue;
        for (int j = 0; j < kNumFeatures; ++j)
            params.class_means[k][j] /= static_cast<double>(counts[k]);
    }

    // Pooled within-class covariance, normalized by n - K, plus a ridge on
    // the diagonal to guard the integer-valued feature grid.
    for (std::size_t i = 0; i < n; ++i) {
        const FeatureRow& row = scaled.features[i];
        const FeatureRow& mean = params.class_means[scaled.labels[i]];
        for (int a = 0; a < kNumFeatures; ++a)
            for (int b = 0; b < kNumFeatures; ++b)
                params.pooled_cov[a][b] += (row[a] - mean[a]) * (row[b] - mean[b]);
    }
    const double denom = static_cast<double>(n) - present;
    for (int a = 0; a < kNumFeatures; ++a) {
        for (int b = 0; b < kNumFeatures; ++b) params.pooled_cov[a][b] /= denom;
        params.pooled_cov[a][a] += ridge;
    }
    params.inv_cov = invert(params.pooled_cov);

    TrainedModel model;
    model.kind = "lda";
    model.scaling = scaled.scaling;
    model.params = params;
    return model;
}

std::pair<int, std::array<double, kNumClasses>>
predict_lda(const TrainedModel& model, const FeatureRow& row) {
    const auto& params = std::get<LdaParams>(model.params);
    const FeatureRow x = apply_scaling(*model.scaling, row);

    std::array<double, kNumClasses> scores{};
    int best = 0;
    for (int k = 0; k < kNumClasses; ++k) {
        if (params.priors[k] == 0.0) {
            scores[k] = -std::numeric_limits<double>::infinity();
            continue;
        }
        // delta_k(x) = x' Sigma^-1 mu_k - 1/2 mu_k' Sigma^-1 mu_k + log pi_k
        FeatureRow sigma_inv_mu{};
        for (int a = 0; a < kNumFeatures; ++a)
            for (int b = 0; b < kNumFeatures; ++b)
                sigma_inv_mu[a] += params.inv_cov[a][b] * params.class_means[k][b];
        double score = std::log(params.priors[k]);
        for (int a = 0; a < kNumFeatures; ++a) {
            score += x[a] * sigma_inv_mu[a];
            score -= 0.5 * params.class_means[k][a] * sigma_inv_mu[a];
        }
        scores[k] = score;
        if (scores[k] > scores[best]) best = k;
    }
    return {best, scores};
}

} // namespace snsel
