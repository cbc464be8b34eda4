#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snsel/ml.hpp"
#include "snsel/rng.hpp"

namespace snsel {

namespace {

// Parameters live in one flat vector so the finite-difference check can walk
// them uniformly: w1 (hidden x features, row major), b1, w2 (classes x hidden,
// row major), b2.
std::size_t parameter_count(int hidden) {
    return static_cast<std::size_t>(hidden) * kNumFeatures + hidden +
           static_cast<std::size_t>(kNumClasses) * hidden + kNumClasses;
}

std::vector<double> initial_parameters(int hidden, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> theta(parameter_count(hidden));
    for (double& value : theta) value = rng.next_double(-0.5, 0.5);
    return theta;
}

struct ParamView {
    const double* w1;
    const double* b1;
    const double* w2;
    const double* b2;
};

ParamView view(const std::vector<double>& theta, int hidden) {
    const double* p = theta.data();
    ParamView v;
    v.w1 = p;
    v.b1 = p + static_cast<std::size_t>(hidden) * kNumFeatures;
    v.w2 = v.b1 + hidden;
    v.b2 = v.w2 + static_cast<std::size_t>(kNumClasses) * hidden;
    return v;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Mean cross-entropy over the batch; gradient accumulated into grad when
// non-null (same layout as theta).
double loss_and_gradient(const std::vector<double>& theta, int hidden,
                         const std::vector<FeatureRow>& x, const std::vector<int>& y,
                         std::vector<double>* grad) {
    const ParamView v = view(theta, hidden);
    const std::size_t n = x.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    double* g_w1 = nullptr;
    double* g_b1 = nullptr;
    double* g_w2 = nullptr;
    double* g_b2 = nullptr;
    if (grad) {
        grad->assign(theta.size(), 0.0);
        double* p = grad->data();
        g_w1 = p;
        g_b1 = p + static_cast<std::size_t>(hidden) * kNumFeatures;
        g_w2 = g_b1 + hidden;
        g_b2 = g_w2 + static_cast<std::size_t>(kNumClasses) * hidden;
    }

    std::vector<double> a1(hidden);
    std::array<double, kNumClasses> z2{}, prob{};
    double loss = 0.0;

    for (std::size_t s = 0; s < n; ++s) {
        for (int h = 0; h < hidden; ++h) {
            double z = v.b1[h];
            for (int j = 0; j < kNumFeatures; ++j)
                z += v.w1[h * kNumFeatures + j] * x[s][j];
            a1[h] = logistic(z);
        }
        double z_max = -1e300;
        for (int k = 0; k < kNumClasses; ++k) {
            double z = v.b2[k];
            for (int h = 0; h < hidden; ++h) z += v.w2[k * hidden + h] * a1[h];
            z2[k] = z;
            z_max = std::max(z_max, z);
        }
        double denom = 0.0;
        for (int k = 0; k < kNumClasses; ++k) {
            prob[k] = std::exp(z2[k] - z_max);
            denom += prob[k];
        }
        for (int k = 0; k < kNumClasses; ++k) prob[k] /= denom;
        loss -= inv_n * std::log(prob[y[s]]);

        if (!grad) continue;
        std::array<double, kNumClasses> dz2{};
        for (int k = 0; k < kNumClasses; ++k)
            dz2[k] = (prob[k] - (k == y[s] ? 1.0 : 0.0)) * inv_n;
        for (int k = 0; k < kNumClasses; ++k) {
            for (int h = 0; h < hidden; ++h)
                g_w2[k * hidden + h] += dz2[k] * a1[h];
            g_b2[k] += dz2[k];
        }
        for (int h = 0; h < hidden; ++h) {
            double da1 = 0.0;
            for (int k = 0; k < kNumClasses; ++k) da1 += v.w2[k * hidden + h] * dz2[k];
            const double dz1 = da1 * a1[h] * (1.0 - a1[h]);
            for (int j = 0; j < kNumFeatures; ++j)
                g_w1[h * kNumFeatures + j] += dz1 * x[s][j];
            g_b1[h] += dz1;
        }
    }
    return loss;
}

} // namespace

TrainedModel train_mlp(const LabeledDataset& dataset, int hidden, double learning_rate,
                       int epochs, std::uint64_t seed) {
    if (hidden <= 0) throw std::invalid_argument("MLP: hidden size must be positive");
    if (learning_rate <= 0.0) throw std::invalid_argument("MLP: learning rate must be positive");
    if (epochs <= 0) throw std::invalid_argument("MLP: epoch count must be positive");
    if (dataset.size() == 0) throw std::invalid_argument("MLP: empty training set");

    LabeledDataset scaled = dataset;
    standardize(scaled);

    std::vector<double> theta = initial_parameters(hidden, seed);
    std::vector<double> grad;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        const double loss =
            loss_and_gradient(theta, hidden, scaled.features, scaled.labels, &grad);
        if (!std::isfinite(loss))
            throw std::runtime_error("MLP: loss became non-finite at epoch " +
                                     std::to_string(epoch));
        for (std::size_t t = 0; t < theta.size(); ++t)
            theta[t] -= learning_rate * grad[t];
    }

    MlpParams params;
    params.hidden_size = hidden;
    params.learning_rate = learning_rate;
    params.epochs = epochs;
    params.seed = seed;
    const ParamView v = view(theta, hidden);
    params.w1.assign(v.w1, v.w1 + static_cast<std::size_t>(hidden) * kNumFeatures);
    params.b1.assign(v.b1, v.b1 + hidden);
    params.w2.assign(v.w2, v.w2 + static_cast<std::size_t>(kNumClasses) * hidden);
    params.b2.assign(v.b2, v.b2 + kNumClasses);

    TrainedModel model;
    model.kind = "mlp";
    model.scaling = scaled.scaling;
    model.params = std::move(params);
    return model;
}

std::pair<int, std::array<double, kNumClasses>>
predict_mlp(const TrainedModel& model, const FeatureRow& row) {
    const auto& params = std::get<MlpParams>(model.params);
    const FeatureRow x = apply_scaling(*model.scaling, row);
    const int hidden = params.hidden_size;

    std::vector<double> a1(hidden);
    for (int h = 0; h < hidden; ++h) {
        double z = params.b1[h];
        for (int j = 0; j < kNumFeatures; ++j) z += params.w1[h * kNumFeatures + j] * x[j];
        a1[h] = logistic(z);
    }
    std::array<double, kNumClasses> z2{};
    double z_max = -1e300;
    for (int k = 0; k < kNumClasses; ++k) {
        double z = params.b2[k];
        for (int h = 0; h < hidden; ++h) z += params.w2[k * hidden + h] * a1[h];
        z2[k] = z;
        z_max = std::max(z_max, z);
    }
    std::array<double, kNumClasses> prob{};
    double denom = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
        prob[k] = std::exp(z2[k] - z_max);
        denom += prob[k];
    }
    int best = 0;
    for (int k = 0; k < kNumClasses; ++k) {
        prob[k] /= denom;
        if (prob[k] > prob[best]) best = k;
    }
    return {best, prob};
}

double mlp_max_gradient_error(const std::vector<FeatureRow>& features,
                              const std::vector<int>& labels, int hidden,
                              std::uint64_t seed, double fd_step) {
    if (features.empty() || features.size() != labels.size())
        throw std::invalid_argument("MLP gradient check: bad batch");

    std::vector<double> theta = initial_parameters(hidden, seed);
    std::vector<double> analytic;
    loss_and_gradient(theta, hidden, features, labels, &analytic);

    double worst = 0.0;
    for (std::size_t t = 0; t < theta.size(); ++t) {
        const double saved = theta[t];
        theta[t] = saved + fd_step;
        const double plus = loss_and_gradient(theta, hidden, features, labels, nullptr);
        theta[t] = saved - fd_step;
        const double minus = loss_and_gradient(theta, hidden, features, labels, nullptr);
        theta[t] = saved;
        const double numeric = (plus - minus) / (2.0 * fd_step);
        const double scale = std::max({std::fabs(analytic[t]), std::fabs(numeric), 1e-8});
        worst = std::max(worst, std::fabs(analytic[t] - numeric) / scale);
    }
    return worst;
}

} // namespace snsel
