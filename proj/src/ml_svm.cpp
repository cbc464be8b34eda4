#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "snsel/ml.hpp"

namespace snsel {

namespace {

double rbf(const FeatureRow& a, const FeatureRow& b, double gamma) {
    double dist = 0.0;
    for (int j = 0; j < kNumFeatures; ++j) {
        const double d = a[j] - b[j];
        dist += d * d;
    }
    return std::exp(-gamma * dist);
}

// Sequential minimal optimization with maximal-violating-pair selection on a
// precomputed kernel matrix. Stops when the KKT gap drops below kkt_tol.
SvmBinary train_pair(const std::vector<FeatureRow>& x, const std::vector<int>& y,
                     int class_a, int class_b, double c, double gamma,
                     double kkt_tol) {
    SvmBinary machine;
    machine.class_a = class_a;
    machine.class_b = class_b;

    const std::size_t n = x.size();
    bool has_a = false, has_b = false;
    for (int label : y) (label > 0 ? has_a : has_b) = true;
    if (!has_a || !has_b) {
        // Degenerate pair: vote for whichever class has data.
        machine.bias = has_a ? 1.0 : -1.0;
        return machine;
    }

    std::vector<double> kernel(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        kernel[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double value = rbf(x[i], x[j], gamma);
            kernel[i * n + j] = value;
            kernel[j * n + i] = value;
        }
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> gradient(n, -1.0); // d/d alpha of the dual objective

    const long long max_iterations = 200000;
    for (long long iteration = 0; iteration < max_iterations; ++iteration) {
        // i maximizes -y g over the set still allowed to grow its alpha;
        // j minimizes -y g over the set allowed to shrink.
        int i = -1, j = -1;
        double up = -1e300, low = 1e300;
        for (std::size_t t = 0; t < n; ++t) {
            const double value = -y[t] * gradient[t];
            const bool in_up = (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
            const bool in_low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c);
            if (in_up && value > up) {
                up = value;
                i = static_cast<int>(t);
            }
            if (in_low && value < low) {
                low = value;
                j = static_cast<int>(t);
            }
        }
        if (i < 0 || j < 0 || up - low <= kkt_tol) break;

        const double* row_i = &kernel[static_cast<std::size_t>(i) * n];
        const double* row_j = &kernel[static_cast<std::size_t>(j) * n];
        const double s = y[i] * y[j];

        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, alpha[j] - alpha[i]);
            hi = std::min(c, c + alpha[j] - alpha[i]);
        } else {
            lo = std::max(0.0, alpha[i] + alpha[j] - c);
            hi = std::min(c, alpha[i] + alpha[j]);
        }
        if (hi <= lo) break;

        double eta = row_i[i] + row_j[j] - 2.0 * row_i[j];
        if (eta <= 0.0) eta = 1e-12;

        const double old_i = alpha[i], old_j = alpha[j];
        double new_j = old_j + y[j] * (y[i] * gradient[i] - y[j] * gradient[j]) / eta;
        new_j = std::min(hi, std::max(lo, new_j));
        const double new_i = old_i + s * (old_j - new_j);
        alpha[i] = new_i;
        alpha[j] = new_j;

        const double delta_i = (new_i - old_i) * y[i];
        const double delta_j = (new_j - old_j) * y[j];
        for (std::size_t t = 0; t < n; ++t)
            gradient[t] += y[t] * (row_i[t] * delta_i + row_j[t] * delta_j);
    }

    // Bias from the free support vectors, or the KKT-gap midpoint when the
    // solution is entirely at the box bounds.
    double free_sum = 0.0;
    int free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0 && alpha[t] < c) {
            free_sum += -y[t] * gradient[t];
            ++free_count;
        }
    }
    if (free_count > 0) {
        machine.bias = free_sum / free_count;
    } else {
        double up = -1e300, low = 1e300;
        for (std::size_t t = 0; t < n; ++t) {
            const double value = -y[t] * gradient[t];
            const bool in_up = (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
            const bool in_low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c);
            if (in_up) up = std::max(up, value);
            if (in_low) low = std::min(low, value);
        }
        machine.bias = (up + low) / 2.0;
    }

    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            machine.support_vectors.push_back(x[t]);
            machine.coefficients.push_back(alpha[t] * y[t]);
        }
    }
    return machine;
}

double decision_value(const SvmBinary& machine, const FeatureRow& x, double gamma) {
    double value = machine.bias;
    for (std::size_t t = 0; t < machine.support_vectors.size(); ++t)
        value += machine.coefficients[t] * rbf(machine.support_vectors[t], x, gamma);
    return value;
}

} // namespace

TrainedModel train_svm(const LabeledDataset& dataset, double c, double gamma) {
    if (c <= 0.0) throw std::invalid_argument("SVM: C must be positive");
    if (gamma <= 0.0) throw std::invalid_argument("SVM: gamma must be positive");

    LabeledDataset scaled = dataset;
    standardize(scaled);

    SvmParams params;
    params.c = c;
    params.gamma = gamma;

    constexpr double kkt_tol = 1e-3;
    for (int a = 0; a < kNumClasses; ++a) {
        for (int b = a + 1; b < kNumClasses; ++b) {
            std::vector<FeatureRow> x;
            std::vector<int> y; // +1 for class a, -1 for class b
            for (std::size_t i = 0; i < scaled.size(); ++i) {
                if (scaled.labels[i] == a) {
                    x.push_back(scaled.features[i]);
                    y.push_back(1);
                } else if (scaled.labels[i] == b) {
                    x.push_back(scaled.features[i]);
                    y.push_back(-1);
                }
            }
            params.machines.push_back(train_pair(x, y, a, b, c, gamma, kkt_tol));
        }
    }

    TrainedModel model;
    model.kind = "svm";
    model.scaling = scaled.scaling;
    model.params = std::move(params);
    return model;
}

std::pair<int, std::array<int, kNumClasses>>
predict_svm(const TrainedModel& model, const FeatureRow& row) {
    const auto& params = std::get<SvmParams>(model.params);
    const FeatureRow x = apply_scaling(*model.scaling, row);

    std::array<int, kNumClasses> votes{};
    for (const SvmBinary& machine : params.machines) {
        const double value = decision_value(machine, x, params.gamma);
        ++votes[value >= 0.0 ? machine.class_a : machine.class_b];
    }

    // Vote ties fall to the lexicographically first class name, which is
    // exactly the lowest encoded index.
    int best = 0;
    for (int k = 1; k < kNumClasses; ++k)
        if (votes[k] > votes[best]) best = k;
    return {best, votes};
}

} // namespace snsel
