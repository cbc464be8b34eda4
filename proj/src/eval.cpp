#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "snsel/eval.hpp"

namespace snsel {

namespace {

void check_pair(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.empty()) throw std::invalid_argument("metric on empty label vector");
    if (truth.size() != predicted.size())
        throw std::invalid_argument("metric on mismatched label vectors");
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double sum = 0.0;
    for (double v : values) {
        const double d = v - mean;
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

std::string format_metric(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

} // namespace

double accuracy(const std::vector<int>& truth, const std::vector<int>& predicted) {
    check_pair(truth, predicted);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (truth[i] == predicted[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double cohen_kappa(const std::vector<int>& truth, const std::vector<int>& predicted) {
    check_pair(truth, predicted);
    const double n = static_cast<double>(truth.size());
    std::array<double, kNumClasses> row_sum{}, col_sum{};
    double agree = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        row_sum[truth[i]] += 1.0;
        col_sum[predicted[i]] += 1.0;
        if (truth[i] == predicted[i]) agree += 1.0;
    }
    const double p_a = agree / n;
    double p_e = 0.0;
    for (int k = 0; k < kNumClasses; ++k) p_e += (row_sum[k] / n) * (col_sum[k] / n);
    if (p_e >= 1.0) return p_a >= 1.0 ? 1.0 : 0.0;
    return (p_a - p_e) / (1.0 - p_e);
}

std::vector<int> stratified_fold_assignment(const std::vector<int>& labels,
                                            int folds, Rng& rng) {
    if (folds < 2) throw std::invalid_argument("stratified folds must be at least 2");
    std::vector<int> assignment(labels.size(), -1);
    for (int k = 0; k < kNumClasses; ++k) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == k) members.push_back(i);
        if (static_cast<int>(members.size()) < folds)
            throw std::invalid_argument("class '" + class_name(k) + "' has " +
                                        std::to_string(members.size()) +
                                        " samples, fewer than " +
                                        std::to_string(folds) + " folds");
        shuffle(members, rng);
        for (std::size_t p = 0; p < members.size(); ++p)
            assignment[members[p]] = static_cast<int>(p % folds);
    }
    return assignment;
}

EvalReport repeated_stratified_kfold(const LabeledDataset& dataset,
                                     const std::string& model_kind,
                                     const Hyperparams& hp, std::uint64_t model_seed,
                                     const CVConfig& cv, int jobs) {
    if (cv.folds < 2) throw std::invalid_argument("CV needs at least 2 folds");
    if (cv.repeats < 1) throw std::invalid_argument("CV needs at least 1 repeat");
    if (dataset.size() == 0) throw std::invalid_argument("CV on empty dataset");

    // All fold assignments are drawn serially up front so that the random
    // stream is independent of the worker count.
    Rng rng(cv.seed);
    std::vector<std::vector<int>> assignments;
    assignments.reserve(cv.repeats);
    for (int r = 0; r < cv.repeats; ++r)
        assignments.push_back(stratified_fold_assignment(dataset.labels, cv.folds, rng));

    const int total = cv.repeats * cv.folds;
    std::vector<double> fold_accuracy(total), fold_kappa(total);
    std::vector<std::array<std::array<long long, kNumClasses>, kNumClasses>> partial(
        total);

    const auto started = std::chrono::steady_clock::now();

    auto evaluate_one = [&](int index) {
        const int repeat = index / cv.folds;
        const int fold = index % cv.folds;
        const std::vector<int>& assignment = assignments[repeat];

        LabeledDataset train;
        std::vector<FeatureRow> test_features;
        std::vector<int> test_truth;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (assignment[i] == fold) {
                test_features.push_back(dataset.features[i]);
                test_truth.push_back(dataset.labels[i]);
            } else {
                train.features.push_back(dataset.features[i]);
                train.labels.push_back(dataset.labels[i]);
            }
        }

        const TrainedModel model = train_model(model_kind, train, hp, model_seed);
        std::vector<int> predicted;
        predicted.reserve(test_features.size());
        for (const FeatureRow& row : test_features)
            predicted.push_back(predict_class(model, row));

        fold_accuracy[index] = accuracy(test_truth, predicted);
        fold_kappa[index] = cohen_kappa(test_truth, predicted);
        auto& conf = partial[index];
        for (auto& row : conf) row.fill(0);
        for (std::size_t i = 0; i < test_truth.size(); ++i)
            ++conf[test_truth[i]][predicted[i]];
    };

    if (jobs <= 1) {
        for (int index = 0; index < total; ++index) evaluate_one(index);
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (;;) {
                const int index = next.fetch_add(1);
                if (index >= total) break;
                evaluate_one(index);
            }
        };
        std::vector<std::thread> threads;
        const int n_threads = std::min(jobs, total);
        threads.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    const auto finished = std::chrono::steady_clock::now();

    EvalReport report;
    report.model_kind = model_kind;
    report.config = cv;
    report.fold_accuracy = std::move(fold_accuracy);
    report.fold_kappa = std::move(fold_kappa);
    report.accuracy_mean = mean_of(report.fold_accuracy);
    report.accuracy_sd = sample_sd(report.fold_accuracy, report.accuracy_mean);
    report.kappa_mean = mean_of(report.fold_kappa);
    report.kappa_sd = sample_sd(report.fold_kappa, report.kappa_mean);
    for (const auto& conf : partial)
        for (int r = 0; r < kNumClasses; ++r)
            for (int c = 0; c < kNumClasses; ++c) report.confusion[r][c] += conf[r][c];
    for (int k = 0; k < kNumClasses; ++k) {
        long long col = 0;
        for (int r = 0; r < kNumClasses; ++r) col += report.confusion[r][k];
        report.per_class_precision[k] =
            col == 0 ? 0.0 : static_cast<double>(report.confusion[k][k]) / col;
    }
    report.modeling_seconds =
        std::chrono::duration<double>(finished - started).count();
    return report;
}

std::vector<EvalReport> rank_models(std::vector<EvalReport> reports) {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const EvalReport& a, const EvalReport& b) {
                         if (a.accuracy_mean != b.accuracy_mean)
                             return a.accuracy_mean > b.accuracy_mean;
                         if (a.kappa_mean != b.kappa_mean)
                             return a.kappa_mean > b.kappa_mean;
                         return a.model_kind < b.model_kind;
                     });
    return reports;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["model"] = report.model_kind;
    j["label"] = report.label;
    j["folds"] = report.config.folds;
    j["repeats"] = report.config.repeats;
    j["seed"] = report.config.seed;
    j["accuracy_mean"] = report.accuracy_mean;
    j["accuracy_sd"] = report.accuracy_sd;
    j["kappa_mean"] = report.kappa_mean;
    j["kappa_sd"] = report.kappa_sd;
    nlohmann::json confusion = nlohmann::json::array();
    for (const auto& row : report.confusion)
        confusion.push_back(nlohmann::json{row[0], row[1], row[2]});
    j["confusion"] = std::move(confusion);
    j["per_class_precision"] =
        nlohmann::json{report.per_class_precision[0], report.per_class_precision[1],
                       report.per_class_precision[2]};
    j["modeling_seconds"] = report.modeling_seconds;
    j["fold_accuracy"] = report.fold_accuracy;
    j["fold_kappa"] = report.fold_kappa;
    return j.dump(2) + "\n";
}

void write_report_json(const EvalReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open report file for writing: " + path);
    out << report_to_json(report);
    out.flush();
    if (!out) throw std::runtime_error("failed writing report file: " + path);
}

void write_fold_csv(const std::vector<EvalReport>& reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open fold CSV for writing: " + path);
    out << "model,label,repeat,fold,accuracy,kappa\n";
    for (const EvalReport& report : reports) {
        for (int index = 0; index < static_cast<int>(report.fold_accuracy.size());
             ++index) {
            const int repeat = index / report.config.folds;
            const int fold = index % report.config.folds;
            out << report.model_kind << ',' << report.label << ',' << repeat << ','
                << fold << ',' << format_metric(report.fold_accuracy[index]) << ','
                << format_metric(report.fold_kappa[index]) << '\n';
        }
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing fold CSV: " + path);
}

} // namespace snsel
