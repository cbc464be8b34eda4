#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "snsel/ml.hpp"

namespace snsel {

struct CVConfig {
    int folds = 4;
    int repeats = 25;
    std::uint64_t seed = 0;
};

struct EvalReport {
    std::string model_kind;
    std::string label; // "sweeps" | "runtime"
    CVConfig config;
    double accuracy_mean = 0.0;
    double accuracy_sd = 0.0;
    double kappa_mean = 0.0;
    double kappa_sd = 0.0;
    // rows = truth, columns = prediction, accumulated over every held-out fold
    std::array<std::array<long long, kNumClasses>, kNumClasses> confusion{};
    std::array<double, kNumClasses> per_class_precision{};
    double modeling_seconds = 0.0;
    std::vector<double> fold_accuracy; // folds x repeats values, fold-major per repeat
    std::vector<double> fold_kappa;
};

// Fraction of equal positions. Throws on empty or mismatched inputs.
double accuracy(const std::vector<int>& truth, const std::vector<int>& predicted);

// (p_a - p_e) / (1 - p_e); when p_e == 1 returns 1 if p_a == 1 else 0.
double cohen_kappa(const std::vector<int>& truth, const std::vector<int>& predicted);

// Seeded stratified fold assignment: per class, indices are shuffled and
// dealt round-robin into `folds` parts. Returns fold id per sample.
// Throws naming the deficient class when a class has fewer members than folds.
std::vector<int> stratified_fold_assignment(const std::vector<int>& labels,
                                            int folds, Rng& rng);

// Repeated stratified k-fold CV of one model kind over the dataset (raw
// features; scale-dependent kinds are standardized on each training split).
// Means/sds are over the folds x repeats per-fold values; the confusion
// matrix accumulates every held-out prediction. `jobs` > 1 evaluates folds in
// parallel; everything except modeling_seconds is identical to a serial run.
EvalReport repeated_stratified_kfold(const LabeledDataset& dataset,
                                     const std::string& model_kind,
                                     const Hyperparams& hp,
                                     std::uint64_t model_seed,
                                     const CVConfig& cv, int jobs = 1);

// Descending accuracy_mean, ties by descending kappa_mean, then model kind.
std::vector<EvalReport> rank_models(std::vector<EvalReport> reports);

// Report persistence: a JSON document per evaluation run plus a flat CSV of
// per-fold metrics (columns: model,label,repeat,fold,accuracy,kappa).
std::string report_to_json(const EvalReport& report); // pretty, sorted keys
void write_report_json(const EvalReport& report, const std::string& path);
void write_fold_csv(const std::vector<EvalReport>& reports, const std::string& path);

} // namespace snsel
