#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snsel/cli.hpp"
#include "snsel/dataset.hpp"

namespace snsel {

namespace {

const std::array<std::string, kNumFeatures> kFeatureNames = {
    "sn_order", "num_cells", "scattering_ratio"};

int fail_usage(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return kExitUsage;
}

int fail_io(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return kExitIo;
}

int fail_numeric(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return kExitNumeric;
}

std::string format_g17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string path_join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

Solver best_of(const CaseRecord& record, LabelCriterion criterion) {
    return criterion == LabelCriterion::sweeps ? record.best_by_sweeps
                                               : record.best_by_runtime;
}

std::array<std::size_t, kNumClasses>
label_counts(const std::vector<CaseRecord>& records, LabelCriterion criterion) {
    std::array<std::size_t, kNumClasses> counts{};
    for (const CaseRecord& record : records)
        ++counts[class_index(best_of(record, criterion))];
    return counts;
}

void print_distribution(const std::vector<CaseRecord>& records) {
    const std::size_t total = records.size();
    for (const char* column : {"best_sweeps", "best_runtime"}) {
        const LabelCriterion criterion = std::string(column) == "best_sweeps"
                                             ? LabelCriterion::sweeps
                                             : LabelCriterion::runtime;
        const auto counts = label_counts(records, criterion);
        std::printf("%s distribution:\n", column);
        for (int k = 0; k < kNumClasses; ++k) {
            const double pct =
                total == 0 ? 0.0 : 100.0 * static_cast<double>(counts[k]) / total;
            std::printf("  %-11s %7zu  %6.2f%%\n", class_name(k).c_str(), counts[k],
                        pct);
        }
    }
}

int validate_hyperparams(const Hyperparams& hp) {
    if (hp.knn_k < 1) return fail_usage("--knn-k must be at least 1");
    if (hp.rf_trees < 1) return fail_usage("--rf-trees must be at least 1");
    if (hp.rf_feature_subset < 1 || hp.rf_feature_subset > kNumFeatures)
        return fail_usage("--rf-feature-subset must be between 1 and 3");
    if (hp.rf_min_leaf < 1) return fail_usage("--rf-min-leaf must be at least 1");
    if (hp.svm_c <= 0.0) return fail_usage("--svm-c must be positive");
    if (hp.svm_gamma <= 0.0) return fail_usage("--svm-gamma must be positive");
    if (hp.mlp_hidden < 1) return fail_usage("--mlp-hidden must be at least 1");
    if (hp.mlp_lr <= 0.0) return fail_usage("--mlp-lr must be positive");
    if (hp.mlp_epochs < 1) return fail_usage("--mlp-epochs must be at least 1");
    if (hp.lda_ridge < 0.0) return fail_usage("--lda-ridge must be non-negative");
    return kExitOk;
}

int validate_kind(const std::string& kind) {
    const auto& kinds = model_kinds();
    if (std::find(kinds.begin(), kinds.end(), kind) != kinds.end()) return kExitOk;
    std::string valid;
    for (const std::string& k : kinds) valid += (valid.empty() ? "" : " ") + k;
    return fail_usage("unknown model kind '" + kind + "'; valid kinds: " + valid);
}

int validate_label(const std::string& label) {
    if (label == "sweeps" || label == "runtime") return kExitOk;
    return fail_usage("--label must be 'sweeps' or 'runtime'");
}

LabelCriterion criterion_from(const std::string& label) {
    return label == "sweeps" ? LabelCriterion::sweeps : LabelCriterion::runtime;
}

// ---- report file writers -----------------------------------------------------

void write_distribution_csv(const std::vector<CaseRecord>& records,
                            const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "criterion,label,count,percent\n";
    const std::size_t total = records.size();
    for (const char* name : {"sweeps", "runtime"}) {
        const auto counts = label_counts(
            records, std::string(name) == "sweeps" ? LabelCriterion::sweeps
                                                   : LabelCriterion::runtime);
        for (int k = 0; k < kNumClasses; ++k) {
            const double pct =
                total == 0 ? 0.0 : 100.0 * static_cast<double>(counts[k]) / total;
            out << name << ',' << class_name(k) << ',' << counts[k] << ','
                << format_g17(pct) << '\n';
        }
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing: " + path);
}

void write_cases_csv(const std::vector<CaseRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "sn_order,num_cells,scattering_ratio,best_sweeps,best_runtime\n";
    for (const CaseRecord& record : records) {
        out << record.sn_order << ',' << record.num_cells << ','
            << format_g17(record.scattering_ratio) << ','
            << solver_name(record.best_by_sweeps) << ','
            << solver_name(record.best_by_runtime) << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing: " + path);
}

void write_gini_csv(const std::array<double, kNumFeatures>& importance,
                    const std::string& path) {
    double total = 0.0;
    for (double v : importance) total += v;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "feature,importance,share\n";
    for (int j = 0; j < kNumFeatures; ++j) {
        const double share = total == 0.0 ? 0.0 : importance[j] / total;
        out << kFeatureNames[j] << ',' << format_g17(importance[j]) << ','
            << format_g17(share) << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing: " + path);
}

void tree_lines(const DecisionTree& tree, int index, int depth, int max_depth,
                double root_total, const std::string& prefix, const std::string& tag,
                std::ostream& out) {
    const TreeNode& node = tree.nodes[index];
    int total = 0;
    for (int c : node.counts) total += c;
    const double pct = root_total == 0.0 ? 0.0 : 100.0 * total / root_total;

    std::ostringstream proportions;
    for (int k = 0; k < kNumClasses; ++k) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%s %.3f", class_name(k).c_str(),
                      total == 0 ? 0.0 : static_cast<double>(node.counts[k]) / total);
        proportions << (k == 0 ? "" : " ") << buffer;
    }

    out << prefix << tag;
    if (node.feature < 0) {
        int best = 0;
        for (int k = 1; k < kNumClasses; ++k)
            if (node.counts[k] > node.counts[best]) best = k;
        out << "leaf: " << class_name(best);
    } else if (depth >= max_depth) {
        out << "subtree (depth limit)";
    } else {
        char rule[64];
        std::snprintf(rule, sizeof(rule), "%s <= %g",
                      kFeatureNames[node.feature].c_str(), node.threshold);
        out << rule;
    }
    char suffix[48];
    std::snprintf(suffix, sizeof(suffix), " | samples %.1f%% | ", pct);
    out << suffix << proportions.str() << '\n';

    if (node.feature < 0 || depth >= max_depth) return;
    const std::string child_prefix = prefix + (tag.empty() ? "" : "|  ");
    tree_lines(tree, node.left, depth + 1, max_depth, root_total, child_prefix,
               "|- yes: ", out);
    tree_lines(tree, node.right, depth + 1, max_depth, root_total, child_prefix,
               "|- no:  ", out);
}

void write_tree_text(const DecisionTree& tree, int max_depth, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    double root_total = 0.0;
    for (int c : tree.nodes[0].counts) root_total += c;
    tree_lines(tree, 0, 0, max_depth, root_total, "", "", out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing: " + path);
}

void write_distribution_svg(const std::vector<CaseRecord>& records,
                            const std::string& path) {
    const std::array<std::size_t, kNumClasses> sweeps =
        label_counts(records, LabelCriterion::sweeps);
    const std::array<std::size_t, kNumClasses> runtime =
        label_counts(records, LabelCriterion::runtime);
    const double total = records.empty() ? 1.0 : static_cast<double>(records.size());
    const std::array<const char*, kNumClasses> colors = {"#4e79a7", "#f28e2b",
                                                         "#e15759"};

    const double chart_left = 60.0, chart_bottom = 320.0, chart_height = 260.0;
    const double bar_width = 60.0, bar_gap = 14.0, group_gap = 70.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
           "viewBox=\"0 0 640 400\">\n";
    svg << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    svg << "<text x=\"320\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">best-solver distribution</text>\n";
    for (int tick = 0; tick <= 100; tick += 25) {
        const double y = chart_bottom - chart_height * tick / 100.0;
        svg << "<line x1=\"" << chart_left << "\" y1=\"" << y << "\" x2=\"620\" y2=\""
            << y << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << chart_left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick << "%</text>\n";
    }
    double x = chart_left + 30.0;
    int group = 0;
    for (const auto* counts : {&sweeps, &runtime}) {
        const double group_start = x;
        for (int k = 0; k < kNumClasses; ++k) {
            const double pct = 100.0 * static_cast<double>((*counts)[k]) / total;
            const double height = chart_height * pct / 100.0;
            svg << "<rect x=\"" << x << "\" y=\"" << chart_bottom - height
                << "\" width=\"" << bar_width << "\" height=\"" << height
                << "\" fill=\"" << colors[k] << "\"/>\n";
            char pct_text[16];
            std::snprintf(pct_text, sizeof(pct_text), "%.1f%%", pct);
            svg << "<text x=\"" << x + bar_width / 2 << "\" y=\""
                << chart_bottom - height - 6
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                   "font-size=\"11\">"
                << pct_text << "</text>\n";
            svg << "<text x=\"" << x + bar_width / 2 << "\" y=\"" << chart_bottom + 16
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                   "font-size=\"11\">"
                << class_name(k) << "</text>\n";
            x += bar_width + bar_gap;
        }
        const double group_center = (group_start + x - bar_gap) / 2.0;
        svg << "<text x=\"" << group_center << "\" y=\"" << chart_bottom + 36
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"12\">"
            << (group == 0 ? "best_by_sweeps" : "best_by_runtime") << "</text>\n";
        x += group_gap;
        ++group;
    }
    svg << "<line x1=\"" << chart_left << "\" y1=\"" << chart_bottom - chart_height
        << "\" x2=\"" << chart_left << "\" y2=\"" << chart_bottom
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << chart_left << "\" y1=\"" << chart_bottom
        << "\" x2=\"620\" y2=\"" << chart_bottom << "\" stroke=\"black\"/>\n";
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << svg.str();
    out.flush();
    if (!out) throw std::runtime_error("failed writing: " + path);
}

} // namespace

// ---- subcommands --------------------------------------------------------------

int cmd_generate(const RunConfig& config) {
    FeatureGrid grid = FeatureGrid::default_grid();
    if (!config.sn_orders.empty()) grid.sn_orders = config.sn_orders;
    if (!config.cell_counts.empty()) grid.cell_counts = config.cell_counts;
    if (!config.scattering_ratios.empty())
        grid.scattering_ratios = config.scattering_ratios;

    for (int n : grid.sn_orders)
        if (n < 2 || n % 2 != 0)
            return fail_usage("--orders entries must be positive even integers");
    for (int cells : grid.cell_counts)
        if (cells < 1) return fail_usage("--cells entries must be at least 1");
    for (double c : grid.scattering_ratios)
        if (!(c >= 0.0 && c <= 1.0))
            return fail_usage("--ratios entries must lie in [0, 1]");
    if (config.tolerance <= 0.0) return fail_usage("--tolerance must be positive");
    if (config.max_sweeps < 1) return fail_usage("--max-sweeps must be at least 1");
    if (config.jobs < 1) return fail_usage("--jobs must be at least 1");
    if (config.out_path.empty()) return fail_usage("--out path is empty");

    const int jobs = config.time_serial ? 1 : config.jobs;
    SlabProblem problem_template;
    problem_template.tolerance = config.tolerance;
    problem_template.max_sweeps = config.max_sweeps;

    std::vector<CaseRecord> records;
    try {
        records = generate(grid, problem_template, jobs);
        label_best(records, LabelCriterion::sweeps);
        label_best(records, LabelCriterion::runtime);
    } catch (const std::invalid_argument& e) {
        return fail_usage(e.what());
    } catch (const std::runtime_error& e) {
        return fail_numeric(e.what());
    }

    try {
        write_csv(records, config.out_path);
    } catch (const std::runtime_error& e) {
        std::remove(config.out_path.c_str());
        return fail_io(e.what());
    }

    print_distribution(records);
    std::printf("wrote %zu cases to %s\n", records.size(), config.out_path.c_str());
    return kExitOk;
}

int cmd_train(const RunConfig& config) {
    if (int code = validate_kind(config.model_kind); code != kExitOk) return code;
    if (int code = validate_label(config.label); code != kExitOk) return code;
    if (int code = validate_hyperparams(config.hp); code != kExitOk) return code;

    std::vector<CaseRecord> records;
    try {
        records = read_csv(config.data_path);
    } catch (const std::runtime_error& e) {
        return fail_io(e.what());
    }

    TrainedModel model;
    try {
        const LabeledDataset dataset =
            LabeledDataset::from_records(records, criterion_from(config.label));
        model = train_model(config.model_kind, dataset, config.hp, config.seed);
    } catch (const std::invalid_argument& e) {
        return fail_usage(e.what());
    } catch (const std::runtime_error& e) {
        return fail_numeric(e.what());
    }

    try {
        save_model(model, config.model_path);
    } catch (const std::runtime_error& e) {
        std::remove(config.model_path.c_str());
        return fail_io(e.what());
    }

    std::printf("trained %s on %zu cases (%s labels) -> %s\n",
                config.model_kind.c_str(), records.size(), config.label.c_str(),
                config.model_path.c_str());
    return kExitOk;
}

int cmd_evaluate(const RunConfig& config) {
    if (config.cv.folds < 2) return fail_usage("--folds must be at least 2");
    if (config.cv.repeats < 1) return fail_usage("--repeats must be at least 1");
    if (config.jobs < 1) return fail_usage("--jobs must be at least 1");
    if (int code = validate_label(config.label); code != kExitOk) return code;
    if (int code = validate_hyperparams(config.hp); code != kExitOk) return code;
    if (config.all_models != config.model_kind.empty())
        return fail_usage("pass exactly one of --model KIND or --all");
    std::vector<std::string> kinds;
    if (config.all_models) {
        kinds = model_kinds();
    } else {
        if (int code = validate_kind(config.model_kind); code != kExitOk) return code;
        kinds.push_back(config.model_kind);
    }

    std::vector<CaseRecord> records;
    try {
        records = read_csv(config.data_path);
    } catch (const std::runtime_error& e) {
        return fail_io(e.what());
    }

    std::vector<EvalReport> reports;
    try {
        const LabeledDataset dataset =
            LabeledDataset::from_records(records, criterion_from(config.label));
        for (const std::string& kind : kinds) {
            EvalReport report = repeated_stratified_kfold(dataset, kind, config.hp,
                                                          config.seed, config.cv,
                                                          config.jobs);
            report.label = config.label;
            reports.push_back(std::move(report));
        }
    } catch (const std::invalid_argument& e) {
        return fail_usage(e.what());
    } catch (const std::runtime_error& e) {
        return fail_numeric(e.what());
    }

    reports = rank_models(std::move(reports));

    std::printf("%-4s %-6s %-18s %-18s %s\n", "rank", "model", "accuracy (sd)",
                "kappa (sd)", "seconds");
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const EvalReport& r = reports[i];
        std::printf("%-4zu %-6s %.4f (%.4f)    %+.4f (%.4f)   %.3f\n", i + 1,
                    r.model_kind.c_str(), r.accuracy_mean, r.accuracy_sd, r.kappa_mean,
                    r.kappa_sd, r.modeling_seconds);
    }

    std::string current;
    try {
        std::filesystem::create_directories(config.out_dir);
        for (const EvalReport& report : reports) {
            current = path_join(config.out_dir,
                                "eval_" + config.label + "_" + report.model_kind +
                                    ".json");
            write_report_json(report, current);
        }
        current = path_join(config.out_dir, "eval_" + config.label + "_folds.csv");
        write_fold_csv(reports, current);
    } catch (const std::exception& e) {
        if (!current.empty()) std::remove(current.c_str());
        return fail_io(e.what());
    }
    return kExitOk;
}

int cmd_recommend(const RunConfig& config) {
    if (config.sn_order < 1)
        return fail_usage("--order must be a positive integer");
    if (config.num_cells < 1)
        return fail_usage("--cells must be a positive integer");
    if (!(config.scattering_ratio >= 0.0 && config.scattering_ratio <= 1.0))
        return fail_usage("--ratio must lie in [0, 1]");

    TrainedModel model;
    try {
        model = load_model(config.model_path);
    } catch (const std::runtime_error& e) {
        return fail_io(e.what());
    }

    const FeatureRow row = {static_cast<double>(config.sn_order),
                            static_cast<double>(config.num_cells),
                            config.scattering_ratio};
    try {
        const int predicted = predict_class(model, row);
        const std::array<double, kNumClasses> scores = class_scores(model, row);
        std::printf("%s\n", class_name(predicted).c_str());
        std::printf("scores: dsa=%.6g nda=%.6g richardson=%.6g\n", scores[0],
                    scores[1], scores[2]);
    } catch (const std::exception& e) {
        return fail_numeric(e.what());
    }
    return kExitOk;
}

int cmd_report(const RunConfig& config) {
    if (config.tree_depth < 0) return fail_usage("--tree-depth must be non-negative");

    std::vector<CaseRecord> records;
    try {
        records = read_csv(config.data_path);
    } catch (const std::runtime_error& e) {
        return fail_io(e.what());
    }

    std::string current;
    std::vector<std::string> written;
    try {
        std::filesystem::create_directories(config.out_dir);

        current = path_join(config.out_dir, "distribution.csv");
        write_distribution_csv(records, current);
        written.push_back(current);

        current = path_join(config.out_dir, "cases.csv");
        write_cases_csv(records, current);
        written.push_back(current);

        if (config.emit_svg) {
            current = path_join(config.out_dir, "distribution.svg");
            write_distribution_svg(records, current);
            written.push_back(current);
        }
    } catch (const std::exception& e) {
        if (!current.empty()) std::remove(current.c_str());
        return fail_io(e.what());
    }

    if (!config.model_path.empty()) {
        TrainedModel model;
        try {
            model = load_model(config.model_path);
        } catch (const std::runtime_error& e) {
            return fail_io(e.what());
        }
        if (model.kind != "rf")
            return fail_usage("report expects an rf model, got '" + model.kind + "'");
        try {
            current = path_join(config.out_dir, "gini_importance.csv");
            write_gini_csv(gini_importance(model), current);
            written.push_back(current);

            current = path_join(config.out_dir, "tree.txt");
            const auto& params = std::get<RfParams>(model.params);
            write_tree_text(params.trees.front(), config.tree_depth, current);
            written.push_back(current);
        } catch (const std::exception& e) {
            std::remove(current.c_str());
            return fail_io(e.what());
        }
    }

    for (const std::string& path : written)
        std::printf("wrote %s\n", path.c_str());
    return kExitOk;
}

// ---- argv entry point -----------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
    RunConfig config;
    CLI::App app{"solver selection toolkit for slab-geometry neutron transport"};
    app.require_subcommand(1);

    CLI::App* gen = app.add_subcommand(
        "generate", "solve the benchmark grid and write the labeled dataset CSV");
    gen->add_option("--orders", config.sn_orders,
                    "quadrature orders (default: 2 4 8 16 32)");
    gen->add_option("--cells", config.cell_counts,
                    "mesh cell counts (default: 4 8 ... 1024)");
    gen->add_option("--ratios", config.scattering_ratios,
                    "scattering ratios in [0,1] (default: 0.00 0.01 ... 1.00)");
    gen->add_option("--tolerance", config.tolerance, "relative L2 stop tolerance");
    gen->add_option("--max-sweeps", config.max_sweeps, "sweep cap per solve");
    gen->add_option("--jobs", config.jobs,
                    "parallel workers (forced to 1 under --time-serial)");
    gen->add_flag("--time-serial,!--no-time-serial", config.time_serial,
                  "solve serially so wall times stay comparable (default: on)");
    gen->add_option("-o,--out", config.out_path, "output CSV path")
        ->envname("SNSEL_OUT");

    CLI::App* train = app.add_subcommand("train", "fit one model on a dataset CSV");
    train->add_option("--data", config.data_path, "dataset CSV path")
        ->envname("SNSEL_DATA");
    train->add_option("--model", config.model_kind, "lda|knn|svm|mlp|rf")
        ->required()
        ->check(CLI::IsMember(model_kinds()));
    train->add_option("--label", config.label, "sweeps|runtime")
        ->check(CLI::IsMember({"sweeps", "runtime"}));
    train->add_option("-o,--out", config.model_path, "model file path")
        ->envname("SNSEL_MODEL");
    train->add_option("--seed", config.seed, "master seed");
    train->add_option("--knn-k", config.hp.knn_k, "KNN neighbor count");
    train->add_option("--rf-trees", config.hp.rf_trees, "forest size");
    train->add_option("--rf-feature-subset", config.hp.rf_feature_subset,
                      "features drawn per split");
    train->add_option("--rf-min-leaf", config.hp.rf_min_leaf, "minimum leaf size");
    train->add_option("--svm-c", config.hp.svm_c, "SVM penalty");
    train->add_option("--svm-gamma", config.hp.svm_gamma, "RBF kernel width");
    train->add_option("--mlp-hidden", config.hp.mlp_hidden, "hidden layer size");
    train->add_option("--mlp-lr", config.hp.mlp_lr, "MLP learning rate");
    train->add_option("--mlp-epochs", config.hp.mlp_epochs, "MLP epochs");
    train->add_option("--lda-ridge", config.hp.lda_ridge, "LDA covariance ridge");

    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "repeated stratified k-fold CV with a ranked summary");
    evaluate->add_option("--data", config.data_path, "dataset CSV path")
        ->envname("SNSEL_DATA");
    evaluate->add_option("--model", config.model_kind, "single model kind")
        ->check(CLI::IsMember(model_kinds()));
    evaluate->add_flag("--all", config.all_models, "evaluate all five kinds");
    evaluate->add_option("--label", config.label, "sweeps|runtime")
        ->check(CLI::IsMember({"sweeps", "runtime"}));
    evaluate->add_option("--folds", config.cv.folds, "folds per repeat (>= 2)");
    evaluate->add_option("--repeats", config.cv.repeats, "stratified repeats");
    evaluate->add_option("--seed", config.seed, "master seed");
    evaluate->add_option("--jobs", config.jobs, "parallel fold evaluations");
    evaluate->add_option("--out-dir", config.out_dir, "directory for reports")
        ->envname("SNSEL_OUT_DIR");
    evaluate->add_option("--knn-k", config.hp.knn_k, "KNN neighbor count");
    evaluate->add_option("--rf-trees", config.hp.rf_trees, "forest size");
    evaluate->add_option("--rf-feature-subset", config.hp.rf_feature_subset,
                         "features drawn per split");
    evaluate->add_option("--rf-min-leaf", config.hp.rf_min_leaf, "minimum leaf size");
    evaluate->add_option("--svm-c", config.hp.svm_c, "SVM penalty");
    evaluate->add_option("--svm-gamma", config.hp.svm_gamma, "RBF kernel width");
    evaluate->add_option("--mlp-hidden", config.hp.mlp_hidden, "hidden layer size");
    evaluate->add_option("--mlp-lr", config.hp.mlp_lr, "MLP learning rate");
    evaluate->add_option("--mlp-epochs", config.hp.mlp_epochs, "MLP epochs");
    evaluate->add_option("--lda-ridge", config.hp.lda_ridge, "LDA covariance ridge");

    CLI::App* recommend = app.add_subcommand(
        "recommend", "print the best solver for one problem configuration");
    recommend->add_option("--model-file", config.model_path, "trained model path")
        ->envname("SNSEL_MODEL");
    recommend->add_option("--order", config.sn_order, "quadrature order")->required();
    recommend->add_option("--cells", config.num_cells, "mesh cell count")->required();
    recommend->add_option("--ratio", config.scattering_ratio, "scattering ratio")
        ->required();

    CLI::App* report = app.add_subcommand(
        "report", "emit distribution/feature-space summaries for plotting");
    report->add_option("--data", config.data_path, "dataset CSV path")
        ->envname("SNSEL_DATA");
    report->add_option("--out-dir", config.out_dir, "output directory")
        ->envname("SNSEL_OUT_DIR");
    report->add_option("--model-file", config.model_path,
                       "rf model for importance + tree export (optional)");
    report->add_option("--tree-depth", config.tree_depth, "tree export depth limit");
    report->add_flag("--svg", config.emit_svg, "also emit a distribution bar chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (config.out_path.empty()) config.out_path = "dataset.csv";
    if (config.data_path.empty()) config.data_path = "dataset.csv";
    if (config.model_path.empty() && !report->parsed()) config.model_path = "model.json";
    if (config.out_dir.empty()) config.out_dir = report->parsed() ? "report" : ".";

    if (gen->parsed()) return cmd_generate(config);
    if (train->parsed()) return cmd_train(config);
    if (evaluate->parsed()) return cmd_evaluate(config);
    if (recommend->parsed()) return cmd_recommend(config);
    if (report->parsed()) return cmd_report(config);
    return fail_usage("no subcommand given");
}

} // namespace snsel
