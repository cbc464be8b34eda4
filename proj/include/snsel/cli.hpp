#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snsel/eval.hpp"
#include "snsel/ml.hpp"

namespace snsel {

// Exit codes shared by every subcommand (stable scripting contract).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;   // invalid flags / validation failure
inline constexpr int kExitIo = 3;      // file system failure
inline constexpr int kExitNumeric = 4; // numerical failure (e.g. diverged MLP)

struct RunConfig {
    // generate
    std::vector<int> sn_orders;          // empty = default grid
    std::vector<int> cell_counts;
    std::vector<double> scattering_ratios;
    double tolerance = 1e-5;
    int max_sweeps = 10000;
    int jobs = 1;
    bool time_serial = true; // forces jobs=1 so wall times stay comparable
    std::string out_path;

    // train / evaluate / recommend / report
    std::string data_path;
    std::string model_kind;
    bool all_models = false;
    std::string label = "sweeps";
    std::string model_path;
    std::string out_dir;
    Hyperparams hp;
    CVConfig cv;
    std::uint64_t seed = 1;

    // recommend inputs
    int sn_order = 0;
    int num_cells = 0;
    double scattering_ratio = -1.0;

    // report
    int tree_depth = 3;
    bool emit_svg = false;
};

int cmd_generate(const RunConfig& config);
int cmd_train(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_recommend(const RunConfig& config);
int cmd_report(const RunConfig& config);

// Full argv entry point (parses flags, dispatches, maps errors to exit codes).
int run_cli(int argc, const char* const* argv);

} // namespace snsel
