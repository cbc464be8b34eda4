#pragma once

#include <string>
#include <vector>

#include "snsel/transport.hpp"

namespace snsel {

struct FeatureGrid {
    std::vector<int> sn_orders;
    std::vector<int> cell_counts;
    std::vector<double> scattering_ratios;

    // {2,4,8,16,32} x {4,8,...,1024} x {0.00, 0.01, ..., 1.00} = 4545 cases.
    static FeatureGrid default_grid();
    std::size_t case_count() const {
        return sn_orders.size() * cell_counts.size() * scattering_ratios.size();
    }
};

enum class LabelCriterion { sweeps, runtime };

struct SolverResult {
    int sweeps = 0;
    double runtime_seconds = 0.0;
    bool converged = false;
};

struct CaseRecord {
    int sn_order = 0;
    int num_cells = 0;
    double scattering_ratio = 0.0;
    SolverResult richardson;
    SolverResult dsa;
    SolverResult nda;
    Solver best_by_sweeps = Solver::richardson;
    Solver best_by_runtime = Solver::richardson;

    const SolverResult& result(Solver s) const;
    SolverResult& result(Solver s);
};

inline bool operator==(const SolverResult& a, const SolverResult& b) {
    return a.sweeps == b.sweeps && a.runtime_seconds == b.runtime_seconds &&
           a.converged == b.converged;
}
inline bool operator==(const CaseRecord& a, const CaseRecord& b) {
    return a.sn_order == b.sn_order && a.num_cells == b.num_cells &&
           a.scattering_ratio == b.scattering_ratio &&
           a.richardson == b.richardson && a.dsa == b.dsa && a.nda == b.nda &&
           a.best_by_sweeps == b.best_by_sweeps &&
           a.best_by_runtime == b.best_by_runtime;
}

// Runs all three solvers on every grid point. Labels are NOT assigned here;
// call label_best afterwards. `jobs` > 1 parallelizes across cases (sweep
// counts stay deterministic; wall times are only comparable when jobs == 1).
// `progress`, when set, is called after each finished case with (done, total).
std::vector<CaseRecord> generate(const FeatureGrid& grid,
                                 const SlabProblem& problem_template,
                                 int jobs = 1,
                                 void (*progress)(std::size_t, std::size_t) = nullptr);

// Default tie-break: cheapest per-sweep work first.
inline const std::vector<Solver>& default_tie_break() {
    static const std::vector<Solver> order{Solver::richardson, Solver::dsa,
                                           Solver::nda};
    return order;
}

// Assigns best_by_sweeps or best_by_runtime over the converged solvers of
// each record; exact ties go to the earliest solver in `tie_break`.
// Throws std::runtime_error naming the case if a record has no converged
// solver.
void label_best(std::vector<CaseRecord>& records, LabelCriterion criterion,
                const std::vector<Solver>& tie_break = default_tie_break());

// CSV persistence. Fixed schema (header row, comma separators, UTF-8, LF):
//   sn_order,num_cells,scattering_ratio,rich_sweeps,dsa_sweeps,nda_sweeps,
//   rich_runtime_s,dsa_runtime_s,nda_runtime_s,rich_converged,dsa_converged,
//   nda_converged,best_sweeps,best_runtime
// Floats carry 17 significant digits; booleans are 0/1; labels are lowercase
// solver names. write_csv throws std::runtime_error on I/O failure; read_csv
// throws std::runtime_error with the offending 1-based line number on
// malformed input.
void write_csv(const std::vector<CaseRecord>& records, const std::string& path);
std::vector<CaseRecord> read_csv(const std::string& path);

} // namespace snsel
