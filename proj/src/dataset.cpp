#include "snsel/dataset.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace snsel {

namespace {

constexpr const char* kCsvHeader =
    "sn_order,num_cells,scattering_ratio,rich_sweeps,dsa_sweeps,nda_sweeps,"
    "rich_runtime_s,dsa_runtime_s,nda_runtime_s,rich_converged,dsa_converged,"
    "nda_converged,best_sweeps,best_runtime";

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string case_id(const CaseRecord& r) {
    return "(sn_order=" + std::to_string(r.sn_order) +
           ", num_cells=" + std::to_string(r.num_cells) +
           ", scattering_ratio=" + format_double(r.scattering_ratio) + ")";
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("CSV parse error at line " + std::to_string(line) +
                             ": " + what);
}

long long parse_int(const std::string& field, std::size_t line) {
    if (field.empty()) parse_fail(line, "empty integer field");
    char* end = nullptr;
    const long long value = std::strtoll(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size())
        parse_fail(line, "non-numeric integer field '" + field + "'");
    return value;
}

double parse_double(const std::string& field, std::size_t line) {
    if (field.empty()) parse_fail(line, "empty numeric field");
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size())
        parse_fail(line, "non-numeric field '" + field + "'");
    return value;
}

bool parse_bool(const std::string& field, std::size_t line) {
    if (field == "0") return false;
    if (field == "1") return true;
    parse_fail(line, "boolean field must be 0 or 1, got '" + field + "'");
}

Solver parse_label(const std::string& field, std::size_t line) {
    try {
        return solver_from_name(field);
    } catch (const std::invalid_argument&) {
        parse_fail(line, "unknown solver label '" + field + "'");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

} // namespace

FeatureGrid FeatureGrid::default_grid() {
    FeatureGrid grid;
    grid.sn_orders = {2, 4, 8, 16, 32};
    for (int cells = 4; cells <= 1024; cells *= 2) grid.cell_counts.push_back(cells);
    for (int i = 0; i <= 100; ++i) grid.scattering_ratios.push_back(i / 100.0);
    return grid;
}

const SolverResult& CaseRecord::result(Solver s) const {
    switch (s) {
        case Solver::richardson: return richardson;
        case Solver::dsa: return dsa;
        default: return nda;
    }
}

SolverResult& CaseRecord::result(Solver s) {
    switch (s) {
        case Solver::richardson: return richardson;
        case Solver::dsa: return dsa;
        default: return nda;
    }
}

std::vector<CaseRecord> generate(const FeatureGrid& grid,
                                 const SlabProblem& problem_template, int jobs,
                                 void (*progress)(std::size_t, std::size_t)) {
    const std::size_t total = grid.case_count();
    std::vector<CaseRecord> records(total);
    if (total == 0) return records;

    std::map<int, AngularQuadrature> quadratures;
    for (int order : grid.sn_orders) quadratures.emplace(order, gauss_legendre(order));

    const std::size_t cells_count = grid.cell_counts.size();
    const std::size_t ratio_count = grid.scattering_ratios.size();

    std::atomic<std::size_t> next_case{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t index = next_case.fetch_add(1);
            if (index >= total) break;

            const std::size_t sn_index = index / (cells_count * ratio_count);
            const std::size_t cell_index = (index / ratio_count) % cells_count;
            const std::size_t ratio_index = index % ratio_count;

            SlabProblem problem = problem_template;
            problem.sn_order = grid.sn_orders[sn_index];
            problem.num_cells = grid.cell_counts[cell_index];
            problem.scattering_ratio = grid.scattering_ratios[ratio_index];
            const AngularQuadrature& quad = quadratures.at(problem.sn_order);

            CaseRecord& record = records[index];
            record.sn_order = problem.sn_order;
            record.num_cells = problem.num_cells;
            record.scattering_ratio = problem.scattering_ratio;
            for (Solver s : {Solver::richardson, Solver::dsa, Solver::nda}) {
                SolveOutcome outcome = s == Solver::richardson
                                           ? solve_richardson(problem, quad)
                                       : s == Solver::dsa ? solve_dsa(problem, quad)
                                                          : solve_nda(problem, quad);
                SolverResult& slot = record.result(s);
                slot.sweeps = outcome.sweeps;
                slot.runtime_seconds = outcome.runtime_seconds;
                slot.converged = outcome.converged;
            }

            const std::size_t finished = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(finished, total);
            }
        }
    };

    const int thread_count = std::max(1, jobs);
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }
    return records;
}

void label_best(std::vector<CaseRecord>& records, LabelCriterion criterion,
                const std::vector<Solver>& tie_break) {
    if (tie_break.size() != 3)
        throw std::invalid_argument("tie_break must order all three solvers");
    for (CaseRecord& record : records) {
        bool found = false;
        Solver best = Solver::richardson;
        double best_value = 0.0;
        for (Solver s : tie_break) {
            const SolverResult& result = record.result(s);
            if (!result.converged) continue;
            const double value = criterion == LabelCriterion::sweeps
                                     ? static_cast<double>(result.sweeps)
                                     : result.runtime_seconds;
            if (!found || value < best_value) {
                found = true;
                best = s;
                best_value = value;
            }
        }
        if (!found)
            throw std::runtime_error("no converged solver for case " + case_id(record));
        if (criterion == LabelCriterion::sweeps)
            record.best_by_sweeps = best;
        else
            record.best_by_runtime = best;
    }
}

void write_csv(const std::vector<CaseRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << kCsvHeader << '\n';
    for (const CaseRecord& r : records) {
        out << r.sn_order << ',' << r.num_cells << ','
            << format_double(r.scattering_ratio) << ',' << r.richardson.sweeps
            << ',' << r.dsa.sweeps << ',' << r.nda.sweeps << ','
            << format_double(r.richardson.runtime_seconds) << ','
            << format_double(r.dsa.runtime_seconds) << ','
            << format_double(r.nda.runtime_seconds) << ','
            << (r.richardson.converged ? 1 : 0) << ',' << (r.dsa.converged ? 1 : 0)
            << ',' << (r.nda.converged ? 1 : 0) << ','
            << solver_name(r.best_by_sweeps) << ','
            << solver_name(r.best_by_runtime) << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<CaseRecord> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);

    std::string line;
    if (!std::getline(in, line)) return {}; // empty file: zero records
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        parse_fail(1, "header does not match the expected 14-column schema");

    std::vector<CaseRecord> records;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 14)
            parse_fail(line_number, "expected 14 columns, got " +
                                        std::to_string(f.size()));
        CaseRecord r;
        r.sn_order = static_cast<int>(parse_int(f[0], line_number));
        r.num_cells = static_cast<int>(parse_int(f[1], line_number));
        r.scattering_ratio = parse_double(f[2], line_number);
        r.richardson.sweeps = static_cast<int>(parse_int(f[3], line_number));
        r.dsa.sweeps = static_cast<int>(parse_int(f[4], line_number));
        r.nda.sweeps = static_cast<int>(parse_int(f[5], line_number));
        r.richardson.runtime_seconds = parse_double(f[6], line_number);
        r.dsa.runtime_seconds = parse_double(f[7], line_number);
        r.nda.runtime_seconds = parse_double(f[8], line_number);
        r.richardson.converged = parse_bool(f[9], line_number);
        r.dsa.converged = parse_bool(f[10], line_number);
        r.nda.converged = parse_bool(f[11], line_number);
        r.best_by_sweeps = parse_label(f[12], line_number);
        r.best_by_runtime = parse_label(f[13], line_number);
        records.push_back(r);
    }
    return records;
}

} // namespace snsel
