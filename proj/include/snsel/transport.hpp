#pragma once

#include <string>
#include <vector>

#include "snsel/quadrature.hpp"

namespace snsel {

// One fixed-source slab transport configuration.
// sigma_s = scattering_ratio * sigma_t, sigma_a = sigma_t - sigma_s.
// Vacuum boundaries (zero incoming angular flux) on both faces.
struct SlabProblem {
    double width = 10.0;           // cm
    double sigma_t = 1.0;          // 1/cm
    double scattering_ratio = 0.0; // c in [0, 1]
    double source = 6.0;           // uniform isotropic Q, n/(cm^3 s)
    int num_cells = 0;             // uniform mesh, dx = width / num_cells
    int sn_order = 0;              // N, positive even
    double tolerance = 1e-5;       // relative L2 stopping criterion
    int max_sweeps = 10000;

    double dx() const { return width / num_cells; }
    double sigma_s() const { return scattering_ratio * sigma_t; }
    double sigma_a() const { return sigma_t - sigma_s(); }
    // Throws std::invalid_argument when a field violates its range.
    void validate() const;
};

enum class Solver { richardson, dsa, nda };

const std::string& solver_name(Solver s);
Solver solver_from_name(const std::string& name); // throws on unknown name

// Field-by-field view of a finished solve. scalar_flux is always filled;
// edge_angular_flux is (num_cells+1) x N (edge-major), edge_current has
// num_cells+1 entries; correction holds the last diffusion correction f_i
// (DSA only), d_hat the last edge consistency parameters (NDA only).
struct TransportState {
    std::vector<double> scalar_flux;
    std::vector<std::vector<double>> edge_angular_flux;
    std::vector<double> edge_current;
    std::vector<double> correction;
    std::vector<double> d_hat;
};

struct SolveOutcome {
    Solver solver = Solver::richardson;
    int sweeps = 0;                // transport sweeps executed
    double runtime_seconds = 0.0;  // monotonic wall clock around the solve
    bool converged = false;
    double final_error = 0.0;      // last relative-change value
    std::vector<double> scalar_flux;
};

struct SweepResult {
    std::vector<double> scalar_flux;                  // cell-centered
    std::vector<std::vector<double>> edge_angular_flux; // (cells+1) x N
    std::vector<double> edge_current;                 // cells+1
};

// One diamond-difference transport sweep with a frozen per-cell isotropic
// emission density q_i = (sigma_s/2) phi_i + Q_i/2. Positive directions
// march left to right from a zero boundary value, negative directions the
// mirror image.
SweepResult sweep(const SlabProblem& problem, const AngularQuadrature& quadrature,
                  const std::vector<double>& scattering_source);

// Source (Richardson) iteration: sweep against the previous scalar flux
// until the relative L2 change drops below tolerance. When `state` is given
// it is filled with the final sweep's fields.
SolveOutcome solve_richardson(const SlabProblem& problem,
                              const AngularQuadrature& quadrature,
                              TransportState* state = nullptr);

// Sweep + tridiagonal diffusion correction each outer iteration; the
// correction system and its application both use the (1,2,1)/4 smoothed
// stencil, applied at full strength to the scalar flux.
SolveOutcome solve_dsa(const SlabProblem& problem,
                       const AngularQuadrature& quadrature,
                       TransportState* state = nullptr);

// Picard-iterated high-order/low-order scheme: each pass sweeps with the
// scattering source built from the low-order flux, rebuilds the edge
// consistency parameters from the swept current, and re-solves the
// drift-diffusion system. Convergence is tested on successive low-order
// iterates.
SolveOutcome solve_nda(const SlabProblem& problem,
                       const AngularQuadrature& quadrature,
                       TransportState* state = nullptr);

// |Q*width - (sigma_a * sum(phi_i dx) + J_right - J_left)| / (Q*width);
// absolute residual when Q == 0.
double particle_balance(const SlabProblem& problem, const TransportState& state);

} // namespace snsel
