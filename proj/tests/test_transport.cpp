#include <doctest.h>

#include <snsel/quadrature.hpp>
#include <snsel/transport.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace snsel;

namespace {

SlabProblem make_problem(int sn_order, int num_cells, double ratio) {
    SlabProblem p;
    p.sn_order = sn_order;
    p.num_cells = num_cells;
    p.scattering_ratio = ratio;
    return p;
}

double rel_linf(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-30});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

} // namespace

TEST_SUITE("transport") {

TEST_CASE("problem validation rejects out-of-range fields") {
    const SlabProblem good = make_problem(8, 16, 0.5);
    CHECK_NOTHROW(good.validate());

    SlabProblem p = good;
    p.width = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.sigma_t = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.scattering_ratio = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.scattering_ratio = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.source = -2.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.num_cells = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.sn_order = 3;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.sn_order = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.tolerance = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = good;
    p.max_sweeps = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("solver names round-trip") {
    for (Solver s : {Solver::richardson, Solver::dsa, Solver::nda})
        CHECK(solver_from_name(solver_name(s)) == s);
    CHECK(solver_name(Solver::richardson) == "richardson");
    CHECK(solver_name(Solver::dsa) == "dsa");
    CHECK(solver_name(Solver::nda) == "nda");
    CHECK_THROWS_AS((void)solver_from_name("jacobi"), std::invalid_argument);
}

TEST_CASE("sweep with zero emission returns zero everywhere") {
    const SlabProblem p = make_problem(4, 8, 0.0);
    const auto quad = gauss_legendre(p.sn_order);
    const auto r = sweep(p, quad, std::vector<double>(8, 0.0));
    REQUIRE(r.scalar_flux.size() == 8);
    REQUIRE(r.edge_current.size() == 9);
    REQUIRE(r.edge_angular_flux.size() == 9);
    for (double v : r.scalar_flux) CHECK(v == 0.0);
    for (double v : r.edge_current) CHECK(v == 0.0);
    for (const auto& edge : r.edge_angular_flux) {
        REQUIRE(edge.size() == 4);
        for (double v : edge) CHECK(v == 0.0);
    }
}

TEST_CASE("one-cell sweep matches the closed form") {
    // Single cell, two angles, no scattering: the outgoing edge value is
    // q / (|mu|/dx + sigma_t/2) with q = Q/2 = 3, dx = 10, mu = 1/sqrt(3).
    SlabProblem p = make_problem(2, 1, 0.0);
    const auto quad = gauss_legendre(2);
    const auto r = sweep(p, quad, {3.0});

    const double mu = 1.0 / std::sqrt(3.0);
    const double expected_out = 3.0 / (mu / 10.0 + 0.5);
    CHECK(expected_out ==
          doctest::Approx(3.0 / 0.55773502691896257).epsilon(1e-15));

    // Angle ordering is ascending: index 0 is the negative direction.
    // Negative flow exits at the left edge, positive at the right edge.
    CHECK(r.edge_angular_flux[0][0] ==
          doctest::Approx(expected_out).epsilon(1e-14));
    CHECK(r.edge_angular_flux[0][1] == 0.0);
    CHECK(r.edge_angular_flux[1][1] ==
          doctest::Approx(expected_out).epsilon(1e-14));
    CHECK(r.edge_angular_flux[1][0] == 0.0);

    // Cell-centered scalar flux: both angles average 0 and the outgoing
    // value, unit weights.
    CHECK(r.scalar_flux[0] == doctest::Approx(expected_out).epsilon(1e-14));

    // Net current points outward on both faces with mirror symmetry.
    CHECK(r.edge_current[1] == doctest::Approx(mu * expected_out).epsilon(1e-14));
    CHECK(r.edge_current[0] == doctest::Approx(-r.edge_current[1]).epsilon(1e-14));
}

TEST_CASE("a sweep is a pure function of its inputs") {
    const SlabProblem p = make_problem(8, 32, 0.7);
    const auto quad = gauss_legendre(8);
    std::vector<double> q(32);
    for (int i = 0; i < 32; ++i) q[i] = 1.0 + 0.1 * i;
    const auto a = sweep(p, quad, q);
    const auto b = sweep(p, quad, q);
    CHECK(a.scalar_flux == b.scalar_flux);
    CHECK(a.edge_current == b.edge_current);
    CHECK(a.edge_angular_flux == b.edge_angular_flux);
}

TEST_CASE("sweep rejects a source of the wrong length") {
    const SlabProblem p = make_problem(2, 4, 0.0);
    const auto quad = gauss_legendre(2);
    CHECK_THROWS_AS((void)sweep(p, quad, std::vector<double>(3, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("pure absorber converges on the second sweep for every solver") {
    // With c = 0 the emission never changes, so sweep two equals sweep one
    // and the relative change is exactly zero.
    for (int order : {2, 8}) {
        for (int cells : {4, 128}) {
            const SlabProblem p = make_problem(order, cells, 0.0);
            const auto quad = gauss_legendre(order);
            const auto rich = solve_richardson(p, quad);
            const auto dsa = solve_dsa(p, quad);
            const auto nda = solve_nda(p, quad);
            CHECK(rich.converged);
            CHECK(rich.sweeps == 2);
            CHECK(rich.final_error == 0.0);
            CHECK(dsa.converged);
            CHECK(dsa.sweeps == 2);
            CHECK(nda.converged);
            CHECK(nda.sweeps <= 3);
            // No scattering: the diffusion correction has nothing to fix, so
            // the accelerated flux must equal the plain one bit for bit.
            CHECK(dsa.scalar_flux == rich.scalar_flux);
        }
    }
}

TEST_CASE("golden solve pins") {
    struct Pin {
        int order;
        int cells;
        double ratio;
        int rich_sweeps;
        int dsa_sweeps;
        int nda_sweeps;
        double mid_flux; // richardson scalar flux at cell cells/2
    };
    const Pin pins[] = {
        {8, 128, 0.99, 236, 16, 7, 206.473319993044},
        {8, 128, 0.00, 2, 2, 2, 5.994036083865},
        {2, 16, 0.50, 17, 5, 5, 11.973951921887},
        {32, 1024, 0.90, 74, 13, 6, 54.230505869726},
    };
    for (const Pin& pin : pins) {
        CAPTURE(pin.order);
        CAPTURE(pin.cells);
        CAPTURE(pin.ratio);
        const SlabProblem p = make_problem(pin.order, pin.cells, pin.ratio);
        const auto quad = gauss_legendre(pin.order);
        const auto rich = solve_richardson(p, quad);
        const auto dsa = solve_dsa(p, quad);
        const auto nda = solve_nda(p, quad);
        CHECK(rich.converged);
        CHECK(dsa.converged);
        CHECK(nda.converged);
        CHECK(rich.sweeps == pin.rich_sweeps);
        CHECK(dsa.sweeps == pin.dsa_sweeps);
        CHECK(nda.sweeps == pin.nda_sweeps);
        const double mid = rich.scalar_flux[static_cast<std::size_t>(pin.cells / 2)];
        CHECK(mid == doctest::Approx(pin.mid_flux).epsilon(1e-9));
    }
}

TEST_CASE("richardson sweep count grows with the scattering ratio") {
    const auto quad = gauss_legendre(8);
    const int s01 = solve_richardson(make_problem(8, 128, 0.1), quad).sweeps;
    const int s05 = solve_richardson(make_problem(8, 128, 0.5), quad).sweeps;
    const int s99 = solve_richardson(make_problem(8, 128, 0.99), quad).sweeps;
    CHECK(s01 < s05);
    CHECK(s05 < s99);
}

TEST_CASE("dsa cuts the sweep count deep in the diffusive regime") {
    const auto quad = gauss_legendre(8);
    const SlabProblem p = make_problem(8, 128, 0.99);
    const auto dsa = solve_dsa(p, quad);
    CHECK(dsa.converged);
    CHECK(dsa.sweeps <= 30);
    const auto rich = solve_richardson(p, quad);
    CHECK(dsa.sweeps < rich.sweeps);
}

TEST_CASE("dsa agrees with richardson at moderate scattering") {
    const SlabProblem p = make_problem(8, 128, 0.9);
    const auto quad = gauss_legendre(8);
    const auto rich = solve_richardson(p, quad);
    const auto dsa = solve_dsa(p, quad);
    REQUIRE(rich.converged);
    REQUIRE(dsa.converged);
    CHECK(rel_linf(rich.scalar_flux, dsa.scalar_flux) <= 1e-3);
}

TEST_CASE("nda agrees with richardson at moderate scattering") {
    const SlabProblem p = make_problem(8, 64, 0.5);
    const auto quad = gauss_legendre(8);
    const auto rich = solve_richardson(p, quad);
    const auto nda = solve_nda(p, quad);
    REQUIRE(rich.converged);
    REQUIRE(nda.converged);
    CHECK(rel_linf(rich.scalar_flux, nda.scalar_flux) <= 1e-3);
}

TEST_CASE("converged flux is positive for a positive source") {
    const SlabProblem p = make_problem(8, 128, 0.9);
    const auto quad = gauss_legendre(8);
    for (const auto& outcome :
         {solve_richardson(p, quad), solve_dsa(p, quad), solve_nda(p, quad)}) {
        REQUIRE(outcome.converged);
        REQUIRE(outcome.scalar_flux.size() == 128);
        for (double v : outcome.scalar_flux) CHECK(v > 0.0);
    }
}

TEST_CASE("solves are deterministic") {
    const SlabProblem p = make_problem(8, 64, 0.8);
    const auto quad = gauss_legendre(8);
    const auto a = solve_dsa(p, quad);
    const auto b = solve_dsa(p, quad);
    CHECK(a.sweeps == b.sweeps);
    CHECK(a.final_error == b.final_error);
    CHECK(a.scalar_flux == b.scalar_flux);
    const auto na = solve_nda(p, quad);
    const auto nb = solve_nda(p, quad);
    CHECK(na.sweeps == nb.sweeps);
    CHECK(na.scalar_flux == nb.scalar_flux);
}

TEST_CASE("hitting the sweep budget reports non-convergence") {
    SlabProblem p = make_problem(8, 128, 0.99);
    p.max_sweeps = 1;
    const auto quad = gauss_legendre(8);
    const auto outcome = solve_richardson(p, quad);
    CHECK_FALSE(outcome.converged);
    CHECK(outcome.sweeps == 1);
    CHECK(outcome.final_error >= p.tolerance);
}

TEST_CASE("converged outcomes satisfy the stopping contract") {
    const SlabProblem p = make_problem(4, 32, 0.6);
    const auto quad = gauss_legendre(4);
    for (const auto& outcome :
         {solve_richardson(p, quad), solve_dsa(p, quad), solve_nda(p, quad)}) {
        CHECK(outcome.converged);
        CHECK(outcome.sweeps >= 1);
        CHECK(outcome.sweeps <= p.max_sweeps);
        CHECK(outcome.final_error < p.tolerance);
        CHECK(outcome.runtime_seconds >= 0.0);
    }
}

TEST_CASE("state capture fills the per-solver fields") {
    const SlabProblem p = make_problem(4, 16, 0.5);
    const auto quad = gauss_legendre(4);

    TransportState rich_state;
    const auto rich = solve_richardson(p, quad, &rich_state);
    REQUIRE(rich.converged);
    CHECK(rich_state.scalar_flux == rich.scalar_flux);
    REQUIRE(rich_state.edge_angular_flux.size() == 17);
    for (const auto& edge : rich_state.edge_angular_flux)
        CHECK(edge.size() == 4);
    CHECK(rich_state.edge_current.size() == 17);
    CHECK(rich_state.correction.empty());
    CHECK(rich_state.d_hat.empty());
    // Vacuum boundaries: zero inflow on both faces. Angles ascend, so the
    // upper half enters at the left edge, the lower half at the right edge.
    CHECK(rich_state.edge_angular_flux[0][2] == 0.0);
    CHECK(rich_state.edge_angular_flux[0][3] == 0.0);
    CHECK(rich_state.edge_angular_flux[16][0] == 0.0);
    CHECK(rich_state.edge_angular_flux[16][1] == 0.0);

    TransportState dsa_state;
    const auto dsa = solve_dsa(p, quad, &dsa_state);
    REQUIRE(dsa.converged);
    CHECK(dsa_state.correction.size() == 16);
    CHECK(dsa_state.d_hat.empty());

    TransportState nda_state;
    const auto nda = solve_nda(p, quad, &nda_state);
    REQUIRE(nda.converged);
    CHECK(nda_state.d_hat.size() == 17);
    CHECK(nda_state.correction.empty());
    CHECK(nda_state.scalar_flux == nda.scalar_flux);
}

TEST_CASE("particle balance closes for converged solves") {
    const auto quad8 = gauss_legendre(8);

    // Pure scatterer: no absorption, so production Q*width = 60 must leak.
    SlabProblem scatterer = make_problem(8, 128, 1.0);
    TransportState state;
    const auto dsa = solve_dsa(scatterer, quad8, &state);
    REQUIRE(dsa.converged);
    CHECK(particle_balance(scatterer, state) <= 1e-3);
    const double leakage = state.edge_current.back() - state.edge_current.front();
    CHECK(leakage == doctest::Approx(60.0).epsilon(1e-3));

    // Pure absorber on a fine mesh.
    const auto quad32 = gauss_legendre(32);
    SlabProblem absorber = make_problem(32, 1024, 0.0);
    TransportState abs_state;
    REQUIRE(solve_richardson(absorber, quad32, &abs_state).converged);
    CHECK(particle_balance(absorber, abs_state) <= 1e-3);

    // Diffusive case: the residual reflects the finite tolerance, not zero.
    SlabProblem diffusive = make_problem(8, 128, 0.99);
    TransportState dif_state;
    REQUIRE(solve_richardson(diffusive, quad8, &dif_state).converged);
    const double residual = particle_balance(diffusive, dif_state);
    CHECK(residual <= 1e-3);
}

} // TEST_SUITE("transport")
