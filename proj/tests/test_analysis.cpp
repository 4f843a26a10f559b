#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lambdacav/analysis.hpp"
#include "lambdacav/dynamics.hpp"

#include "test_helpers.hpp"

using namespace lambdacav;

namespace {

ModelParams reference()
{
    return ModelParams{};
}

} // namespace

TEST_CASE("SA basis is unitary; symmetric case maps |0><0| to an equal mixture")
{
    const ModelParams p = reference(); // g0 = g1
    const SABasis basis = SABasis::from_params(p);
    CHECK((basis.unitary * basis.unitary.adjoint() - Matrix::Identity(3, 3)).norm() <= 1e-12);

    const DensityMatrix mapped = sa_transform(p, DensityMatrix::ket(3, 0));
    CHECK(mapped.population(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mapped.population(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mapped(0, 1).real() == doctest::Approx(-0.5).epsilon(1e-12));

    const DensityMatrix excited = sa_transform(p, DensityMatrix::ket(3, 2));
    CHECK(excited.population(2) == doctest::Approx(1.0).epsilon(1e-12));

    ModelParams dead = p;
    dead.g0 = dead.g1 = 0.0;
    CHECK_THROWS_AS(SABasis::from_params(dead), std::invalid_argument);
}

TEST_CASE("degenerate flat-response generator decouples the dark sector entirely")
{
    ModelParams p = reference();
    p.omega10 = 0.0;
    const Superoperator transformed = sa_transform(p, build_approx_liouvillian(p));
    const Matrix l = transformed.dense();
    // indices in the (S, A, 2) ordering; pairs containing A vs the rest
    auto idx = [](int i, int j) { return i + 3 * j; };
    const std::vector<int> with_a = {idx(0, 1), idx(1, 0), idx(1, 1), idx(1, 2), idx(2, 1)};
    const std::vector<int> without_a = {idx(0, 0), idx(0, 2), idx(2, 0), idx(2, 2)};
    const double scale = l.norm();
    for (int r : with_a)
        for (int c : without_a) {
            CHECK(std::abs(l(r, c)) <= 1e-12 * scale);
            CHECK(std::abs(l(c, r)) <= 1e-12 * scale);
        }
    // and the dark population itself is stationary
    const Vector dark = vectorize(Matrix(DensityMatrix::ket(3, 1).matrix()));
    CHECK((l * dark).norm() <= 1e-12 * scale);
}

TEST_CASE("detuning sweep rows are normalized and deterministic across thread counts")
{
    const std::vector<double> grid = grid_points(-100.0, 100.0, 21);
    const SweepResult serial = detuning_sweep(reference(), grid, Equation::reduced, 1);
    const SweepResult parallel = detuning_sweep(reference(), grid, Equation::reduced, 4);
    REQUIRE(serial.rows.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const SweepRow& row = serial.rows[i];
        CHECK(row.delta == grid[i]);
        CHECK(row.p00 + row.p11 + row.p22 == doctest::Approx(1.0).epsilon(1e-9));
        for (double pop : {row.p00, row.p11, row.p22}) {
            CHECK(pop >= -1e-12);
            CHECK(pop <= 1.0 + 1e-12);
        }
        CHECK(row.d20 == parallel.rows[i].d20);
        CHECK(row.re_coh == parallel.rows[i].re_coh);
    }
}

TEST_CASE("sweep without interference carries no ground coherence")
{
    ModelParams p = reference();
    p.interference = 0.0;
    const SweepResult sweep = detuning_sweep(p, grid_points(-400.0, 400.0, 17));
    for (const SweepRow& row : sweep.rows) {
        CHECK(std::abs(row.re_coh) <= 1e-10);
        CHECK(std::abs(row.im_coh) <= 1e-10);
    }
}

TEST_CASE("sweep surfaces kernel degeneracy with the offending detuning")
{
    ModelParams p = reference();
    p.omega10 = 0.0;
    bool threw = false;
    try {
        detuning_sweep(p, grid_points(-1.0, 1.0, 3), Equation::approx);
    } catch (const SolverError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("delta=") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("inversion_boundaries reports when no sign change exists")
{
    // the steady state of this model is the detuning-independent thermal
    // point, so the population differences never cross zero
    bool threw = false;
    try {
        inversion_boundaries(reference(), PopulationDifference::d20, -400.0, 400.0);
    } catch (const SolverError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("no sign change") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("absorption spectrum matches the correlation-transform composition")
{
    const ModelParams p = reference();
    const std::vector<double> grid = {-130.0, -40.0, 15.0, 100.0};
    const SpectrumResult spec = absorption_spectrum(p, ProbeWeights{}, grid);

    const Superoperator gen = build_reduced_liouvillian(p);
    const DensityMatrix rho = steady_state_direct(gen);
    const Matrix p_plus = transition_op(2, 0) + transition_op(2, 1);
    const Matrix p_minus = p_plus.adjoint();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cd emit = correlation_transform(gen, rho, p_minus, p_plus, grid[i],
                                              SourceSide::left);
        const cd absorb = correlation_transform(gen, rho, p_minus, p_plus, grid[i],
                                                SourceSide::right);
        CHECK(spec.rows[i].a_on == doctest::Approx((emit - absorb).real()).epsilon(1e-10));
        CHECK(std::isfinite(spec.rows[i].a_on));
        CHECK(std::isfinite(spec.rows[i].a_off));
    }
}

TEST_CASE("resonant spectrum is symmetric and never shows gain without interference")
{
    const SpectrumResult spec =
        absorption_spectrum(reference(), ProbeWeights{}, grid_points(-300.0, 300.0, 601));
    const std::size_t n = spec.rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(spec.rows[i].a_on - spec.rows[n - 1 - i].a_on) <= 1e-6);
        CHECK(spec.rows[i].a_off >= -1e-10);
    }
}

TEST_CASE("sideband widths: flat-response doublet matches the rate formulas")
{
    const ModelParams p = reference();
    const SpectrumResult spec = absorption_spectrum(p, ProbeWeights{},
                                                    grid_points(-300.0, 300.0, 1201),
                                                    Equation::approx);
    const SidebandWidths fits =
        sideband_linewidths(spec, SpectrumColumn::without_interference);
    const double gamma0 = std::norm(p.g0) / p.kappa;
    const double gamma1 = std::norm(p.g1) / p.kappa;
    const double expected_high = gamma0 * (2 * p.nbar + 1) + gamma1 * (p.nbar + 1);
    const double expected_low = gamma0 * (p.nbar + 1) + gamma1 * (2 * p.nbar + 1);
    REQUIRE(fits.high.found);
    REQUIRE(fits.low.found);
    CHECK(fits.high.hwhm == doctest::Approx(expected_high).epsilon(0.05));
    CHECK(fits.low.hwhm == doctest::Approx(expected_low).epsilon(0.05));
    CHECK(fits.high.center == doctest::Approx(0.5 * p.omega10).epsilon(0.05));
    CHECK(fits.low.center == doctest::Approx(-0.5 * p.omega10).epsilon(0.05));
}

TEST_CASE("sideband widths: single active channel gives one line at the higher position")
{
    // gamma1 = 0: probe only the active transition and evaluate the
    // correlation against the stationary state of its sector
    ModelParams p = reference();
    p.g1 = 0.0;
    p.interference = 0.0;
    const Superoperator gen = build_approx_liouvillian(p);
    const DensityMatrix rho = asymptotic_state(gen, DensityMatrix::ket(3, 0));
    const Matrix p_plus = transition_op(2, 0);
    const Matrix p_minus = p_plus.adjoint();
    SpectrumResult spec;
    for (double omega : grid_points(-300.0, 300.0, 1201)) {
        const cd emit = correlation_transform(gen, rho, p_minus, p_plus, omega,
                                              SourceSide::left);
        const cd absorb = correlation_transform(gen, rho, p_minus, p_plus, omega,
                                                SourceSide::right);
        const double a = (emit - absorb).real();
        spec.rows.push_back({omega, a, a});
    }
    const SidebandWidths fits = sideband_linewidths(spec);
    const double gamma0 = std::norm(p.g0) / p.kappa;
    REQUIRE(fits.high.found);
    CHECK(!fits.low.found);
    CHECK(fits.high.hwhm == doctest::Approx(gamma0 * (2 * p.nbar + 1)).epsilon(0.02));
    CHECK(fits.high.center == doctest::Approx(0.5 * p.omega10).epsilon(0.02));
}

TEST_CASE("sideband widths: error paths")
{
    SpectrumResult flat;
    for (double omega : grid_points(-10.0, 10.0, 64))
        flat.rows.push_back({omega, 0.0, 0.0});
    CHECK_THROWS_AS(sideband_linewidths(flat), SolverError);

    // two Lorentzians closer than the resolvability threshold
    SpectrumResult blended;
    for (double omega : grid_points(-40.0, 40.0, 801)) {
        const double a = 16.0 / (16.0 + (omega - 5.0) * (omega - 5.0)) +
                         16.0 / (16.0 + (omega + 5.0) * (omega + 5.0));
        blended.rows.push_back({omega, a, a});
    }
    CHECK_THROWS_AS(sideband_linewidths(blended), SolverError);
}
