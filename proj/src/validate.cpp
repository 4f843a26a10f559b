#include "lambdacav/validate.hpp"

#include "lambdacav/analysis.hpp"
#include "lambdacav/cavity.hpp"
#include "lambdacav/dynamics.hpp"
#include "lambdacav/model.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace lambdacav {

namespace {

ModelParams reference_params()
{
    return ModelParams{}; // g0 = g1 = 10, kappa = 100, omega10 = 200, nbar = 20
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

DensityMatrix dark_state(const ModelParams& params)
{
    const SABasis basis = SABasis::from_params(params);
    return DensityMatrix::pure(basis.unitary.row(1).conjugate().transpose());
}

struct SAFractions {
    double p22, pss, paa;
};

SAFractions sa_fractions(const ModelParams& params, const DensityMatrix& rho)
{
    const DensityMatrix t = sa_transform(params, rho);
    return {t.population(2), t.population(0), t.population(1)};
}

CheckResult check_degenerate_trapping()
{
    CheckResult r{1, "degenerate doublet trapping fractions", false, ""};
    ModelParams p = reference_params();
    p.omega10 = 0.0;
    const Superoperator gen = build_approx_liouvillian(p);
    const double n = p.nbar;

    const SAFractions from2 = sa_fractions(p, asymptotic_state(gen, DensityMatrix::ket(3, 2)));
    const SAFractions from0 = sa_fractions(p, asymptotic_state(gen, DensityMatrix::ket(3, 0)));

    const double tol = 1e-8;
    const bool ok2 = std::abs(from2.p22 - n / (2 * n + 1)) < tol &&
                     std::abs(from2.pss - (n + 1) / (2 * n + 1)) < tol &&
                     std::abs(from2.paa) < tol;
    const bool ok0 = std::abs(from0.p22 - n / (4 * n + 2)) < tol &&
                     std::abs(from0.pss - (n + 1) / (4 * n + 2)) < tol &&
                     std::abs(from0.paa - 0.5) < tol;
    r.pass = ok2 && ok0;
    r.details = "from |2>: p22=" + fmt(from2.p22) + " pSS=" + fmt(from2.pss) +
                " pAA=" + fmt(from2.paa) + "; from |0>: p22=" + fmt(from0.p22) +
                " pSS=" + fmt(from0.pss) + " pAA=" + fmt(from0.paa);
    return r;
}

CheckResult check_trapped_state_persists()
{
    CheckResult r{2, "complete trapped state persists", false, ""};
    ModelParams p = reference_params();
    p.omega10 = 0.0;
    const Superoperator gen = build_approx_liouvillian(p);
    const DensityMatrix rho_a = dark_state(p);
    double worst = 0.0;
    for (double t : {1.0, 10.0, 100.0, 1000.0})
        worst = std::max(worst, trace_distance(evolve(gen, rho_a, t), rho_a));
    r.pass = worst < 1e-8;
    r.details = "max trace distance over t <= 1e3 decay times: " + fmt(worst);
    return r;
}

struct BoundaryOutcome {
    bool found = false;
    bool pass = false;
    std::string text;
};

BoundaryOutcome boundaries_for(Equation eq)
{
    const ModelParams tpl = reference_params();
    const double expected20[2] = {-139.2, 82.3};
    const double expected21[2] = {-82.3, 139.2};
    BoundaryOutcome out;
    try {
        const std::vector<double> r20 =
            inversion_boundaries(tpl, PopulationDifference::d20, -400.0, 400.0, eq);
        const std::vector<double> r21 =
            inversion_boundaries(tpl, PopulationDifference::d21, -400.0, 400.0, eq);
        out.found = true;
        auto hit = [](const std::vector<double>& roots, double target) {
            for (double root : roots)
                if (std::abs(root - target) <= 1.0)
                    return true;
            return false;
        };
        out.pass = hit(r20, expected20[0]) && hit(r20, expected20[1]) &&
                   hit(r21, expected21[0]) && hit(r21, expected21[1]);
        std::ostringstream os;
        os << "d20 roots:";
        for (double v : r20)
            os << " " << fmt(v);
        os << "; d21 roots:";
        for (double v : r21)
            os << " " << fmt(v);
        out.text = os.str();
    } catch (const SolverError& e) {
        out.text = e.what();
    }
    return out;
}

CheckResult check_inversion_boundaries()
{
    CheckResult r{3, "steady-state inversion boundaries", false, ""};
    const BoundaryOutcome reduced = boundaries_for(Equation::reduced);
    const BoundaryOutcome approx = boundaries_for(Equation::approx);
    r.pass = reduced.pass || approx.pass;
    r.details = "expected d20 zeros near {-139.2, 82.3} and d21 zeros near {-82.3, 139.2} "
                "(+-1.0); reduced generator: " +
                reduced.text + "; flat-response generator: " + approx.text;
    if (!r.pass)
        r.details += "; neither generator reproduces the expected boundaries: the steady "
                     "state stays at the detuning-independent thermal point (see README, "
                     "thermal-equilibrium note)";
    return r;
}

CheckResult check_coherence_structure()
{
    CheckResult r{4, "ground coherence even in detuning, maximal on resonance", false, ""};
    const SweepResult sweep =
        detuning_sweep(reference_params(), grid_points(-400.0, 400.0, 401), Equation::reduced);
    double worst_asym = 0.0;
    const std::size_t n = sweep.rows.size();
    for (std::size_t i = 0; i < n; ++i)
        worst_asym =
            std::max(worst_asym, std::abs(sweep.rows[i].re_coh - sweep.rows[n - 1 - i].re_coh));
    double max_coh = -1e300;
    for (const SweepRow& row : sweep.rows)
        max_coh = std::max(max_coh, row.re_coh);
    const double at_zero = sweep.rows[n / 2].re_coh;
    const bool even = worst_asym <= 1e-9;
    const bool maximal = at_zero >= max_coh - 1e-12;
    r.pass = even && maximal;
    r.details = "max |Re rho01(d) - Re rho01(-d)| = " + fmt(worst_asym) +
                "; Re rho01(0) = " + fmt(at_zero) + ", grid max = " + fmt(max_coh);
    return r;
}

CheckResult check_resonant_spectrum(int threads)
{
    CheckResult r{5, "resonant spectrum symmetry and interference broadening", false, ""};
    const ModelParams p = reference_params();
    const SpectrumResult spec =
        absorption_spectrum(p, ProbeWeights{}, grid_points(-300.0, 300.0, 1201),
                            Equation::reduced, threads);
    double worst_asym = 0.0;
    double min_off = 1e300;
    const std::size_t n = spec.rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        worst_asym = std::max(worst_asym, std::abs(spec.rows[i].a_on - spec.rows[n - 1 - i].a_on));
        min_off = std::min(min_off, spec.rows[i].a_off);
    }
    const SidebandWidths on = sideband_linewidths(spec, SpectrumColumn::with_interference);
    const SidebandWidths off = sideband_linewidths(spec, SpectrumColumn::without_interference);
    const bool symmetric = worst_asym <= 1e-6;
    const bool wider = on.high.found && off.high.found && on.low.found && off.low.found &&
                       on.high.hwhm > off.high.hwhm && on.low.hwhm > off.low.hwhm;
    r.pass = symmetric && wider && min_off >= -1e-10;
    r.details = "max |A(w) - A(-w)| = " + fmt(worst_asym) + "; widths on/off high " +
                fmt(on.high.hwhm) + "/" + fmt(off.high.hwhm) + ", low " + fmt(on.low.hwhm) +
                "/" + fmt(off.low.hwhm) + "; min A_off = " + fmt(min_off);
    return r;
}

CheckResult check_gain_windows(int threads)
{
    CheckResult r{6, "probe gain windows by detuning", false, ""};
    const std::vector<double> grid = grid_points(-300.0, 300.0, 1201);
    std::ostringstream os;
    bool gain_low_50 = false, gain_low_100 = false, gain_high_200 = false;
    bool low_clean_200 = false;
    double global_min_off = 1e300;
    for (double delta : {50.0, 100.0, 200.0}) {
        ModelParams p = reference_params();
        p.delta = delta;
        const SpectrumResult spec =
            absorption_spectrum(p, ProbeWeights{}, grid, Equation::reduced, threads);
        double min_low = 1e300, min_high = 1e300;
        for (const SpectrumRow& row : spec.rows) {
            global_min_off = std::min(global_min_off, row.a_off);
            if (row.omega < 0.0)
                min_low = std::min(min_low, row.a_on);
            if (row.omega > 0.0)
                min_high = std::min(min_high, row.a_on);
        }
        os << " delta=" << fmt(delta) << ": min A_on low/high = " << fmt(min_low) << "/"
           << fmt(min_high) << ";";
        if (delta == 50.0)
            gain_low_50 = min_low < 0.0;
        if (delta == 100.0)
            gain_low_100 = min_low < 0.0;
        if (delta == 200.0) {
            gain_high_200 = min_high < 0.0;
            low_clean_200 = min_low >= -1e-10;
        }
    }
    r.pass = gain_low_50 && gain_low_100 && gain_high_200 && low_clean_200 &&
             global_min_off >= -1e-10;
    r.details = "expected A_on < 0 on the lower sideband for delta in {50, 100} and on the "
                "higher sideband for delta = 200, with A_off >= -1e-10;" +
                os.str() + " min A_off = " + fmt(global_min_off);
    if (!r.pass && global_min_off >= -1e-10 && !gain_low_50)
        r.details += "; no gain anywhere: the stationary state is thermal (non-inverted, "
                     "zero coherence), so linear response stays absorptive";
    return r;
}

CheckResult check_linewidths(int threads)
{
    CheckResult r{7, "no-interference sideband linewidths", false, ""};
    const ModelParams p = reference_params();
    const double gamma0 = std::norm(p.g0) / p.kappa;
    const double gamma1 = std::norm(p.g1) / p.kappa;
    const double expected_high = gamma0 * (2 * p.nbar + 1) + gamma1 * (p.nbar + 1);
    const double expected_low = gamma0 * (p.nbar + 1) + gamma1 * (2 * p.nbar + 1);
    const SpectrumResult spec =
        absorption_spectrum(p, ProbeWeights{}, grid_points(-300.0, 300.0, 1201),
                            Equation::approx, threads);
    const SidebandWidths fits = sideband_linewidths(spec, SpectrumColumn::without_interference);
    const bool ok_high =
        fits.high.found && std::abs(fits.high.hwhm - expected_high) <= 0.05 * expected_high;
    const bool ok_low =
        fits.low.found && std::abs(fits.low.hwhm - expected_low) <= 0.05 * expected_low;
    r.pass = ok_high && ok_low;
    r.details = "flat-response rates gamma0 = gamma1 = " + fmt(gamma0) + ": fitted HWHM high " +
                fmt(fits.high.hwhm) + " (expected " + fmt(expected_high) + "), low " +
                fmt(fits.low.hwhm) + " (expected " + fmt(expected_low) + "), tolerance 5%";
    return r;
}

CheckResult check_oracle_agreement()
{
    CheckResult r{8, "composite-model oracle agreement", false, ""};
    const double gamma = 0.01;
    std::vector<double> ratios{10.0, 30.0, 100.0};
    std::vector<double> distances;
    std::ostringstream os;
    for (double ratio : ratios) {
        ModelParams p;
        p.omega10 = 2.0;
        p.delta = 0.0;
        p.nbar = 0.5;
        p.interference = 1.0;
        const double g = gamma * ratio;
        p.g0 = p.g1 = g;
        p.kappa = ratio * g;
        FockConfig fock;
        fock.n_max = 12;
        const DensityMatrix reduced_from_full =
            reduce_to_atom(*steady_state(build_full_liouvillian(p, fock)).state);
        const DensityMatrix direct = steady_state_direct(build_reduced_liouvillian(p));
        distances.push_back(trace_distance(reduced_from_full, direct));
        os << " kappa/g=" << fmt(ratio) << ": D=" << distances.back() << ";";
    }
    const bool close = distances[2] <= 1e-3;
    const bool monotone = distances[0] > distances[1] && distances[1] > distances[2];
    r.pass = close && monotone;
    r.details = "trace distance full-vs-reduced (n_max=12, N=0.5):" + os.str() +
                " require D(100) <= 1e-3 and D(10) > D(30) > D(100)";
    if (close && !monotone)
        r.details += "; all distances sit at the numerical floor (the two models agree "
                     "exactly here), so the ordering reflects rounding noise only";
    return r;
}

CheckResult check_generator_sanity()
{
    CheckResult r{9, "generator sanity suite", false, ""};
    std::mt19937 rng(20260808);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto random_hermitian = [&] {
        Matrix m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m(i, j) = cd(uni(rng), uni(rng));
        return hermitize(m);
    };

    std::vector<ModelParams> cases;
    cases.push_back(reference_params());
    {
        ModelParams p = reference_params();
        p.omega10 = 0.0;
        cases.push_back(p);
    }
    {
        ModelParams p = reference_params();
        p.g1 = cd(3.0, 4.0);
        p.delta = -77.0;
        p.interference = 0.7;
        cases.push_back(p);
    }

    double worst_trace = 0.0, worst_herm = 0.0;
    for (const ModelParams& p : cases) {
        for (const Superoperator& gen :
             {build_reduced_liouvillian(p), build_approx_liouvillian(p)}) {
            for (int k = 0; k < 4; ++k) {
                const Matrix x = random_hermitian();
                const Matrix lx = gen.apply(x);
                worst_trace = std::max(worst_trace, std::abs(lx.trace()) / x.norm());
                worst_herm =
                    std::max(worst_herm, (gen.apply(x.adjoint()) - lx.adjoint()).norm() /
                                             std::max(lx.norm(), 1e-300));
            }
        }
    }
    const bool preserves = worst_trace <= 1e-12 && worst_herm <= 1e-12;

    // positivity along evolution for the completely positive generators
    // (the shift-carrying generator with cross terms is Redfield-like and
    // is allowed transient dips; its stationary point is still positive)
    double min_eig = 0.0;
    {
        ModelParams p0 = reference_params();
        p0.interference = 0.0;
        for (const Superoperator& gen :
             {build_approx_liouvillian(reference_params()), build_reduced_liouvillian(p0)}) {
            const DensityMatrix rho0 = DensityMatrix::ket(3, 2);
            for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
                const Matrix rho = evolve(gen, rho0, t).matrix();
                Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho));
                min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
            }
        }
    }
    const bool positive = min_eig >= -1e-8;

    // swap symmetry of the steady state under delta -> -delta, 0 <-> 1
    double worst_swap = 0.0;
    for (double delta : {30.0, 170.0}) {
        ModelParams plus = reference_params();
        plus.delta = delta;
        ModelParams minus = reference_params();
        minus.delta = -delta;
        const DensityMatrix a = steady_state_direct(build_reduced_liouvillian(plus));
        const DensityMatrix b = steady_state_direct(build_reduced_liouvillian(minus));
        worst_swap = std::max(worst_swap,
                              std::abs((a.population(2) - a.population(0)) -
                                       (b.population(2) - b.population(1))));
        worst_swap = std::max(worst_swap, std::abs(a(0, 1).real() - b(0, 1).real()));
    }
    const bool swap_ok = worst_swap <= 1e-9;

    // dissipative spectrum: no eigenvalue in the open right half-plane
    double worst_re = -1e300;
    for (const ModelParams& p : cases) {
        for (const Superoperator& gen :
             {build_reduced_liouvillian(p), build_approx_liouvillian(p)}) {
            Eigen::ComplexEigenSolver<Matrix> es(gen.dense(), false);
            const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
            worst_re = std::max(worst_re, es.eigenvalues().real().maxCoeff() / scale);
        }
    }
    const bool left_half_plane = worst_re <= 1e-10;

    // interference = 0 removes every cross block exactly
    bool decoupled = true;
    {
        ModelParams p = reference_params();
        p.interference = 0.0;
        const Matrix l = build_reduced_liouvillian(p).dense();
        auto idx = [](int i, int j) { return i + 3 * j; };
        decoupled = decoupled && l(idx(0, 2), idx(1, 2)) == cd(0, 0) &&
                    l(idx(1, 2), idx(0, 2)) == cd(0, 0) && l(idx(2, 0), idx(2, 1)) == cd(0, 0) &&
                    l(idx(2, 1), idx(2, 0)) == cd(0, 0);
        for (int c = 0; c < 9 && decoupled; ++c) {
            if (c != idx(0, 1))
                decoupled = l(idx(0, 1), c) == cd(0, 0);
            if (decoupled && c != idx(1, 0))
                decoupled = l(idx(1, 0), c) == cd(0, 0);
        }
    }

    r.pass = preserves && positive && swap_ok && decoupled && left_half_plane;
    r.details = "trace residual " + fmt(worst_trace) + ", hermiticity residual " +
                fmt(worst_herm) + ", min eigenvalue along evolution " + fmt(min_eig) +
                ", swap-symmetry residual " + fmt(worst_swap) +
                ", max spectral real part (relative) " + fmt(worst_re) +
                ", cross blocks at p=0 " + (decoupled ? "exactly zero" : "NONZERO");
    return r;
}

CheckResult check_far_detuned(int threads)
{
    CheckResult r{10, "far-detuned interference shutoff", false, ""};
    ModelParams p = reference_params();
    p.delta = 10.0 * std::max(p.omega10, 2.0 * p.kappa);
    const SpectrumResult spec =
        absorption_spectrum(p, ProbeWeights{}, grid_points(-300.0, 300.0, 1201),
                            Equation::reduced, threads);
    double max_diff = 0.0;
    for (const SpectrumRow& row : spec.rows)
        max_diff = std::max(max_diff, std::abs(row.a_on - row.a_off));
    // the lines are narrow; refine around both sidebands for the true peak
    double peak = 0.0;
    for (double center : {-0.5 * p.omega10, 0.5 * p.omega10}) {
        const SpectrumResult fine =
            absorption_spectrum(p, ProbeWeights{}, grid_points(center - 8.0, center + 8.0, 801),
                                Equation::reduced, threads);
        for (const SpectrumRow& row : fine.rows)
            peak = std::max(peak, std::abs(row.a_on));
    }
    const double ratio = max_diff / peak;
    r.pass = ratio <= 0.01;
    r.details = "delta = " + fmt(p.delta) + ": max |A_on - A_off| = " + fmt(max_diff) +
                ", peak = " + fmt(peak) + ", ratio = " + fmt(100.0 * ratio) + "% (limit 1%)";
    return r;
}

} // namespace

std::vector<CheckResult> run_acceptance_suite(int threads)
{
    std::vector<std::function<CheckResult()>> checks = {
        [] { return check_degenerate_trapping(); },
        [] { return check_trapped_state_persists(); },
        [] { return check_inversion_boundaries(); },
        [] { return check_coherence_structure(); },
        [threads] { return check_resonant_spectrum(threads); },
        [threads] { return check_gain_windows(threads); },
        [threads] { return check_linewidths(threads); },
        [] { return check_oracle_agreement(); },
        [] { return check_generator_sanity(); },
        [threads] { return check_far_detuned(threads); },
    };
    std::vector<CheckResult> results;
    int id = 1;
    for (auto& check : checks) {
        try {
            results.push_back(check());
        } catch (const std::exception& e) {
            results.push_back({id, "criterion " + std::to_string(id), false,
                               std::string("aborted: ") + e.what()});
        }
        results.back().id = id++;
    }
    return results;
}

} // namespace lambdacav
