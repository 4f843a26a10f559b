#include "lambdacav/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace lambdacav {

namespace {

int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// Index-ordered parallel loop; the first exception wins and is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& body)
{
    threads = std::min(resolve_threads(threads), count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::mutex mtx;
    std::exception_ptr first_error;
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mtx);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

SweepRow observe(double delta, const DensityMatrix& rho)
{
    SweepRow row;
    row.delta = delta;
    row.p22 = rho.population(2);
    row.p11 = rho.population(1);
    row.p00 = rho.population(0);
    row.d20 = row.p22 - row.p00;
    row.d21 = row.p22 - row.p11;
    row.re_coh = rho(0, 1).real();
    row.im_coh = rho(0, 1).imag();
    return row;
}

double steady_difference(const ModelParams& tpl, double delta, PopulationDifference which,
                         Equation eq)
{
    ModelParams p = tpl;
    p.delta = delta;
    const DensityMatrix rho = steady_state_direct(build_liouvillian(p, eq));
    return which == PopulationDifference::d20 ? rho.population(2) - rho.population(0)
                                              : rho.population(2) - rho.population(1);
}

// ---- Lorentzian fitting -------------------------------------------------

struct PeakSeed {
    int index;
    double center;
    double width; // half-max half-width estimate
    double height;
};

// Half-max crossing walk from a local maximum.
double estimate_hwhm(const std::vector<double>& x, const std::vector<double>& y, int peak)
{
    const double half = 0.5 * y[peak];
    const double step = x[1] - x[0];
    int lo = peak;
    while (lo > 0 && y[lo] > half)
        --lo;
    int hi = peak;
    const int n = static_cast<int>(y.size());
    while (hi < n - 1 && y[hi] > half)
        ++hi;
    const double left = x[peak] - x[lo];
    const double right = x[hi] - x[peak];
    // the narrower flank is less contaminated by a neighbouring line
    return std::max(std::min(left, right), 2.0 * step);
}

// Sum of Lorentzians plus a shared constant offset; parameters packed as
// (h0, c0, w0, h1, c1, w1, ..., b).
class LorentzianModel {
public:
    explicit LorentzianModel(int peaks) : peaks_(peaks) {}

    int size() const { return 3 * peaks_ + 1; }

    double eval(const Eigen::VectorXd& p, double x) const
    {
        double v = p(size() - 1);
        for (int k = 0; k < peaks_; ++k) {
            const double u = x - p(3 * k + 1);
            const double w2 = p(3 * k + 2) * p(3 * k + 2);
            v += p(3 * k) * w2 / (w2 + u * u);
        }
        return v;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& p, double x) const
    {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(size());
        for (int k = 0; k < peaks_; ++k) {
            const double h = p(3 * k), w = p(3 * k + 2);
            const double u = x - p(3 * k + 1);
            const double d = w * w + u * u;
            g(3 * k) = w * w / d;
            g(3 * k + 1) = 2.0 * h * w * w * u / (d * d);
            g(3 * k + 2) = 2.0 * h * w * u * u / (d * d);
        }
        g(size() - 1) = 1.0;
        return g;
    }

private:
    int peaks_;
};

Eigen::VectorXd levenberg_marquardt(const LorentzianModel& model, const std::vector<double>& x,
                                    const std::vector<double>& y, Eigen::VectorXd p)
{
    const int n = model.size();
    auto chi2 = [&](const Eigen::VectorXd& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = model.eval(q, x[i]) - y[i];
            s += r * r;
        }
        return s;
    };
    double lambda = 1e-3;
    double best = chi2(p);
    bool converged = false;
    for (int iter = 0; iter < 400 && !converged; ++iter) {
        Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd jtr = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const Eigen::VectorXd g = model.gradient(p, x[i]);
            const double r = model.eval(p, x[i]) - y[i];
            jtj.noalias() += g * g.transpose();
            jtr.noalias() += g * r;
        }
        Eigen::MatrixXd damped = jtj;
        damped.diagonal() *= 1.0 + lambda;
        const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
        const Eigen::VectorXd trial = p + step;
        const double c = chi2(trial);
        if (c <= best) {
            converged = best - c <= 1e-12 * best + 1e-300;
            p = trial;
            best = c;
            lambda = std::max(lambda * 0.3, 1e-12);
        } else {
            lambda *= 10.0;
            if (lambda > 1e14)
                throw SolverError("sideband_linewidths: fit failed to converge");
        }
    }
    if (!converged)
        throw SolverError("sideband_linewidths: fit failed to converge");
    return p;
}

} // namespace

Superoperator build_liouvillian(const ModelParams& params, Equation eq)
{
    return eq == Equation::reduced ? build_reduced_liouvillian(params)
                                   : build_approx_liouvillian(params);
}

SABasis SABasis::from_params(const ModelParams& params)
{
    params.validate();
    const double gamma0 = std::norm(params.g0) / params.kappa;
    const double gamma1 = std::norm(params.g1) / params.kappa;
    const double total = gamma0 + gamma1;
    if (total <= 0.0)
        throw std::invalid_argument("SABasis: both couplings vanish");
    const double s0 = std::sqrt(gamma0 / total);
    const double s1 = std::sqrt(gamma1 / total);
    Matrix u = Matrix::Zero(3, 3);
    u(0, 0) = s0;
    u(0, 1) = s1;
    u(1, 0) = -s1;
    u(1, 1) = s0;
    u(2, 2) = 1.0;
    SABasis basis;
    basis.unitary = std::move(u);
    return basis;
}

DensityMatrix sa_transform(const ModelParams& params, const DensityMatrix& rho)
{
    if (rho.dim() != 3)
        throw std::invalid_argument("sa_transform: expected a 3-level state");
    const SABasis basis = SABasis::from_params(params);
    return DensityMatrix(basis.unitary * rho.matrix() * basis.unitary.adjoint());
}

Superoperator sa_transform(const ModelParams& params, const Superoperator& op)
{
    return conjugate_by_unitary(op, SABasis::from_params(params).unitary);
}

std::vector<double> grid_points(double start, double stop, int count)
{
    if (count < 2 || !(start < stop))
        throw std::invalid_argument("grid_points: need count >= 2 and start < stop");
    std::vector<double> pts(count);
    for (int i = 0; i < count; ++i)
        pts[i] = start + (stop - start) * i / (count - 1);
    return pts;
}

SweepResult detuning_sweep(const ModelParams& tpl, const std::vector<double>& delta_grid,
                           Equation eq, int threads, const SteadyStateOptions& opts)
{
    tpl.validate();
    SweepResult result;
    result.rows.resize(delta_grid.size());
    parallel_for(static_cast<int>(delta_grid.size()), threads, [&](int i) {
        ModelParams p = tpl;
        p.delta = delta_grid[i];
        try {
            result.rows[i] =
                observe(p.delta, steady_state_direct(build_liouvillian(p, eq), opts));
        } catch (const SolverError& err) {
            std::ostringstream msg;
            msg << "detuning_sweep at delta=" << p.delta << ": " << err.what();
            throw SolverError(msg.str());
        }
    });
    return result;
}

std::vector<double> inversion_boundaries(const ModelParams& tpl, PopulationDifference which,
                                         double lo, double hi, Equation eq, int scan_points,
                                         double tol)
{
    if (!(lo < hi))
        throw std::invalid_argument("inversion_boundaries: need lo < hi");
    const std::vector<double> scan = grid_points(lo, hi, std::max(scan_points, 3));
    std::vector<double> values(scan.size());
    parallel_for(static_cast<int>(scan.size()), 0,
                 [&](int i) { values[i] = steady_difference(tpl, scan[i], which, eq); });

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
        if (values[i] == 0.0) {
            roots.push_back(scan[i]);
            continue;
        }
        if ((values[i] < 0.0) == (values[i + 1] < 0.0))
            continue;
        double a = scan[i], b = scan[i + 1];
        double fa = values[i];
        while (b - a > tol) {
            const double mid = 0.5 * (a + b);
            const double fm = steady_difference(tpl, mid, which, eq);
            if ((fm < 0.0) == (fa < 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    if (roots.empty())
        throw SolverError("inversion_boundaries: no sign change in bracket");
    return roots;
}

SpectrumResult absorption_spectrum(const ModelParams& params, const ProbeWeights& probe,
                                   const std::vector<double>& omega_grid, Equation eq,
                                   int threads, const SteadyStateOptions& opts)
{
    params.validate();
    const Matrix p_plus = probe.mu0 * transition_op(2, 0) + probe.mu1 * transition_op(2, 1);
    const Matrix p_minus = p_plus.adjoint();

    struct Channel {
        Resolvent resolvent;
        Vector emit_source;   // vec(P+ rho_ss)
        Vector absorb_source; // vec(rho_ss P+)
    };
    auto make_channel = [&](double interference) {
        ModelParams p = params;
        p.interference = interference;
        const Superoperator liouvillian = build_liouvillian(p, eq);
        const DensityMatrix rho = steady_state_direct(liouvillian, opts);
        Channel ch{Resolvent(liouvillian), vectorize(Matrix(p_plus * rho.matrix())),
                   vectorize(Matrix(rho.matrix() * p_plus))};
        const double scale = std::max(ch.emit_source.norm(), ch.absorb_source.norm());
        if (ch.resolvent.kernel_overlap(ch.emit_source) > 1e-10 * scale ||
            ch.resolvent.kernel_overlap(ch.absorb_source) > 1e-10 * scale)
            throw SolverError("absorption_spectrum: probe source overlaps the stationary "
                              "subspace, correlation does not decay");
        return ch;
    };
    const Channel on = make_channel(params.interference);
    const Channel off = make_channel(0.0);

    auto absorption_at = [&](const Channel& ch, double omega) {
        const cd c_emit = -(p_minus * devectorize(ch.resolvent.solve(omega, ch.emit_source), 3))
                               .trace();
        const cd c_absorb =
            -(p_minus * devectorize(ch.resolvent.solve(omega, ch.absorb_source), 3)).trace();
        return (c_emit - c_absorb).real();
    };

    SpectrumResult result;
    result.rows.resize(omega_grid.size());
    parallel_for(static_cast<int>(omega_grid.size()), threads, [&](int i) {
        const double omega = omega_grid[i];
        result.rows[i] = {omega, absorption_at(on, omega), absorption_at(off, omega)};
    });
    return result;
}

SidebandWidths sideband_linewidths(const SpectrumResult& spectrum, SpectrumColumn column)
{
    const std::size_t n = spectrum.rows.size();
    if (n < 8)
        throw std::invalid_argument("sideband_linewidths: spectrum too short");
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = spectrum.rows[i].omega;
        y[i] = column == SpectrumColumn::with_interference ? spectrum.rows[i].a_on
                                                           : spectrum.rows[i].a_off;
    }

    int first = static_cast<int>(std::max_element(y.begin(), y.end()) - y.begin());
    if (y[first] <= 0.0)
        throw SolverError("sideband_linewidths: no absorptive peak in spectrum");
    PeakSeed seed1{first, x[first], estimate_hwhm(x, y, first), y[first]};

    // second sideband: tallest interior local maximum away from the first
    // peak (monotone tails of a single line have none)
    const double step = x[1] - x[0];
    int second = -1;
    for (int i = 1; i + 1 < static_cast<int>(n); ++i) {
        if (std::abs(x[i] - seed1.center) <= 2.0 * step)
            continue;
        if (y[i] < y[i - 1] || y[i] < y[i + 1])
            continue;
        if (second < 0 || y[i] > y[second])
            second = i;
    }
    const bool doublet = second >= 0 && y[second] > 0.05 * seed1.height;

    std::vector<PeakSeed> seeds{seed1};
    if (doublet)
        seeds.push_back({second, x[second], estimate_hwhm(x, y, second), y[second]});

    // joint fit over the union of per-peak windows
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i)
        for (const PeakSeed& s : seeds)
            if (std::abs(x[i] - s.center) <= 3.0 * s.width) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
                break;
            }

    const LorentzianModel model(static_cast<int>(seeds.size()));
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(model.size());
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        p0(3 * k) = seeds[k].height;
        p0(3 * k + 1) = seeds[k].center;
        p0(3 * k + 2) = seeds[k].width;
    }
    const Eigen::VectorXd fit = levenberg_marquardt(model, xs, ys, p0);

    std::vector<SidebandFit> fits;
    for (std::size_t k = 0; k < seeds.size(); ++k)
        fits.push_back({true, fit(3 * k + 1), std::abs(fit(3 * k + 2)), fit(3 * k),
                        fit(model.size() - 1)});

    SidebandWidths out;
    if (fits.size() == 1) {
        (fits[0].center >= 0.0 ? out.high : out.low) = fits[0];
        return out;
    }
    const bool first_is_high = fits[0].center > fits[1].center;
    out.high = first_is_high ? fits[0] : fits[1];
    out.low = first_is_high ? fits[1] : fits[0];
    const double separation = out.high.center - out.low.center;
    if (separation < 1.5 * (out.high.hwhm + out.low.hwhm))
        throw SolverError("sideband_linewidths: sidebands overlap beyond resolvability");
    return out;
}

} // namespace lambdacav
