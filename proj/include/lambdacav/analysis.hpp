// analysis.hpp — physics-level analyses on top of the generators and
// solvers: symmetric/antisymmetric basis transform, steady-state detuning
// sweeps, inversion-boundary search, probe absorption spectra, and
// sideband linewidth extraction.

#pragma once

#include "lambdacav/dynamics.hpp"
#include "lambdacav/model.hpp"

#include <vector>

namespace lambdacav {

// Which generator an analysis runs on.
enum class Equation { reduced, approx };

Superoperator build_liouvillian(const ModelParams& params, Equation eq);

// Basis (|S>, |A>, |2>) with |S> = (sqrt(g0) |0> + sqrt(g1) |1>)-weighted
// by the flat-response decay rates; |A> is the orthogonal dark
// combination, decoupled from |2> in the approximate generator.
struct SABasis {
    Matrix unitary; // rows are <S|, <A|, <2|

    static SABasis from_params(const ModelParams& params);
};

// Conjugates a state into the (S, A, 2) ordering.
DensityMatrix sa_transform(const ModelParams& params, const DensityMatrix& rho);
// Same change of basis applied to a generator.
Superoperator sa_transform(const ModelParams& params, const Superoperator& op);

struct SweepRow {
    double delta;
    double d20;    // rho22 - rho00
    double d21;    // rho22 - rho11
    double re_coh; // Re rho01
    double im_coh; // Im rho01
    double p22, p11, p00;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

std::vector<double> grid_points(double start, double stop, int count);

// Steady-state observables of the chosen generator over a detuning grid.
// Every grid point must have a unique steady state; degeneracy is reported
// with the offending detuning. threads = 0 picks a hardware default.
SweepResult detuning_sweep(const ModelParams& tpl, const std::vector<double>& delta_grid,
                           Equation eq = Equation::reduced, int threads = 0,
                           const SteadyStateOptions& opts = {});

enum class PopulationDifference { d20, d21 };

// All sign changes of the chosen steady-state population difference inside
// [lo, hi], each bisected to |delta| resolution <= tol. Errors when the
// difference never changes sign on the scan.
std::vector<double> inversion_boundaries(const ModelParams& tpl, PopulationDifference which,
                                         double lo, double hi, Equation eq = Equation::reduced,
                                         int scan_points = 129, double tol = 0.05);

struct ProbeWeights {
    double mu0 = 1.0;
    double mu1 = 1.0;
};

struct SpectrumRow {
    double omega;
    double a_on;  // with cross-damping at the template's interference scale
    double a_off; // with interference = 0
};

struct SpectrumResult {
    std::vector<SpectrumRow> rows;
};

// Weak-probe absorption from the regression theorem:
//   A(omega) = Re[ C1 - C2 ],
//   C1 = transform of <P-(tau) P+(0)>, C2 = transform of <P+(0) P-(tau)>,
// with P+ = mu0 |2><0| + mu1 |2><1| against the steady state of the
// generator. Negative values indicate probe gain.
SpectrumResult absorption_spectrum(const ModelParams& params, const ProbeWeights& probe,
                                   const std::vector<double>& omega_grid,
                                   Equation eq = Equation::reduced, int threads = 0,
                                   const SteadyStateOptions& opts = {});

enum class SpectrumColumn { with_interference, without_interference };

struct SidebandFit {
    bool found = false;
    double center = 0.0;
    double hwhm = 0.0;
    double height = 0.0;
    double offset = 0.0;
};

struct SidebandWidths {
    SidebandFit high; // larger center frequency
    SidebandFit low;
};

// Least-squares Lorentzian fits of the absorption sidebands (joint fit
// with a shared constant when two peaks are present). Windows span 3x the
// half-max width estimate around each detected peak. Errors when no
// absorptive peak exists, the fit does not converge, or two peaks are
// closer than 1.5x their summed fitted HWHMs.
SidebandWidths sideband_linewidths(const SpectrumResult& spectrum,
                                   SpectrumColumn column = SpectrumColumn::without_interference);

} // namespace lambdacav
