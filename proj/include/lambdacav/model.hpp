// model.hpp — reduced master-equation generators for a three-level Lambda
// atom whose both optical transitions couple to one damped thermal cavity
// mode. Basis ordering is (|0>, |1>, |2>) everywhere: two ground sublevels
// split by omega10, one excited level.

#pragma once

#include "lambdacav/types.hpp"

namespace lambdacav {

// All rates and frequencies share one angular-frequency unit system; the
// library never rescales. Couplings may be complex (relative phases enter
// only through g0 * conj(g1)); negative real g1 represents anti-parallel
// transition dipoles.
struct ModelParams {
    cd g0{10.0, 0.0};         // coupling of |0> <-> |2>
    cd g1{10.0, 0.0};         // coupling of |1> <-> |2>
    double kappa = 100.0;     // cavity field decay rate, > 0
    double omega10 = 200.0;   // ground doublet splitting, >= 0
    double delta = 0.0;       // cavity detuning from the mean atomic frequency
    double nbar = 20.0;       // mean thermal photon number, >= 0
    double interference = 1.0; // scale of the cross-transition terms, in [0, 1]

    void validate() const; // throws std::invalid_argument
};

// Transition operator |i><j| on the three-level space.
Matrix transition_op(int i, int j);

// Free atomic Hamiltonian (omega10/2) * (|1><1| - |0><0|) in the frame
// rotating at the mean transition frequency.
Matrix atomic_hamiltonian(const ModelParams& params);

// Cavity response at the two transition frequencies:
// F(sign) = 1 / (kappa + i (delta + sign * omega10 / 2)), sign = +-1.
// Its real part sets the cavity-induced decay rate of the corresponding
// transition, the imaginary part the level shift.
cd response_function(const ModelParams& params, int sign);

struct EffectiveRates {
    double gamma0; // Re F(-omega10) * |g0|^2
    double gamma1; // Re F(+omega10) * |g1|^2
};
EffectiveRates effective_rates(const ModelParams& params);

// Atom-only generator with the cavity mode eliminated, retaining the full
// complex response F (decay rates and level shifts) and the cross-damping
// terms proportional to g0 * conj(g1) scaled by params.interference.
Superoperator build_reduced_liouvillian(const ModelParams& params);

// Flat-response approximation of the same generator: real rates
// gamma_i = |g_i|^2 / kappa, no level shifts. Cross-damping enters with
// the coupling phase, params.interference * g0 * conj(g1) / kappa, which
// reduces to sqrt(gamma0 * gamma1) for real positive couplings.
Superoperator build_approx_liouvillian(const ModelParams& params);

} // namespace lambdacav
