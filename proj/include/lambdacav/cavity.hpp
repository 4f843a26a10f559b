// cavity.hpp — full atom + cavity-mode model on a truncated Fock space.
// The composite space is ordered atom-major: index = atom * (n_max + 1) + n.
// Serves as the brute-force reference for the reduced atomic generators.

#pragma once

#include "lambdacav/model.hpp"
#include "lambdacav/types.hpp"

namespace lambdacav {

struct FockConfig {
    int n_max = 0;                // 0 = auto: ceil(4 * nbar) + 4
    double tail_tolerance = 1e-4; // max allowed thermal weight of the top level

    // Effective truncation for a given thermal occupation; rejects
    // truncations whose top-level thermal weight exceeds tail_tolerance.
    int resolve(double nbar) const;
};

// Thermal occupation probability of Fock level n at mean occupation nbar.
double thermal_weight(double nbar, int n);

// Thermal field state truncated at n_max (renormalized over the kept levels).
Matrix thermal_field_state(double nbar, int n_max);

// Generator of the complete model: free atom and cavity, bilinear
// atom-field coupling on both transitions, and the thermally damped mode.
Superoperator build_full_liouvillian(const ModelParams& params, const FockConfig& fock);

// Partial trace over the field, returning the 3-level atomic state.
DensityMatrix reduce_to_atom(const DensityMatrix& rho_full);

} // namespace lambdacav
