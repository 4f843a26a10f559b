// dynamics.hpp — generic solvers over superoperators: propagation, steady
// states (including degenerate kernels), kernel projection, and
// regression-theorem correlation transforms.

#pragma once

#include "lambdacav/types.hpp"

#include <optional>

namespace lambdacav {

struct SteadyStateOptions {
    // Relative singular-value threshold for kernel detection.
    double kernel_tol = 1e-10;
};

struct SteadyStateReport {
    // Unset when the kernel is degenerate; use asymptotic_state then.
    std::optional<DensityMatrix> state;
    int kernel_dimension = 0;
    // Magnitude of the slowest nonzero decay rate. 0 when not computed
    // (large-dimension direct path).
    double spectral_gap = 0.0;
};

// exp(L t) applied to rho0. Dense scaling-and-squaring for small
// dimensions; adaptive embedded Runge-Kutta (local tolerance 1e-8) on the
// sparse generator otherwise.
DensityMatrix evolve(const Superoperator& liouvillian, const DensityMatrix& rho0, double t);

// Kernel analysis via SVD for small dimensions. Large systems are solved
// directly (trace-row replacement + sparse LU) and the solution is
// verified against the generator; degeneracy surfaces as a SolverError.
SteadyStateReport steady_state(const Superoperator& liouvillian,
                               const SteadyStateOptions& opts = {});

// Fast path for sweeps: unique steady state or SolverError. Falls back to
// the SVD analysis for diagnosis when the direct solve is inconsistent.
DensityMatrix steady_state_direct(const Superoperator& liouvillian,
                                  const SteadyStateOptions& opts = {});

// Projects rho0 onto the non-decaying eigenspace of the generator along
// the decaying modes; equals the t -> infinity limit of evolve.
DensityMatrix asymptotic_state(const Superoperator& liouvillian, const DensityMatrix& rho0);

// Which side of the stationary state the source operator multiplies.
enum class SourceSide { left, right };

// One-sided Fourier-Laplace transform of a two-time correlation obtained
// from the quantum regression theorem:
//   integral_0^inf exp(i omega tau) tr[measure exp(L tau)(source)] dtau
// with source = b_op * rho_ss (left) or rho_ss * b_op (right), evaluated
// as -tr[measure devec((L + i omega I)^{-1} vec(source))]. The source must
// have no overlap with the non-decaying subspace.
cd correlation_transform(const Superoperator& liouvillian, const DensityMatrix& rho_ss,
                         const Matrix& measure_op, const Matrix& source_op, double omega,
                         SourceSide side = SourceSide::left);

// Shared machinery for evaluating many correlation transforms against one
// generator: the left-kernel guard basis is computed once. Small systems
// use a rank-revealing dense solve; larger ones a sparse factorization
// with the trace functional as the guard.
class Resolvent {
public:
    explicit Resolvent(const Superoperator& liouvillian);

    // Guarded solve of (L + i omega I) x = v.
    Vector solve(double omega, const Vector& v) const;
    // Overlap of v with the non-decaying (left-kernel) directions.
    double kernel_overlap(const Vector& v) const;

    Eigen::Index dim() const { return dim_; }

private:
    Eigen::Index dim_;
    SparseMatrix sparse_;
    Matrix dense_;       // populated on the dense path only
    Matrix left_kernel_; // columns: orthonormal basis of ker(L^dagger)
};

} // namespace lambdacav
