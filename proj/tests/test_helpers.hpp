// Shared helpers for the unit suites: an independent reference integrator
// (step-doubled classical RK4) and random generator construction. The
// integrator deliberately shares no code with the evolve implementation.

#pragma once

#include "lambdacav/types.hpp"

#include <random>

namespace testhelp {

using lambdacav::cd;
using lambdacav::Matrix;
using lambdacav::Vector;

inline Vector rk4_fixed(const lambdacav::SparseMatrix& m, Vector v, double t, int steps)
{
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        const Vector k1 = m * v;
        const Vector k2 = m * (v + 0.5 * h * k1);
        const Vector k3 = m * (v + 0.5 * h * k2);
        const Vector k4 = m * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return v;
}

// Step-doubling until two resolutions agree to 1e-10.
inline Vector reference_evolve(const lambdacav::Superoperator& gen, const Vector& v0, double t)
{
    int steps = 64;
    Vector coarse = rk4_fixed(gen.matrix(), v0, t, steps);
    for (; steps <= (1 << 20); steps *= 2) {
        Vector fine = rk4_fixed(gen.matrix(), v0, t, 2 * steps);
        if ((fine - coarse).norm() <= 1e-10 * std::max(1.0, v0.norm()))
            return fine;
        coarse = std::move(fine);
    }
    return coarse;
}

inline Matrix random_matrix(std::mt19937& rng, Eigen::Index dim)
{
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            m(i, j) = cd(uni(rng), uni(rng));
    return m;
}

inline Matrix random_hermitian(std::mt19937& rng, Eigen::Index dim)
{
    return lambdacav::hermitize(random_matrix(rng, dim));
}

inline lambdacav::DensityMatrix random_density(std::mt19937& rng, Eigen::Index dim)
{
    const Matrix a = random_matrix(rng, dim);
    Matrix rho = a * a.adjoint();
    return lambdacav::DensityMatrix(rho / rho.trace());
}

// Random Lindblad-form generator: one Hamiltonian, two jump channels.
inline lambdacav::Superoperator random_lindblad(std::mt19937& rng, Eigen::Index dim)
{
    lambdacav::SuperoperatorBuilder b(dim);
    for (int c = 0; c < 2; ++c) {
        const Matrix j = random_matrix(rng, dim);
        b.add_sandwich(2.0, j, j.adjoint());
        b.add_left(-1.0, j.adjoint() * j);
        b.add_right(-1.0, j.adjoint() * j);
    }
    b.add_commutator(random_hermitian(rng, dim));
    return b.build();
}

} // namespace testhelp
