#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lambdacav/cavity.hpp"
#include "lambdacav/dynamics.hpp"

#include "test_helpers.hpp"

using namespace lambdacav;

TEST_CASE("fock configuration: auto selection and tail rejection")
{
    FockConfig fock;
    CHECK(fock.resolve(0.0) == 4);
    const int n = fock.resolve(2.0);
    CHECK(n >= 12); // 4 * nbar + 4
    CHECK(thermal_weight(2.0, n) < fock.tail_tolerance);

    FockConfig tight;
    tight.n_max = 2;
    tight.tail_tolerance = 1e-6;
    CHECK_THROWS_AS(tight.resolve(5.0), std::invalid_argument);

    FockConfig zero;
    zero.n_max = -1;
    CHECK_THROWS_AS(zero.resolve(1.0), std::invalid_argument);
}

TEST_CASE("full generator preserves trace")
{
    ModelParams p;
    p.g0 = p.g1 = 1.0;
    p.kappa = 10.0;
    p.omega10 = 2.0;
    p.nbar = 0.5;
    FockConfig fock;
    fock.n_max = 6;
    fock.tail_tolerance = 1e-2;
    const Superoperator gen = build_full_liouvillian(p, fock);
    std::mt19937 rng(23);
    for (int k = 0; k < 3; ++k) {
        const Matrix x = testhelp::random_hermitian(rng, gen.dim());
        CHECK(std::abs(gen.apply(x).trace()) <= 1e-12 * x.norm() * std::max(1.0, gen.norm()));
    }
}

TEST_CASE("decoupled limit: populations conserved, field relaxes to thermal")
{
    ModelParams p;
    p.g0 = p.g1 = 0.0;
    p.kappa = 1.0;
    p.omega10 = 2.0;
    p.nbar = 0.1;
    FockConfig fock;
    fock.n_max = 12;
    const Superoperator gen = build_full_liouvillian(p, fock);

    const int field_dim = 13;
    Matrix atom = Matrix::Zero(3, 3);
    atom(0, 0) = 0.6;
    atom(2, 2) = 0.4;
    Matrix vacuum = Matrix::Zero(field_dim, field_dim);
    vacuum(0, 0) = 1.0;
    Matrix initial = Matrix::Zero(gen.dim(), gen.dim());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            initial.block(i * field_dim, j * field_dim, field_dim, field_dim) =
                atom(i, j) * vacuum;

    const DensityMatrix late = evolve(gen, DensityMatrix(initial), 35.0);
    const DensityMatrix atom_late = reduce_to_atom(late);
    CHECK(atom_late.population(0) == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(atom_late.population(2) == doctest::Approx(0.4).epsilon(1e-8));

    double photons = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < field_dim; ++n)
            photons += n * late(i * field_dim + n, i * field_dim + n).real();
    CHECK(photons == doctest::Approx(p.nbar).epsilon(1e-8));
}

TEST_CASE("reduce_to_atom: product and maximally mixed states")
{
    std::mt19937 rng(31);
    const DensityMatrix atom = testhelp::random_density(rng, 3);
    const Matrix field = thermal_field_state(0.7, 5);
    Matrix product = Matrix::Zero(18, 18);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            product.block(i * 6, j * 6, 6, 6) = atom(i, j) * field;
    const DensityMatrix reduced = reduce_to_atom(DensityMatrix(product));
    CHECK((reduced.matrix() - atom.matrix()).norm() <= 1e-14);

    const DensityMatrix mixed = reduce_to_atom(DensityMatrix::maximally_mixed(18));
    CHECK((mixed.matrix() - Matrix::Identity(3, 3) / 3.0).norm() <= 1e-14);

    CHECK_THROWS_AS(reduce_to_atom(DensityMatrix::maximally_mixed(10)), std::invalid_argument);
}

TEST_CASE("composite steady state reduces to the atomic one in the bad-cavity regime")
{
    ModelParams p;
    p.g0 = p.g1 = 1.0;
    p.kappa = 100.0;
    p.omega10 = 2.0;
    p.delta = 0.0;
    p.nbar = 0.5;
    FockConfig fock;
    fock.n_max = 12;
    const DensityMatrix reduced_from_full =
        reduce_to_atom(*steady_state(build_full_liouvillian(p, fock)).state);
    const DensityMatrix direct = steady_state_direct(build_reduced_liouvillian(p));
    CHECK(trace_distance(reduced_from_full, direct) <= 1e-3);
}

TEST_CASE("truncation convergence of atomic observables")
{
    ModelParams p;
    p.g0 = p.g1 = 1.0;
    p.kappa = 20.0;
    p.omega10 = 2.0;
    p.delta = 3.0;
    p.nbar = 0.5;
    FockConfig coarse;
    coarse.n_max = 12;
    FockConfig fine;
    fine.n_max = 16;
    const DensityMatrix a =
        reduce_to_atom(*steady_state(build_full_liouvillian(p, coarse)).state);
    const DensityMatrix b = reduce_to_atom(*steady_state(build_full_liouvillian(p, fine)).state);
    CHECK(trace_distance(a, b) <= 1e-6);
}
