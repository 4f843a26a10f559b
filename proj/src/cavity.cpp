#include "lambdacav/cavity.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <sstream>

namespace lambdacav {

namespace {

Matrix annihilation_op(int n_max)
{
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n)
        a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Matrix lift_atom(const Matrix& op, int n_max)
{
    return Eigen::kroneckerProduct(op, Matrix::Identity(n_max + 1, n_max + 1)).eval();
}

Matrix lift_field(const Matrix& op)
{
    return Eigen::kroneckerProduct(Matrix::Identity(3, 3), op).eval();
}

} // namespace

double thermal_weight(double nbar, int n)
{
    if (nbar <= 0.0)
        return n == 0 ? 1.0 : 0.0;
    // nbar^n / (nbar+1)^{n+1}, evaluated in logs for large n
    return std::exp(n * std::log(nbar) - (n + 1) * std::log(nbar + 1.0));
}

Matrix thermal_field_state(double nbar, int n_max)
{
    Matrix rho = Matrix::Zero(n_max + 1, n_max + 1);
    double total = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        rho(n, n) = thermal_weight(nbar, n);
        total += rho(n, n).real();
    }
    return rho / total;
}

int FockConfig::resolve(double nbar) const
{
    int n = n_max;
    if (n == 0) {
        // smallest truncation satisfying both the 4*nbar + 4 rule and the
        // tail-weight bound
        n = static_cast<int>(std::ceil(4.0 * nbar)) + 4;
        while (thermal_weight(nbar, n) >= tail_tolerance && n < 100000)
            ++n;
    }
    if (n < 1)
        throw std::invalid_argument("FockConfig: n_max must be >= 1");
    if (thermal_weight(nbar, n) >= tail_tolerance) {
        std::ostringstream msg;
        msg << "FockConfig: truncation n_max=" << n << " keeps thermal weight "
            << thermal_weight(nbar, n) << " >= tail tolerance " << tail_tolerance;
        throw std::invalid_argument(msg.str());
    }
    return n;
}

Superoperator build_full_liouvillian(const ModelParams& params, const FockConfig& fock)
{
    params.validate();
    const int n_max = fock.resolve(params.nbar);
    const Eigen::Index dim = 3 * (n_max + 1);
    if (dim * dim > 1'000'000)
        throw std::invalid_argument("build_full_liouvillian: truncation exceeds memory budget");

    const Matrix a = lift_field(annihilation_op(n_max));
    const Matrix ad = a.adjoint();

    Matrix h = lift_atom(atomic_hamiltonian(params), n_max);
    h += params.delta * ad * a;
    const Matrix raise = cd(0.0, 1.0) *
                         (params.g1 * lift_atom(transition_op(1, 2), n_max) +
                          params.g0 * lift_atom(transition_op(0, 2), n_max)) *
                         ad;
    h += raise + raise.adjoint();

    const double emit = params.kappa * (params.nbar + 1.0);
    const double absorb = params.kappa * params.nbar;

    SuperoperatorBuilder b(dim);
    b.add_sandwich(2.0 * emit, a, ad);
    b.add_left(-emit, ad * a);
    b.add_right(-emit, ad * a);
    if (absorb > 0.0) {
        b.add_sandwich(2.0 * absorb, ad, a);
        b.add_left(-absorb, a * ad);
        b.add_right(-absorb, a * ad);
    }
    b.add_commutator(h);
    return b.build();
}

DensityMatrix reduce_to_atom(const DensityMatrix& rho_full)
{
    const Eigen::Index dim = rho_full.dim();
    if (dim % 3 != 0 || dim < 3)
        throw std::invalid_argument("reduce_to_atom: dimension is not 3 * (n_max + 1)");
    const Eigen::Index field_dim = dim / 3;
    Matrix atom = Matrix::Zero(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            for (Eigen::Index n = 0; n < field_dim; ++n)
                atom(i, j) += rho_full(i * field_dim + n, j * field_dim + n);
    return DensityMatrix(std::move(atom));
}

} // namespace lambdacav
