#include "lambdacav/model.hpp"

#include <sstream>

namespace lambdacav {

namespace {

void require(bool cond, const char* what)
{
    if (!cond)
        throw std::invalid_argument(what);
}

} // namespace

void ModelParams::validate() const
{
    require(std::isfinite(kappa) && kappa > 0.0, "ModelParams: kappa must be > 0");
    require(std::isfinite(omega10) && omega10 >= 0.0, "ModelParams: omega10 must be >= 0");
    require(std::isfinite(nbar) && nbar >= 0.0, "ModelParams: nbar must be >= 0");
    require(std::isfinite(interference) && interference >= 0.0 && interference <= 1.0,
            "ModelParams: interference must lie in [0, 1]");
    require(std::isfinite(delta), "ModelParams: delta must be finite");
    require(std::isfinite(g0.real()) && std::isfinite(g0.imag()) &&
            std::isfinite(g1.real()) && std::isfinite(g1.imag()),
            "ModelParams: couplings must be finite");
}

Matrix transition_op(int i, int j)
{
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::invalid_argument("transition_op: level index out of range");
    Matrix m = Matrix::Zero(3, 3);
    m(i, j) = 1.0;
    return m;
}

Matrix atomic_hamiltonian(const ModelParams& params)
{
    Matrix h = Matrix::Zero(3, 3);
    h(0, 0) = -0.5 * params.omega10;
    h(1, 1) = 0.5 * params.omega10;
    return h;
}

cd response_function(const ModelParams& params, int sign)
{
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("response_function: sign must be +1 or -1");
    require(std::isfinite(params.kappa) && params.kappa > 0.0,
            "response_function: kappa must be > 0");
    return 1.0 / cd(params.kappa, params.delta + sign * 0.5 * params.omega10);
}

EffectiveRates effective_rates(const ModelParams& params)
{
    params.validate();
    return {response_function(params, -1).real() * std::norm(params.g0),
            response_function(params, +1).real() * std::norm(params.g1)};
}

Superoperator build_reduced_liouvillian(const ModelParams& params)
{
    params.validate();

    const cd fm = response_function(params, -1);
    const cd fp = response_function(params, +1);
    const double emit = params.nbar + 1.0;
    const double absorb = params.nbar;
    const cd g0sq = std::norm(params.g0);
    const cd g1sq = std::norm(params.g1);
    const cd cross = params.interference * params.g0 * std::conj(params.g1);

    const Matrix a02 = transition_op(0, 2);
    const Matrix a12 = transition_op(1, 2);
    const Matrix a20 = transition_op(2, 0);
    const Matrix a21 = transition_op(2, 1);
    const Matrix a00 = transition_op(0, 0);
    const Matrix a11 = transition_op(1, 1);
    const Matrix a22 = transition_op(2, 2);
    const Matrix a01 = transition_op(0, 1);
    const Matrix a10 = transition_op(1, 0);

    SuperoperatorBuilder b(3);

    // emission into the cavity, weighted by the detuned response
    b.add_sandwich(fm * emit * g0sq, a02, a20);
    b.add_left(-fm * emit * g0sq, a22);
    b.add_sandwich(fm * emit * cross, a02, a21);

    b.add_sandwich(fp * emit * g1sq, a12, a21);
    b.add_left(-fp * emit * g1sq, a22);
    b.add_sandwich(fp * emit * std::conj(cross), a12, a20);

    // absorption from the thermal cavity occupation
    b.add_sandwich(fm * absorb * g0sq, a20, a02);
    b.add_right(-fm * absorb * g0sq, a00);
    b.add_sandwich(fm * absorb * cross, a21, a02);
    b.add_right(-fm * absorb * cross, a01);

    b.add_sandwich(fp * absorb * g1sq, a21, a12);
    b.add_right(-fp * absorb * g1sq, a11);
    b.add_sandwich(fp * absorb * std::conj(cross), a20, a12);
    b.add_right(-fp * absorb * std::conj(cross), a10);

    b.append_adjoints();
    b.add_commutator(atomic_hamiltonian(params));
    return b.build();
}

Superoperator build_approx_liouvillian(const ModelParams& params)
{
    params.validate();

    const double gamma0 = std::norm(params.g0) / params.kappa;
    const double gamma1 = std::norm(params.g1) / params.kappa;
    const cd chi = params.interference * params.g0 * std::conj(params.g1) / params.kappa;
    const double emit = params.nbar + 1.0;
    const double absorb = params.nbar;

    const Matrix a02 = transition_op(0, 2);
    const Matrix a12 = transition_op(1, 2);
    const Matrix a20 = transition_op(2, 0);
    const Matrix a21 = transition_op(2, 1);
    const Matrix a00 = transition_op(0, 0);
    const Matrix a11 = transition_op(1, 1);
    const Matrix a22 = transition_op(2, 2);
    const Matrix a01 = transition_op(0, 1);
    const Matrix a10 = transition_op(1, 0);

    SuperoperatorBuilder b(3);

    b.add_sandwich(2.0 * gamma0 * emit, a02, a20);
    b.add_left(-gamma0 * emit, a22);
    b.add_right(-gamma0 * emit, a22);
    b.add_sandwich(2.0 * gamma0 * absorb, a20, a02);
    b.add_left(-gamma0 * absorb, a00);
    b.add_right(-gamma0 * absorb, a00);

    b.add_sandwich(2.0 * gamma1 * emit, a12, a21);
    b.add_left(-gamma1 * emit, a22);
    b.add_right(-gamma1 * emit, a22);
    b.add_sandwich(2.0 * gamma1 * absorb, a21, a12);
    b.add_left(-gamma1 * absorb, a11);
    b.add_right(-gamma1 * absorb, a11);

    // cross-damping between the two decay channels
    b.add_sandwich(2.0 * std::conj(chi) * emit, a12, a20);
    b.add_sandwich(2.0 * chi * emit, a02, a21);

    b.add_sandwich(2.0 * chi * absorb, a21, a02);
    b.add_left(-chi * absorb, a01);
    b.add_right(-chi * absorb, a01);
    b.add_sandwich(2.0 * std::conj(chi) * absorb, a20, a12);
    b.add_left(-std::conj(chi) * absorb, a10);
    b.add_right(-std::conj(chi) * absorb, a10);

    b.add_commutator(atomic_hamiltonian(params));
    return b.build();
}

} // namespace lambdacav
