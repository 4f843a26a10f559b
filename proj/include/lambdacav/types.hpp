// types.hpp — core linear-algebra types shared by all lambdacav modules

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lambdacav {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cd>;

// Thrown when a solver cannot produce a trustworthy result (degenerate
// kernel, defective projection, singular resolvent, ...). Parameter
// validation uses std::invalid_argument instead.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Column stacking: vec(rho)[i + d*j] = rho(i, j), so vec(A rho B) =
// kron(B^T, A) * vec(rho). Every superoperator in the library uses this
// convention.
inline Vector vectorize(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix devectorize(const Vector& v, Eigen::Index dim)
{
    if (v.size() != dim * dim)
        throw std::invalid_argument("devectorize: vector length does not match dimension");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

inline Matrix hermitize(const Matrix& m)
{
    return 0.5 * (m + m.adjoint());
}

class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}

    static DensityMatrix ket(Eigen::Index dim, Eigen::Index level);
    static DensityMatrix pure(const Vector& state);
    static DensityMatrix maximally_mixed(Eigen::Index dim);
    // Validates Hermiticity / unit trace / positivity before accepting.
    static DensityMatrix from_matrix(const Matrix& m, double tol = 1e-9);

    const Matrix& matrix() const { return rho_; }
    Matrix& matrix() { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }

    cd operator()(Eigen::Index i, Eigen::Index j) const { return rho_(i, j); }
    double population(Eigen::Index i) const { return rho_(i, i).real(); }

    // Hermitian within tol, trace 1 within tol, eigenvalues >= -psd_tol.
    void validate(double tol = 1e-9, double psd_tol = 1e-10) const;

private:
    Matrix rho_;
};

// Trace distance (1/2) * ||a - b||_1.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Generator L of a master equation, stored as a d^2 x d^2 sparse matrix
// acting on column-stacked density matrices. Dense accessors are provided
// for the small (single-atom) case.
class Superoperator {
public:
    Superoperator() = default;
    Superoperator(Eigen::Index dim, SparseMatrix matrix);

    Eigen::Index dim() const { return dim_; }
    const SparseMatrix& matrix() const { return matrix_; }
    Matrix dense() const { return Matrix(matrix_); }

    Matrix apply(const Matrix& x) const;
    Vector apply_vec(const Vector& v) const { return matrix_ * v; }

    double norm() const { return matrix_.norm(); }

private:
    Eigen::Index dim_ = 0;
    SparseMatrix matrix_;
};

// Accumulates sandwich terms coeff * A rho B and materializes the sparse
// generator. append_adjoints() adds the Hermitian conjugate of every term
// collected so far; call it before adding Hamiltonian commutators.
class SuperoperatorBuilder {
public:
    explicit SuperoperatorBuilder(Eigen::Index dim) : dim_(dim) {}

    void add_sandwich(cd coeff, const Matrix& a, const Matrix& b);
    void add_left(cd coeff, const Matrix& a);
    void add_right(cd coeff, const Matrix& b);
    void append_adjoints();
    void add_commutator(const Matrix& h); // -i [h, rho]

    Superoperator build() const;

private:
    struct Term {
        cd coeff;
        Matrix left;
        Matrix right;
    };
    Eigen::Index dim_;
    std::vector<Term> terms_;
};

// rho -> u rho u^dagger, lifted to superoperator level: W L W^dagger with
// W = kron(conj(u), u).
Superoperator conjugate_by_unitary(const Superoperator& op, const Matrix& u);

} // namespace lambdacav
