#include "lambdacav/types.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <sstream>

namespace lambdacav {

DensityMatrix DensityMatrix::ket(Eigen::Index dim, Eigen::Index level)
{
    if (level < 0 || level >= dim)
        throw std::invalid_argument("DensityMatrix::ket: level out of range");
    Matrix m = Matrix::Zero(dim, dim);
    m(level, level) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Vector& state)
{
    const double n = state.norm();
    if (n <= 0.0)
        throw std::invalid_argument("DensityMatrix::pure: zero state vector");
    Vector psi = state / n;
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim)
{
    return DensityMatrix(Matrix::Identity(dim, dim) / double(dim));
}

DensityMatrix DensityMatrix::from_matrix(const Matrix& m, double tol)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("DensityMatrix::from_matrix: matrix is not square");
    DensityMatrix rho(m);
    rho.validate(tol, 1e-10);
    return rho;
}

void DensityMatrix::validate(double tol, double psd_tol) const
{
    const double scale = std::max(1.0, rho_.norm());
    if ((rho_ - rho_.adjoint()).norm() > tol * scale)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - cd(1.0, 0.0)) > tol)
        throw std::invalid_argument("density matrix does not have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho_));
    if (es.eigenvalues().minCoeff() < -psd_tol) {
        std::ostringstream msg;
        msg << "density matrix has negative eigenvalue " << es.eigenvalues().minCoeff();
        throw std::invalid_argument(msg.str());
    }
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a.matrix() - b.matrix()));
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Superoperator::Superoperator(Eigen::Index dim, SparseMatrix matrix)
    : dim_(dim), matrix_(std::move(matrix))
{
    if (matrix_.rows() != dim_ * dim_ || matrix_.cols() != dim_ * dim_)
        throw std::invalid_argument("Superoperator: matrix must be d^2 x d^2");
}

Matrix Superoperator::apply(const Matrix& x) const
{
    if (x.rows() != dim_ || x.cols() != dim_)
        throw std::invalid_argument("Superoperator::apply: dimension mismatch");
    return devectorize(matrix_ * vectorize(x), dim_);
}

void SuperoperatorBuilder::add_sandwich(cd coeff, const Matrix& a, const Matrix& b)
{
    terms_.push_back({coeff, a, b});
}

void SuperoperatorBuilder::add_left(cd coeff, const Matrix& a)
{
    terms_.push_back({coeff, a, Matrix::Identity(dim_, dim_)});
}

void SuperoperatorBuilder::add_right(cd coeff, const Matrix& b)
{
    terms_.push_back({coeff, Matrix::Identity(dim_, dim_), b});
}

void SuperoperatorBuilder::append_adjoints()
{
    const std::size_t n = terms_.size();
    terms_.reserve(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        const Term& t = terms_[k];
        terms_.push_back({std::conj(t.coeff), t.right.adjoint(), t.left.adjoint()});
    }
}

void SuperoperatorBuilder::add_commutator(const Matrix& h)
{
    const cd mi(0.0, -1.0);
    terms_.push_back({mi, h, Matrix::Identity(dim_, dim_)});
    terms_.push_back({-mi, Matrix::Identity(dim_, dim_), h});
}

Superoperator SuperoperatorBuilder::build() const
{
    const Eigen::Index d2 = dim_ * dim_;
    std::vector<Eigen::Triplet<cd>> triplets;
    for (const Term& t : terms_) {
        // vec(A rho B) = kron(B^T, A) vec(rho)
        for (Eigen::Index jout = 0; jout < dim_; ++jout)
            for (Eigen::Index jin = 0; jin < dim_; ++jin) {
                const cd bj = t.right(jin, jout);
                if (bj == cd(0.0, 0.0))
                    continue;
                for (Eigen::Index iout = 0; iout < dim_; ++iout)
                    for (Eigen::Index iin = 0; iin < dim_; ++iin) {
                        const cd aij = t.left(iout, iin);
                        if (aij == cd(0.0, 0.0))
                            continue;
                        triplets.emplace_back(jout * dim_ + iout, jin * dim_ + iin,
                                              t.coeff * bj * aij);
                    }
            }
    }
    SparseMatrix m(d2, d2);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune([](Eigen::Index, Eigen::Index, const cd& v) { return v != cd(0.0, 0.0); });
    return Superoperator(dim_, std::move(m));
}

Superoperator conjugate_by_unitary(const Superoperator& op, const Matrix& u)
{
    if (u.rows() != op.dim() || u.cols() != op.dim())
        throw std::invalid_argument("conjugate_by_unitary: dimension mismatch");
    SparseMatrix w = Eigen::kroneckerProduct(u.conjugate(), u).sparseView();
    SparseMatrix m = w * op.matrix() * w.adjoint();
    return Superoperator(op.dim(), std::move(m));
}

} // namespace lambdacav
