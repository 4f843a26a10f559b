#include "lambdacav/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lambdacav {

namespace {

// Dense kernel analysis is authoritative up to this Hilbert-space
// dimension; larger systems take the sparse direct path.
constexpr Eigen::Index kDenseDimLimit = 16;

struct KernelAnalysis {
    Matrix right; // columns span ker(L)
    Matrix left;  // columns span ker(L^dagger)
};

KernelAnalysis svd_kernel(const Matrix& dense, double kernel_tol)
{
    Eigen::BDCSVD<Matrix> svd(dense, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = kernel_tol * sigma(0);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) < cutoff)
            ++k;
    KernelAnalysis out;
    out.right = svd.matrixV().rightCols(k);
    out.left = svd.matrixU().rightCols(k);
    return out;
}

double slowest_decay_rate(const Matrix& dense)
{
    Eigen::ComplexEigenSolver<Matrix> es(dense, false);
    const auto& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return 0.0;
    double gap = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double re = std::abs(ev(i).real());
        if (re > 1e-12 * scale && (gap == 0.0 || re < gap))
            gap = re;
    }
    return gap;
}

// Replace one diagonal vec-row with the trace functional and solve
// M x = e_row; valid whenever the kernel is one-dimensional.
Vector sparse_trace_solve_row(const Superoperator& liouvillian, Eigen::Index level)
{
    const Eigen::Index d = liouvillian.dim();
    const Eigen::Index d2 = d * d;
    const Eigen::Index row = level * d + level;
    std::vector<Eigen::Triplet<cd>> trips;
    trips.reserve(static_cast<std::size_t>(liouvillian.matrix().nonZeros()) + d);
    const SparseMatrix& m = liouvillian.matrix();
    for (Eigen::Index col = 0; col < m.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(m, col); it; ++it)
            if (it.row() != row)
                trips.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index k = 0; k < d; ++k)
        trips.emplace_back(row, k * d + k, cd(1.0, 0.0));
    SparseMatrix sys(d2, d2);
    sys.setFromTriplets(trips.begin(), trips.end());
    sys.makeCompressed();

    Eigen::SparseLU<SparseMatrix> lu(sys);
    if (lu.info() != Eigen::Success)
        throw SolverError("steady_state: sparse factorization failed (degenerate kernel?)");
    Vector rhs = Vector::Zero(d2);
    rhs(row) = 1.0;
    Vector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
        throw SolverError("steady_state: sparse solve failed");
    return x;
}

// A residual check alone cannot expose a degenerate kernel (any kernel
// mixture is annihilated too), so solve with two different pivot rows and
// require the same state.
Vector sparse_trace_solve(const Superoperator& liouvillian)
{
    Vector x = sparse_trace_solve_row(liouvillian, 0);
    const Vector other = sparse_trace_solve_row(liouvillian, 1);
    if ((x - other).norm() > 1e-8 * std::max(1.0, x.norm()))
        throw SolverError("steady_state: pivot-dependent solution, kernel is degenerate");
    return x;
}

DensityMatrix finalize_steady_vector(const Vector& x, const Superoperator& liouvillian)
{
    const double residual = (liouvillian.matrix() * x).norm();
    const double lnorm = liouvillian.norm();
    if (residual > 1e-10 * lnorm * std::max(1.0, x.norm()))
        throw SolverError("steady_state: solution does not annihilate the generator");
    Matrix rho = hermitize(devectorize(x, liouvillian.dim()));
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-12)
        throw SolverError("steady_state: kernel has no unit-trace element");
    return DensityMatrix(rho / tr);
}

// Dormand-Prince 5(4) with local tolerance 1e-8 on the sparse generator.
Vector integrate_adaptive(const SparseMatrix& m, Vector y, double t_final)
{
    constexpr double tol = 1e-8;
    const double a21 = 1.0 / 5;
    const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
    const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
    const double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

    double t = 0.0;
    const double scale = std::max(m.norm(), 1e-300);
    double h = std::min(t_final, 0.1 / scale);
    int rejected_in_a_row = 0;
    while (t < t_final) {
        h = std::min(h, t_final - t);
        const Vector k1 = m * y;
        const Vector k2 = m * (y + h * a21 * k1);
        const Vector k3 = m * (y + h * (a31 * k1 + a32 * k2));
        const Vector k4 = m * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector k5 = m * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector k6 = m * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vector y_next = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = m * y_next;
        const double err =
            (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).norm();
        const double bound = tol * std::max(1.0, std::max(y.norm(), y_next.norm()));
        if (err <= bound) {
            t += h;
            y = y_next;
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 60) {
            throw SolverError("evolve: adaptive integrator failed to reach tolerance");
        }
        const double grow = err > 0.0 ? 0.9 * std::pow(bound / err, 0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
        if (!(h > 0.0) || !std::isfinite(h))
            throw SolverError("evolve: step size underflow");
    }
    return y;
}

} // namespace

DensityMatrix evolve(const Superoperator& liouvillian, const DensityMatrix& rho0, double t)
{
    if (rho0.dim() != liouvillian.dim())
        throw std::invalid_argument("evolve: dimension mismatch");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("evolve: t must be finite and >= 0");
    if (!rho0.matrix().allFinite())
        throw std::invalid_argument("evolve: non-finite entries in initial state");
    if (t == 0.0)
        return rho0;

    Vector v0 = vectorize(rho0.matrix());
    Vector vt;
    if (liouvillian.dim() <= 9) {
        const Matrix propagator = (liouvillian.dense() * t).exp();
        vt = propagator * v0;
    } else {
        vt = integrate_adaptive(liouvillian.matrix(), std::move(v0), t);
    }
    return DensityMatrix(devectorize(vt, liouvillian.dim()));
}

SteadyStateReport steady_state(const Superoperator& liouvillian, const SteadyStateOptions& opts)
{
    SteadyStateReport report;
    if (liouvillian.dim() <= kDenseDimLimit) {
        const Matrix dense = liouvillian.dense();
        const KernelAnalysis kernel = svd_kernel(dense, opts.kernel_tol);
        report.kernel_dimension = static_cast<int>(kernel.right.cols());
        report.spectral_gap = slowest_decay_rate(dense);
        if (report.kernel_dimension == 0)
            throw SolverError("steady_state: generator has an empty kernel");
        if (report.kernel_dimension == 1) {
            report.state = finalize_steady_vector(kernel.right.col(0), liouvillian);
        } else {
            // Existence of a unit-trace kernel element still has to hold.
            bool traced = false;
            for (Eigen::Index i = 0; i < kernel.right.cols(); ++i)
                if (std::abs(devectorize(kernel.right.col(i), liouvillian.dim()).trace()) > 1e-9)
                    traced = true;
            if (!traced)
                throw SolverError("steady_state: kernel has no unit-trace element");
        }
        return report;
    }

    report.state = finalize_steady_vector(sparse_trace_solve(liouvillian), liouvillian);
    report.kernel_dimension = 1;
    report.spectral_gap = 0.0;
    return report;
}

DensityMatrix steady_state_direct(const Superoperator& liouvillian, const SteadyStateOptions& opts)
{
    const Eigen::Index d = liouvillian.dim();
    if (d > kDenseDimLimit)
        return *steady_state(liouvillian, opts).state;

    Matrix sys = liouvillian.dense();
    sys.row(0).setZero();
    for (Eigen::Index k = 0; k < d; ++k)
        sys(0, k * d + k) = 1.0;
    Vector rhs = Vector::Zero(d * d);
    rhs(0) = 1.0;
    // rank-revealing: a degenerate kernel leaves the replaced system
    // singular even though any kernel mixture would pass a residual check
    Eigen::FullPivLU<Matrix> lu(sys);
    if (lu.isInvertible()) {
        const Vector x = lu.solve(rhs);
        const double residual = (liouvillian.matrix() * x).norm();
        if (x.allFinite() &&
            residual <= 1e-10 * liouvillian.norm() * std::max(1.0, x.norm())) {
            Matrix rho = hermitize(devectorize(x, d));
            return DensityMatrix(rho / rho.trace().real());
        }
    }

    // Inconsistent direct solve: run the full analysis for a diagnosis.
    const SteadyStateReport report = steady_state(liouvillian, opts);
    if (!report.state) {
        std::ostringstream msg;
        msg << "steady_state_direct: kernel is degenerate (dimension "
            << report.kernel_dimension << ")";
        throw SolverError(msg.str());
    }
    return *report.state;
}

DensityMatrix asymptotic_state(const Superoperator& liouvillian, const DensityMatrix& rho0)
{
    if (rho0.dim() != liouvillian.dim())
        throw std::invalid_argument("asymptotic_state: dimension mismatch");
    const Matrix dense = liouvillian.dense();
    Eigen::ComplexEigenSolver<Matrix> es(dense);
    if (es.info() != Eigen::Success)
        throw SolverError("asymptotic_state: eigendecomposition failed");
    const auto& ev = es.eigenvalues();
    const Matrix& vectors = es.eigenvectors();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);

    const Vector b = vectorize(rho0.matrix());
    Eigen::ColPivHouseholderQR<Matrix> qr(vectors);
    const Vector coeffs = qr.solve(b);
    if ((vectors * coeffs - b).norm() > 1e-8 * std::max(1.0, b.norm()))
        throw SolverError("asymptotic_state: eigenvector basis is numerically defective");

    Vector limit = Vector::Zero(b.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i).real() < -1e-12 * scale)
            continue; // decaying mode
        if (std::abs(ev(i).imag()) > 1e-10 * scale)
            throw SolverError("asymptotic_state: non-decaying oscillatory mode, no limit exists");
        limit += coeffs(i) * vectors.col(i);
    }
    Matrix rho = hermitize(devectorize(limit, liouvillian.dim()));
    if (std::abs(rho.trace() - cd(1.0, 0.0)) > 1e-9)
        throw SolverError("asymptotic_state: projection lost the trace");
    return DensityMatrix(std::move(rho));
}

Resolvent::Resolvent(const Superoperator& liouvillian)
    : dim_(liouvillian.dim()), sparse_(liouvillian.matrix())
{
    if (dim_ <= kDenseDimLimit) {
        dense_ = liouvillian.dense();
        left_kernel_ = svd_kernel(dense_, 1e-10).left;
    } else {
        // large systems: the guard uses the trace functional, which spans
        // the left kernel of any trace-preserving generator with a unique
        // steady state
        Matrix trace_row = Matrix::Zero(dim_ * dim_, 1);
        for (Eigen::Index k = 0; k < dim_; ++k)
            trace_row(k * dim_ + k, 0) = 1.0;
        left_kernel_ = trace_row / trace_row.norm();
    }
}

double Resolvent::kernel_overlap(const Vector& v) const
{
    if (left_kernel_.cols() == 0)
        return 0.0;
    return (left_kernel_.adjoint() * v).norm();
}

Vector Resolvent::solve(double omega, const Vector& v) const
{
    if (dim_ <= kDenseDimLimit) {
        Matrix shifted = dense_;
        shifted.diagonal().array() += cd(0.0, omega);
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(shifted);
        Vector x = cod.solve(v);
        if (!x.allFinite() || (shifted * x - v).norm() > 1e-8 * std::max(1.0, v.norm()))
            throw SolverError(
                "correlation_transform: singular resolvent, correlation does not decay");
        return x;
    }
    SparseMatrix shifted = sparse_;
    SparseMatrix eye(dim_ * dim_, dim_ * dim_);
    eye.setIdentity();
    shifted += cd(0.0, omega) * eye;
    Eigen::SparseLU<SparseMatrix> lu(shifted);
    if (lu.info() != Eigen::Success)
        throw SolverError("correlation_transform: resolvent factorization failed");
    Vector x = lu.solve(v);
    if (!x.allFinite() || (shifted * x - v).norm() > 1e-8 * std::max(1.0, v.norm()))
        throw SolverError("correlation_transform: singular resolvent, correlation does not decay");
    return x;
}

cd correlation_transform(const Superoperator& liouvillian, const DensityMatrix& rho_ss,
                         const Matrix& measure_op, const Matrix& source_op, double omega,
                         SourceSide side)
{
    if (rho_ss.dim() != liouvillian.dim() || measure_op.rows() != liouvillian.dim() ||
        source_op.rows() != liouvillian.dim())
        throw std::invalid_argument("correlation_transform: dimension mismatch");

    const Matrix source = side == SourceSide::left ? Matrix(source_op * rho_ss.matrix())
                                                   : Matrix(rho_ss.matrix() * source_op);
    const Vector v = vectorize(source);
    if (v.norm() == 0.0)
        return cd(0.0, 0.0);

    const Resolvent resolvent(liouvillian);
    if (resolvent.kernel_overlap(v) > 1e-10 * v.norm())
        throw SolverError(
            "correlation_transform: source overlaps the stationary subspace, no decay");
    const Vector x = resolvent.solve(omega, v);
    return -(measure_op * devectorize(x, liouvillian.dim())).trace();
}

} // namespace lambdacav
