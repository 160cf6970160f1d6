// linops.cpp: Dense Hermitian algebra, entropies, partial trace

#include "puredeco/linops.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "puredeco/errors.hpp"

namespace puredeco {

namespace {

void validate_state(const Matrix& m, double positivity_tol)
{
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw ValidationError("density matrix must be square and non-empty");
    }
    if (!m.allFinite()) {
        throw ValidationError("density matrix has non-finite entries");
    }
    require_hermitian(m, "density matrix");
    const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
    if (tr_err > kTraceTol) {
        std::ostringstream os;
        os << "density matrix trace deviates from 1 by " << tr_err;
        throw ValidationError(os.str());
    }
    const double lmin = eig_hermitian(m).values.minCoeff();
    if (lmin < -positivity_tol) {
        std::ostringstream os;
        os << "density matrix has negative eigenvalue " << lmin;
        throw ValidationError(os.str());
    }
}

} // namespace

DensityMatrix::DensityMatrix(Matrix m, double positivity_tol) : m_(std::move(m))
{
    validate_state(m_, positivity_tol);
}

DensityMatrix DensityMatrix::normalized(const Matrix& m, double positivity_tol)
{
    Matrix h = hermitize(m);
    const double tr = h.trace().real();
    if (!(std::abs(tr) > 0.0)) {
        throw ValidationError("cannot normalize an operator with zero trace");
    }
    return DensityMatrix(h / tr, positivity_tol);
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim)
{
    if (dim < 1) throw ValidationError("dimension must be positive");
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const Vector& psi)
{
    const double n = psi.norm();
    if (!(n > 0.0)) throw ValidationError("state vector must be non-zero");
    const Vector u = psi / n;
    return DensityMatrix::normalized(u * u.adjoint());
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> populations)
{
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(populations.size()),
                            static_cast<Eigen::Index>(populations.size()));
    for (std::size_t i = 0; i < populations.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = populations[i];
    }
    return DensityMatrix(std::move(m));
}

double max_abs(const Matrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol)
{
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

Matrix hermitize(const Matrix& m)
{
    return 0.5 * (m + m.adjoint());
}

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix commutator(const Matrix& a, const Matrix& b)
{
    return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b)
{
    return a * b + b * a;
}

void require_hermitian(const Matrix& a, const char* what, double tol)
{
    if (a.rows() != a.cols()) {
        throw ValidationError(std::string(what) + " must be square");
    }
    const double dev = max_abs(a - a.adjoint());
    if (dev > tol) {
        std::ostringstream os;
        os << what << " is not Hermitian (max |A - A^dagger| = " << dev << ")";
        throw ValidationError(os.str());
    }
}

HermitianEigen eig_hermitian(const Matrix& a, double tol)
{
    require_hermitian(a, "eig_hermitian input", tol);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigendecomposition failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix hermitian_function(const Matrix& a, const std::function<double(double)>& f)
{
    const HermitianEigen e = eig_hermitian(a);
    RealVector fv(e.values.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(e.values(i));
    return e.vectors * fv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

RealVector clipped_spectrum(const DensityMatrix& rho)
{
    RealVector lam = eig_hermitian(rho.matrix()).values;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -kEigenClip) {
            std::ostringstream os;
            os << "state has eigenvalue " << lam(i) << " below the clipping threshold";
            throw ValidationError(os.str());
        }
        if (lam(i) < 0.0) lam(i) = 0.0;
    }
    return lam;
}

Matrix log_state(const DensityMatrix& rho, double floor)
{
    const HermitianEigen e = eig_hermitian(rho.matrix());
    RealVector lv(e.values.size());
    for (Eigen::Index i = 0; i < lv.size(); ++i) {
        if (e.values(i) <= floor) {
            std::ostringstream os;
            os << "ln(rho) undefined: eigenvalue " << e.values(i) << " is not above " << floor;
            throw DomainError(os.str());
        }
        lv(i) = std::log(e.values(i));
    }
    return e.vectors * lv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

double von_neumann_entropy(const DensityMatrix& rho)
{
    const RealVector lam = clipped_spectrum(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > 0.0) s -= lam(i) * std::log(lam(i));
    }
    return s;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, double support_tol)
{
    if (rho.dim() != sigma.dim()) {
        throw ValidationError("relative_entropy: dimension mismatch");
    }
    const RealVector lam = clipped_spectrum(rho);
    double rho_log_rho = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > 0.0) rho_log_rho += lam(i) * std::log(lam(i));
    }

    const HermitianEigen es = eig_hermitian(sigma.matrix());
    double rho_log_sigma = 0.0;
    for (Eigen::Index j = 0; j < es.values.size(); ++j) {
        const Vector v = es.vectors.col(j);
        const double weight = (v.adjoint() * rho.matrix() * v)(0, 0).real();
        if (es.values(j) > support_tol) {
            rho_log_sigma += weight * std::log(es.values(j));
        } else if (weight > support_tol) {
            std::ostringstream os;
            os << "relative_entropy: supp(rho) not contained in supp(sigma); sigma eigenvalue "
               << es.values(j) << " carries rho weight " << weight;
            throw DomainError(os.str());
        }
    }
    return rho_log_rho - rho_log_sigma;
}

Matrix partial_trace(const Matrix& op, std::span<const Eigen::Index> dims, std::size_t keep)
{
    if (dims.empty() || keep >= dims.size()) {
        throw ValidationError("partial_trace: keep index out of range");
    }
    Eigen::Index total = 1;
    for (const auto d : dims) {
        if (d < 1) throw ValidationError("partial_trace: subsystem dimensions must be positive");
        total *= d;
    }
    if (op.rows() != total || op.cols() != total) {
        throw ValidationError("partial_trace: operator dimension does not match product of dims");
    }
    Eigen::Index left = 1;
    for (std::size_t i = 0; i < keep; ++i) left *= dims[i];
    const Eigen::Index mid = dims[keep];
    const Eigen::Index right = total / (left * mid);

    Matrix out = Matrix::Zero(mid, mid);
    for (Eigen::Index l = 0; l < left; ++l) {
        for (Eigen::Index a = 0; a < mid; ++a) {
            for (Eigen::Index b = 0; b < mid; ++b) {
                const Eigen::Index row0 = (l * mid + a) * right;
                const Eigen::Index col0 = (l * mid + b) * right;
                Complex acc = 0.0;
                for (Eigen::Index r = 0; r < right; ++r) acc += op(row0 + r, col0 + r);
                out(a, b) += acc;
            }
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Eigen::Index> dims,
                            std::size_t keep)
{
    return DensityMatrix::normalized(partial_trace(rho.matrix(), dims, keep));
}

} // namespace puredeco
