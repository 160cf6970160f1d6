// liouville.cpp: GKSL superoperators, fixed points, minimal-dissipation split

#include "puredeco/liouville.hpp"

#include <cmath>
#include <sstream>

#include "puredeco/errors.hpp"

namespace puredeco {

namespace {

Eigen::Index side_from_superop(const Matrix& m)
{
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
    if (m.rows() != m.cols() || n * n != m.rows() || n < 1) {
        throw ValidationError("superoperator matrix must be N^2 x N^2");
    }
    return n;
}

Matrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j)
{
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

void require_unitary(const Matrix& u, Eigen::Index n)
{
    if (u.rows() != n || u.cols() != n) {
        throw ValidationError("basis must be an N x N matrix");
    }
    const double dev = max_abs(u.adjoint() * u - Matrix::Identity(n, n));
    if (dev > 1e-10) {
        std::ostringstream os;
        os << "basis is not orthonormal (max |U^dagger U - I| = " << dev << ")";
        throw ValidationError(os.str());
    }
}

// Hilbert–Schmidt Gram–Schmidt over the reals for Hermitian matrices.
void append_orthonormal(std::vector<Matrix>& basis, Matrix candidate, double tol)
{
    for (const auto& b : basis) {
        const double overlap = (b.adjoint() * candidate).trace().real();
        candidate -= overlap * b;
    }
    const double norm = candidate.norm();
    if (norm > tol) basis.push_back(candidate / norm);
}

std::optional<DensityMatrix> as_state(const Matrix& x)
{
    const Matrix h = hermitize(x);
    const double tr = h.trace().real();
    if (std::abs(tr) < 1e-8 * std::max(1.0, h.norm())) return std::nullopt;
    const Matrix candidate = h / tr;
    if (eig_hermitian(candidate).values.minCoeff() < -kPositivityTol) return std::nullopt;
    try {
        return DensityMatrix::normalized(candidate);
    } catch (const ValidationError&) {
        return std::nullopt;
    }
}

} // namespace

Superoperator::Superoperator(Eigen::Index dim, Matrix m, bool check) : dim_(dim), m_(std::move(m))
{
    if (side_from_superop(m_) != dim_) {
        throw ValidationError("superoperator size does not match system dimension");
    }
    if (!m_.allFinite()) throw ValidationError("superoperator has non-finite entries");
    if (check) check_invariants();
}

Superoperator Superoperator::zero(Eigen::Index dim)
{
    return Superoperator(dim, Matrix::Zero(dim * dim, dim * dim), false);
}

double Superoperator::trace_defect() const
{
    const Vector id = vec(Matrix::Identity(dim_, dim_));
    return (id.adjoint() * m_).cwiseAbs().maxCoeff();
}

double Superoperator::hermiticity_defect() const
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < dim_; ++i) {
        for (Eigen::Index j = 0; j < dim_; ++j) {
            const Matrix e = unit(dim_, i, j);
            const Matrix lhs = puredeco::apply(*this, Matrix(e.adjoint()));
            const Matrix rhs = puredeco::apply(*this, e).adjoint();
            worst = std::max(worst, max_abs(lhs - rhs));
        }
    }
    return worst;
}

void Superoperator::check_invariants(double tol) const
{
    const double scale = std::max(1.0, max_abs(m_));
    if (const double d = trace_defect(); d > tol * scale) {
        std::ostringstream os;
        os << "superoperator is not trace annihilating (defect " << d << ")";
        throw ValidationError(os.str());
    }
    if (const double d = hermiticity_defect(); d > tol * scale) {
        std::ostringstream os;
        os << "superoperator is not Hermiticity preserving (defect " << d << ")";
        throw ValidationError(os.str());
    }
}

Superoperator Superoperator::operator+(const Superoperator& other) const
{
    if (other.dim_ != dim_) throw ValidationError("superoperator dimension mismatch");
    return Superoperator(dim_, m_ + other.m_, false);
}

Superoperator Superoperator::operator*(double s) const
{
    return Superoperator(dim_, m_ * s, false);
}

Vector vec(const Matrix& x)
{
    return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& v, Eigen::Index dim)
{
    if (v.size() != dim * dim) throw ValidationError("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Superoperator build_superoperator(const Matrix& hamiltonian, const std::vector<LindbladTerm>& terms)
{
    const Eigen::Index n = hamiltonian.rows();
    if (n < 1 || hamiltonian.cols() != n) throw ValidationError("Hamiltonian must be square");
    require_hermitian(hamiltonian, "Hamiltonian");
    const Matrix id = Matrix::Identity(n, n);
    const Complex minus_i(0.0, -1.0);

    // −i(H X − X H) -> −i(I ⊗ H − H^T ⊗ I)
    Matrix m = minus_i * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
    for (const auto& term : terms) {
        if (term.op.rows() != n || term.op.cols() != n) {
            throw ValidationError("Lindblad operator dimension does not match Hamiltonian");
        }
        if (!std::isfinite(term.rate)) throw ValidationError("Lindblad rate must be finite");
        const Matrix& L = term.op;
        const Matrix LdL = L.adjoint() * L;
        m += term.rate * (kron(L.conjugate(), L) - 0.5 * kron(id, LdL) - 0.5 * kron(LdL.transpose(), id));
    }
    return Superoperator(n, std::move(m));
}

Matrix apply(const Superoperator& L, const Matrix& x)
{
    if (x.rows() != L.dim() || x.cols() != L.dim()) {
        throw ValidationError("apply: operator dimension does not match superoperator");
    }
    return unvec(L.matrix() * vec(x), L.dim());
}

Matrix apply(const Superoperator& L, const DensityMatrix& rho)
{
    return puredeco::apply(L, rho.matrix());
}

Matrix apply_gksl(const Matrix& hamiltonian, const std::vector<LindbladTerm>& terms, const Matrix& x)
{
    Matrix out = Complex(0.0, -1.0) * commutator(hamiltonian, x);
    for (const auto& term : terms) {
        const Matrix& L = term.op;
        out += term.rate * (L * x * L.adjoint() - 0.5 * anticommutator(L.adjoint() * L, x));
    }
    return out;
}

FixedPointSet instantaneous_fixed_points(const Superoperator& L, double tol)
{
    const Eigen::Index n = L.dim();
    Eigen::JacobiSVD<Matrix> svd(L.matrix(), Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double threshold = tol * smax;

    FixedPointSet out;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (smax > 0.0 && sv(k) > threshold) continue;
        const Matrix x = unvec(svd.matrixV().col(k), n);
        // L preserves Hermiticity, so both Hermitian components lie in the kernel.
        append_orthonormal(out.kernel_basis, hermitize(x), 1e-8);
        append_orthonormal(out.kernel_basis, hermitize(Complex(0.0, -1.0) * x), 1e-8);
    }
    if (out.kernel_basis.empty()) {
        throw NumericalError("no IFP found: generator kernel is empty at the requested tolerance");
    }

    // Positive representatives: the identity projection when I is in the kernel,
    // then each basis element and the pairwise combinations with it.
    const Matrix id = Matrix::Identity(n, n);
    Matrix id_proj = Matrix::Zero(n, n);
    for (const auto& b : out.kernel_basis) id_proj += (b.adjoint() * id).trace().real() * b;
    if (max_abs(id_proj - id) < 1e-8) {
        out.states.push_back(DensityMatrix::maximally_mixed(n));
    }
    auto add_state = [&out](const Matrix& candidate) {
        auto s = as_state(candidate);
        if (!s) return;
        for (const auto& existing : out.states) {
            if (max_abs(existing.matrix() - s->matrix()) < 1e-10) return;
        }
        out.states.push_back(std::move(*s));
    };
    const auto& kb = out.kernel_basis;
    for (std::size_t i = 0; i < kb.size(); ++i) {
        add_state(kb[i]);
        for (std::size_t j = i + 1; j < kb.size(); ++j) {
            add_state(kb[i] + kb[j]);
            add_state(kb[i] - kb[j]);
        }
    }
    return out;
}

Matrix effective_hamiltonian(const Superoperator& L, const std::optional<Matrix>& basis)
{
    const Eigen::Index n = L.dim();
    const Matrix u = basis.value_or(Matrix::Identity(n, n));
    require_unitary(u, n);

    Matrix acc = Matrix::Zero(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const Matrix ket_m_bra_k = u.col(m) * u.col(k).adjoint();
            const Matrix ket_k_bra_m = u.col(k) * u.col(m).adjoint();
            acc += commutator(ket_k_bra_m, puredeco::apply(L, ket_m_bra_k));
        }
    }
    Matrix k = acc / Complex(0.0, 2.0 * static_cast<double>(n));
    k = hermitize(k);
    k -= (k.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
    return k;
}

MinimalDissipationForm to_minimal_dissipation(const Matrix& hamiltonian,
                                              const std::vector<LindbladTerm>& terms)
{
    const Eigen::Index n = hamiltonian.rows();
    require_hermitian(hamiltonian, "Hamiltonian");
    const Matrix id = Matrix::Identity(n, n);
    const Complex half_i(0.0, 0.5);

    MinimalDissipationForm out;
    Matrix k = hamiltonian;
    for (const auto& term : terms) {
        if (term.op.rows() != n || term.op.cols() != n) {
            throw ValidationError("Lindblad operator dimension does not match Hamiltonian");
        }
        const Complex c = term.op.trace() / static_cast<double>(n);
        const Matrix traceless = term.op - c * id;
        // γ D[L' + c] = γ D[L'] − i[(iγ/2)(c* L' − c L'†), ·]
        k += term.rate * half_i * (std::conj(c) * traceless - c * Matrix(traceless.adjoint()));
        out.terms.push_back({term.rate, traceless});
    }
    k = hermitize(k);
    k -= (k.trace() / static_cast<double>(n)) * id;
    out.hamiltonian = std::move(k);
    return out;
}

void DephasingCoefficients::validate(double tol) const
{
    const Eigen::Index n = gamma.rows();
    if (n < 1 || gamma.cols() != n) throw ValidationError("gamma must be square");
    require_unitary(basis, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(gamma(j, j)) > tol) {
            std::ostringstream os;
            os << "dephasing coefficient gamma_" << j << j << " = " << gamma(j, j) << " must vanish";
            throw ValidationError(os.str());
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(gamma(j, k) - std::conj(gamma(k, j))) > tol) {
                std::ostringstream os;
                os << "dephasing coefficients violate gamma_jk = conj(gamma_kj) at (" << j << "," << k << ")";
                throw ValidationError(os.str());
            }
        }
    }
}

DephasingCoefficients dephasing_coefficients(const Superoperator& L, const Matrix& basis, double tol)
{
    const Eigen::Index n = L.dim();
    require_unitary(basis, n);

    DephasingCoefficients out{Matrix::Zero(n, n), basis};
    double worst = 0.0;
    std::string worst_label;
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
            // γ_jkln = ⟨j| L[|k⟩⟨l|] |n⟩
            const Matrix image = basis.adjoint() * puredeco::apply(L, Matrix(basis.col(k) * basis.col(l).adjoint())) * basis;
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index m = 0; m < n; ++m) {
                    if (j == k && m == l) {
                        out.gamma(k, l) = image(j, m);
                    } else if (std::abs(image(j, m)) > worst) {
                        worst = std::abs(image(j, m));
                        std::ostringstream os;
                        os << "gamma_" << j << k << l << m << " = " << image(j, m);
                        worst_label = os.str();
                    }
                }
            }
        }
    }
    const double scale = std::max(1.0, max_abs(out.gamma));
    if (worst > tol * scale) {
        throw ValidationError("not a pure-decoherence generator in this basis; largest violator " + worst_label);
    }
    out.validate(std::max(kSuperopTol, tol) * scale);
    return out;
}

Superoperator dephasing_superoperator(const DephasingCoefficients& c)
{
    c.validate();
    const Eigen::Index n = c.dim();
    Matrix m = Matrix::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Matrix pj = c.basis.col(j) * c.basis.col(j).adjoint();
        for (Eigen::Index k = 0; k < n; ++k) {
            if (c.gamma(j, k) == Complex(0.0, 0.0)) continue;
            const Matrix pk = c.basis.col(k) * c.basis.col(k).adjoint();
            // vec(P_j X P_k) = (P_k^T ⊗ P_j) vec(X)
            m += c.gamma(j, k) * kron(pk.transpose(), pj);
        }
    }
    return Superoperator(n, std::move(m));
}

Matrix dephasing_effective_hamiltonian(const DephasingCoefficients& c)
{
    c.validate();
    const Eigen::Index n = c.dim();
    Matrix diag = Matrix::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        double column_sum = 0.0;
        for (Eigen::Index row = 0; row < n; ++row) column_sum += c.gamma(row, col).imag();
        diag(col, col) = column_sum / static_cast<double>(n);
    }
    return c.basis * diag * c.basis.adjoint();
}

} // namespace puredeco
