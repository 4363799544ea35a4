#include "fluxquant/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace fluxquant {

namespace {

// Spectral functions of the truncated phi matrix: diagonalize once, map the
// eigenvalues through cos/sin, transform back. Results are symmetrized so the
// hermiticity promise holds to the last bit.
std::pair<RealMatrix, RealMatrix> cos_sin_of(const RealMatrix& phi) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(phi);
    const RealVector& vals = solver.eigenvalues();
    const RealMatrix& vecs = solver.eigenvectors();
    RealMatrix cos_m = vecs * vals.array().cos().matrix().asDiagonal() * vecs.transpose();
    RealMatrix sin_m = vecs * vals.array().sin().matrix().asDiagonal() * vecs.transpose();
    cos_m = 0.5 * (cos_m + cos_m.transpose()).eval();
    sin_m = 0.5 * (sin_m + sin_m.transpose()).eval();
    return {cos_m, sin_m};
}

RealMatrix build_phi(const BasisSpec& basis) {
    const int d = basis.dim;
    const double c = basis.osc_length / std::sqrt(2.0);
    RealMatrix phi = RealMatrix::Zero(d, d);
    for (int k = 0; k + 1 < d; ++k) {
        phi(k, k + 1) = c * std::sqrt(double(k + 1));
        phi(k + 1, k) = phi(k, k + 1);
    }
    return phi;
}

}  // namespace

BasisSpec make_basis(const CircuitParams& params, int dim) {
    if (!(std::isfinite(params.e_c) && params.e_c > 0.0) ||
        !(std::isfinite(params.e_l) && params.e_l > 0.0)) {
        throw std::invalid_argument("make_basis: E_C and E_L must be positive and finite");
    }
    if (dim < 2) throw std::invalid_argument("make_basis: dim must be at least 2");
    return BasisSpec{dim, std::pow(8.0 * params.e_c / params.e_l, 0.25)};
}

double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix phase_operator(const BasisSpec& basis) {
    return OperatorMatrix{build_phi(basis).cast<std::complex<double>>(), true};
}

OperatorMatrix charge_operator(const BasisSpec& basis) {
    const int d = basis.dim;
    const double c = 1.0 / (std::sqrt(2.0) * basis.osc_length);
    Matrix n = Matrix::Zero(d, d);
    for (int k = 0; k + 1 < d; ++k) {
        const double v = c * std::sqrt(double(k + 1));
        n(k, k + 1) = std::complex<double>(0.0, -v);
        n(k + 1, k) = std::complex<double>(0.0, v);
    }
    return OperatorMatrix{std::move(n), true};
}

std::pair<OperatorMatrix, OperatorMatrix> cos_sin_phase(const BasisSpec& basis, double offset) {
    if (!std::isfinite(offset)) throw std::invalid_argument("cos_sin_phase: non-finite offset");
    auto [cos0, sin0] = cos_sin_of(build_phi(basis));
    if (offset == 0.0) {
        return {OperatorMatrix{cos0.cast<std::complex<double>>(), true},
                OperatorMatrix{sin0.cast<std::complex<double>>(), true}};
    }
    const double c = std::cos(offset), s = std::sin(offset);
    RealMatrix cos_off = c * cos0 - s * sin0;
    RealMatrix sin_off = s * cos0 + c * sin0;
    return {OperatorMatrix{cos_off.cast<std::complex<double>>(), true},
            OperatorMatrix{sin_off.cast<std::complex<double>>(), true}};
}

FluxoniumOperators::FluxoniumOperators(const CircuitParams& params, int dim)
    : basis_(make_basis(params, dim)) {
    params.validate();
    const int d = dim;
    const double l = basis_.osc_length;

    phi_ = build_phi(basis_);

    // phi^2 and n^2 as projections of the exact operators (Galerkin form):
    // phi^2 = (l^2/2)(2N + 1 + a^2 + a^dag^2), n^2 = (2N + 1 - a^2 - a^dag^2)/(2 l^2).
    phi_sq_ = RealMatrix::Zero(d, d);
    charge_sq_ = RealMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        phi_sq_(k, k) = 0.5 * l * l * double(2 * k + 1);
        charge_sq_(k, k) = double(2 * k + 1) / (2.0 * l * l);
    }
    for (int k = 0; k + 2 < d; ++k) {
        const double up = std::sqrt(double(k + 1)) * std::sqrt(double(k + 2));
        phi_sq_(k, k + 2) = 0.5 * l * l * up;
        phi_sq_(k + 2, k) = phi_sq_(k, k + 2);
        charge_sq_(k, k + 2) = -up / (2.0 * l * l);
        charge_sq_(k + 2, k) = charge_sq_(k, k + 2);
    }

    auto [cos0, sin0] = cos_sin_of(phi_);
    cos_phi_ = std::move(cos0);
    sin_phi_ = std::move(sin0);

    charge_ = charge_operator(basis_).mat;
    Eigen::SelfAdjointEigenSolver<Matrix> n_solver(charge_);
    charge_eigvals_ = n_solver.eigenvalues();
    charge_eigvecs_ = n_solver.eigenvectors();
}

Vector displace_phase(const FluxoniumOperators& ops, double shift, const Vector& coeffs) {
    if (coeffs.size() != ops.dim()) {
        throw std::invalid_argument("displace_phase: coefficient size does not match basis");
    }
    if (shift == 0.0) return coeffs;
    const std::complex<double> i_unit(0.0, 1.0);
    Vector in_eigenbasis = ops.charge_eigvecs().adjoint() * coeffs;
    in_eigenbasis.array() *= (i_unit * shift * ops.charge_eigvals().array()).exp();
    return ops.charge_eigvecs() * in_eigenbasis;
}

Vector eigenfunction_on_grid(const BasisSpec& basis, const Vector& coeffs,
                             const RealVector& grid) {
    if (coeffs.size() != basis.dim) {
        throw std::invalid_argument("eigenfunction_on_grid: coefficient size mismatch");
    }
    const double l = basis.osc_length;
    const double norm0 = std::pow(M_PI * l * l, -0.25);
    Vector out = Vector::Zero(grid.size());
    for (Eigen::Index g = 0; g < grid.size(); ++g) {
        const double x = grid[g] / l;
        // chi_k = x*sqrt(2/k)*chi_{k-1} - sqrt((k-1)/k)*chi_{k-2}; every term
        // stays of order one, so the recurrence is safe to high k.
        double prev2 = 0.0;
        double prev1 = norm0 * std::exp(-0.5 * x * x);
        std::complex<double> acc = coeffs[0] * prev1;
        for (int k = 1; k < basis.dim; ++k) {
            const double cur =
                x * std::sqrt(2.0 / k) * prev1 - std::sqrt(double(k - 1) / k) * prev2;
            acc += coeffs[k] * cur;
            prev2 = prev1;
            prev1 = cur;
        }
        out[g] = acc;
    }
    return out;
}

}  // namespace fluxquant
