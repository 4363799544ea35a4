#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "fluxquant/types.hpp"

namespace fluxquant {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Truncated harmonic-oscillator (number) basis built from the quadratic part
// 4*E_C*n^2 + E_L*phi^2/2 of the circuit. The phase variable is extended, so
// this basis represents it efficiently.
struct BasisSpec {
    int dim;            // truncation dimension, >= 2
    double osc_length;  // oscillator length l = (8*E_C/E_L)^(1/4)
};

BasisSpec make_basis(const CircuitParams& params, int dim);

// Complex square matrix tagged with a hermiticity promise. When the flag is
// set, max |M - M^dagger| stays below 1e-12 in the matrix's native units.
struct OperatorMatrix {
    Matrix mat;
    bool hermitian = false;

    int dim() const { return static_cast<int>(mat.rows()); }
};

// max_ij |M - M^dagger|
double hermiticity_defect(const Matrix& m);

// phi = (l/sqrt(2)) (a + a^dagger): real symmetric, first off-diagonals only.
OperatorMatrix phase_operator(const BasisSpec& basis);

// n = (i/(sqrt(2) l)) (a^dagger - a): imaginary antisymmetric, Hermitian.
// Canonically conjugate to phi: [phi, n] = i away from the truncation edge.
OperatorMatrix charge_operator(const BasisSpec& basis);

// cos(phi + offset) and sin(phi + offset), computed as spectral functions of
// the truncated phi matrix and combined through the angle-addition identities.
std::pair<OperatorMatrix, OperatorMatrix> cos_sin_phase(const BasisSpec& basis, double offset);

// Operator set shared by the Hamiltonian builders and the propagator.
// Everything is built once in the constructor and immutable afterwards, so a
// single instance may be used concurrently from many threads.
class FluxoniumOperators {
public:
    FluxoniumOperators(const CircuitParams& params, int dim);

    const BasisSpec& basis() const { return basis_; }
    int dim() const { return basis_.dim; }

    const RealMatrix& phi() const { return phi_; }
    const RealMatrix& phi_sq() const { return phi_sq_; }        // projection of phi^2
    const RealMatrix& charge_sq() const { return charge_sq_; }  // projection of n^2
    const RealMatrix& cos_phi() const { return cos_phi_; }
    const RealMatrix& sin_phi() const { return sin_phi_; }
    const Matrix& charge() const { return charge_; }

    // Eigendecomposition of n, used to apply exp(i*a*n) (a displacement of
    // phi by a) without forming the exponential.
    const Matrix& charge_eigvecs() const { return charge_eigvecs_; }
    const RealVector& charge_eigvals() const { return charge_eigvals_; }

private:
    BasisSpec basis_;
    RealMatrix phi_, phi_sq_, charge_sq_, cos_phi_, sin_phi_;
    Matrix charge_;
    Matrix charge_eigvecs_;
    RealVector charge_eigvals_;
};

// exp(i*shift*n) applied to a coefficient vector: maps a wavefunction psi(phi)
// to psi(phi + shift).
Vector displace_phase(const FluxoniumOperators& ops, double shift, const Vector& coeffs);

// psi(phi_g) = sum_k coeffs[k] * chi_k(phi_g), with chi_k the normalized
// oscillator eigenfunctions of length l. Evaluated by the upward recurrence on
// the normalized Hermite functions, which keeps every intermediate bounded.
Vector eigenfunction_on_grid(const BasisSpec& basis, const Vector& coeffs,
                             const RealVector& grid);

}  // namespace fluxquant
