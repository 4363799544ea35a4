#pragma once

#include <utility>
#include <vector>

#include "fluxquant/operators.hpp"
#include "fluxquant/types.hpp"

// Units used throughout: h = 1, energies in GHz, time in ns, flux in units of
// the flux quantum, phases in radians. In these units the charge term that the
// junction allocation acquires under time-dependent flux, -2e*n*dPhi/dt, reads
// -(1/(2*pi)) * n * dphi_ext/dt GHz with the rate in rad/ns, because
// 2e*Phi_0/(2*pi) = hbar.

namespace fluxquant {

// Lowest eigenpairs of a static fluxonium Hamiltonian, tagged with the inputs
// that produced them. Eigenvector phases are fixed so that the coefficient of
// largest magnitude is real and positive.
struct Spectrum {
    RealVector energies;  // ascending, GHz
    Matrix states;        // eigenvector columns in the oscillator basis
    ExternalFlux flux;
    FluxAllocation allocation = FluxAllocation::Inductor;
    CircuitParams params{};

    int levels() const { return static_cast<int>(energies.size()); }
};

struct PotentialMinimum {
    double location;  // radians
    double value;     // GHz
};

// Local minima of the classical potential, sorted by value (ties by location).
struct PotentialAnalysis {
    std::vector<PotentialMinimum> minima;
    FluxAllocation allocation = FluxAllocation::Inductor;
    ExternalFlux flux;
};

struct FluxSpectrumRow {
    double flux;          // Phi/Phi_0
    RealVector energies;  // GHz
};

// Static Hamiltonian:
//   Inductor:  4*E_C*n^2 - E_J*cos(phi)           + E_L*(phi - phi_ext)^2/2
//   Junction:  4*E_C*n^2 - E_J*cos(phi + phi_ext) + E_L*phi^2/2
// Both junction variants coincide at zero flux rate.
OperatorMatrix build_static(const CircuitParams& params, ExternalFlux flux,
                            FluxAllocation allocation, const FluxoniumOperators& ops);

// Time-dependent Hamiltonian at one instant. flux_rate is dphi_ext/dt in
// rad/ns; the inductor allocation ignores it, the complete junction allocation
// adds -(flux_rate/(2*pi))*n, and the incomplete one wrongly drops that term.
OperatorMatrix build_timedep(const CircuitParams& params, double flux_frac, double flux_rate,
                             FluxAllocation allocation, const FluxoniumOperators& ops);

// Lowest k eigenpairs of a Hermitian matrix, phase-fixed. The tag arguments
// are stored in the returned Spectrum.
Spectrum diagonalize(const OperatorMatrix& h, int k, const CircuitParams& params,
                     ExternalFlux flux, FluxAllocation allocation);

// build_static + diagonalize.
Spectrum solve_static(const CircuitParams& params, ExternalFlux flux,
                      FluxAllocation allocation, const FluxoniumOperators& ops, int k);

// One row per flux value, lowest `levels` energies; optionally referenced to
// the ground state.
std::vector<FluxSpectrumRow> spectrum_vs_flux(const CircuitParams& params,
                                              const std::vector<double>& flux_list, int levels,
                                              const FluxoniumOperators& ops,
                                              bool relative_to_ground = false);

double potential_value(const CircuitParams& params, ExternalFlux flux,
                       FluxAllocation allocation, double phi);

RealVector potential_curve(const CircuitParams& params, ExternalFlux flux,
                           FluxAllocation allocation, const RealVector& grid);

// All local minima in [window_lo, window_hi] (width must be >= 2*pi), located
// by dense sampling followed by Newton refinement to |V'| < 1e-9 GHz/rad.
PotentialAnalysis find_minima(const CircuitParams& params, ExternalFlux flux,
                              FluxAllocation allocation, double window_lo, double window_hi);

// First-order shift of the global potential minimum under phi_ext ->
// phi_ext + delta_phi, from the exact implicit-derivative fractions:
//   Inductor:  E_L / (E_L + E_J*cos(phi_bar)) * delta_phi
//   Junction: -E_J*c / (E_L + E_J*c) * delta_phi,  c = cos(phi_bar + phi_ext)
// phi_bar is the global minimum of the chosen allocation's potential; at exact
// degeneracy the lower-phi minimum is used. The junction-frame shift is large
// (magnitude near delta_phi when E_J >> E_L) while the inductor-frame one is
// small (near (E_L/E_J)*delta_phi).
double perturbative_shift(const CircuitParams& params, ExternalFlux flux,
                          FluxAllocation allocation, double delta_phi);

}  // namespace fluxquant
