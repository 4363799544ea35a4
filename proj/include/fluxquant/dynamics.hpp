#pragma once

#include <functional>

#include "fluxquant/hamiltonian.hpp"

namespace fluxquant {

enum class PulseShape { Linear, Smoothstep };

PulseShape pulse_shape_from_string(const std::string& s);
const char* to_string(PulseShape s);

// Flux ramp from flux_start to flux_end beginning at t0 and lasting rise_ns.
// Constant before and after; the smoothstep shape is C^1 at the edges.
struct FluxPulse {
    double flux_start;  // Phi/Phi_0
    double flux_end;
    double rise_ns;
    PulseShape shape = PulseShape::Linear;
    double t0_ns = 0.0;

    void validate() const;
};

struct FluxSample {
    double flux;  // Phi/Phi_0
    double rate;  // dphi_ext/dt, rad/ns
};

FluxSample flux_profile(const FluxPulse& pulse, double t_ns);

// Coefficient vector in the oscillator basis, tagged with the variable frame
// it lives in. Both junction allocations share the junction frame.
struct StateVector {
    Vector coeffs;
    FluxAllocation frame = FluxAllocation::Inductor;

    double norm() const { return coeffs.norm(); }
};

bool frames_compatible(FluxAllocation frame, FluxAllocation allocation);

struct PropagatorConfig {
    double dt_ns = 5e-4;
    double t_end_ns = 0.0;
    // When set, the propagation is repeated with halved steps and the result
    // is accepted only once one halving changes no population amplitude by
    // more than 1e-6; two failed halvings raise AccuracyError.
    bool verify_dt = true;
};

// Called after every accepted step (and once at t = 0) with the current time
// and coefficient vector.
using StepObserver = std::function<void(double t_ns, const Vector& coeffs)>;

// Integrates i d(psi)/dt = 2*pi*H(t) psi with the per-step midpoint
// exponential U_k = exp(-i*2*pi*H(t_k + dt/2)*dt). Steps are aligned with the
// ramp edges so no step straddles a kink of the pulse. The exponential is
// applied to the state by a sub-stepped Taylor expansion converged to machine
// precision, so the norm is conserved to roundoff.
StateVector propagate(const CircuitParams& params, FluxAllocation allocation,
                      const FluxPulse& pulse, const StateVector& psi0,
                      const PropagatorConfig& cfg, const FluxoniumOperators& ops,
                      const StepObserver& observer = {});

enum class GaugeDirection { ToJunction, ToInductor };

// Frame map between the inductor and junction descriptions at a given flux:
// psi_junction = exp(+i*phi_ext*n) psi_inductor. Unitary, so populations of
// corresponding eigenstates are identical in both frames.
StateVector gauge_transform(const StateVector& psi, ExternalFlux flux, GaugeDirection direction,
                            const FluxoniumOperators& ops);

// p_m = |<m|psi>|^2 against the static eigenstates at flux_b built in the same
// frame as psi.
RealVector final_populations(const StateVector& psi, const CircuitParams& params,
                             ExternalFlux flux_b, const FluxoniumOperators& ops, int levels);

// Ground state of the static Hamiltonian at `flux`, tagged with the matching
// frame; convenience for preparing pulse initial states.
StateVector ground_state(const CircuitParams& params, ExternalFlux flux,
                         FluxAllocation allocation, const FluxoniumOperators& ops);

}  // namespace fluxquant
