#include "fluxquant/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fluxquant/errors.hpp"

namespace fluxquant {

namespace {

double inf_norm(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// psi <- exp(-i*theta*h) psi by a Taylor series applied to the vector,
// converged to machine precision. Callers keep theta*|h| of order one by
// sub-stepping, so the series is short and free of cancellation.
void expm_apply(const Matrix& h, double theta, Vector& psi, Vector& term, Vector& tmp) {
    const std::complex<double> factor(0.0, -theta);
    term = psi;
    for (int k = 1; k <= 80; ++k) {
        tmp.noalias() = h * term;
        term = (factor / double(k)) * tmp;
        psi += term;
        if (k > 2 && term.cwiseAbs().maxCoeff() < 1e-17) return;
    }
    throw AccuracyError("expm_apply: Taylor series failed to converge", 0.0);
}

// Matrices and norm bounds shared by every step of one propagation run.
struct StepContext {
    FluxAllocation allocation;
    CircuitParams params;
    Matrix base;  // static part independent of the instantaneous flux
    Matrix phi, n, cos_phi, sin_phi;
    double h_norm_bound = 0.0;
    Matrix h;  // workspace
    Vector term, tmp;

    StepContext(const CircuitParams& p, FluxAllocation alloc, const FluxPulse& pulse,
                const FluxoniumOperators& ops)
        : allocation(alloc), params(p) {
        const int d = ops.dim();
        if (alloc == FluxAllocation::Inductor) {
            base = (4.0 * p.e_c * ops.charge_sq() - p.e_j * ops.cos_phi() +
                    0.5 * p.e_l * ops.phi_sq())
                       .cast<std::complex<double>>();
            phi = ops.phi().cast<std::complex<double>>();
            const double pe_max =
                std::max(std::abs(two_pi * pulse.flux_start), std::abs(two_pi * pulse.flux_end));
            h_norm_bound = inf_norm(base) + p.e_l * pe_max * inf_norm(phi) +
                           0.5 * p.e_l * pe_max * pe_max;
        } else {
            base = (4.0 * p.e_c * ops.charge_sq() + 0.5 * p.e_l * ops.phi_sq())
                       .cast<std::complex<double>>();
            cos_phi = ops.cos_phi().cast<std::complex<double>>();
            sin_phi = ops.sin_phi().cast<std::complex<double>>();
            n = ops.charge();
            // both pulse shapes keep |rate| <= 1.5 * |dphi| / rise
            const double rate_max =
                1.5 * two_pi * std::abs(pulse.flux_end - pulse.flux_start) / pulse.rise_ns;
            h_norm_bound = inf_norm(base) + p.e_j * (inf_norm(cos_phi) + inf_norm(sin_phi)) +
                           (rate_max / two_pi) * inf_norm(n);
        }
        h.resize(d, d);
        term.resize(d);
        tmp.resize(d);
    }

    void step(const FluxSample& mid, double dt, Vector& psi) {
        const double pe = two_pi * mid.flux;
        if (allocation == FluxAllocation::Inductor) {
            h = base;
            if (pe != 0.0) {
                h -= (params.e_l * pe) * phi;
                h.diagonal().array() += 0.5 * params.e_l * pe * pe;
            }
        } else {
            h = base;
            h -= (params.e_j * std::cos(pe)) * cos_phi;
            h += (params.e_j * std::sin(pe)) * sin_phi;
            if (allocation == FluxAllocation::JunctionComplete && mid.rate != 0.0) {
                h -= (mid.rate / two_pi) * n;
            }
        }
        const double theta = two_pi * dt;
        const int substeps = std::max(1, static_cast<int>(std::ceil(theta * h_norm_bound)));
        for (int s = 0; s < substeps; ++s) expm_apply(h, theta / substeps, psi, term, tmp);
    }
};

Vector run_propagation(const CircuitParams& params, FluxAllocation allocation,
                       const FluxPulse& pulse, const Vector& psi0, double dt, double t_end,
                       const FluxoniumOperators& ops, const StepObserver& observer) {
    StepContext ctx(params, allocation, pulse, ops);
    Vector psi = psi0;
    if (observer) observer(0.0, psi);

    // Split at the ramp edges so no step straddles a kink of the profile.
    double boundaries[4] = {0.0, pulse.t0_ns, pulse.t0_ns + pulse.rise_ns, t_end};
    for (int seg = 0; seg < 3; ++seg) {
        const double a = std::clamp(boundaries[seg], 0.0, t_end);
        const double b = std::clamp(boundaries[seg + 1], 0.0, t_end);
        if (b - a <= 0.0) continue;
        const int n_steps = std::max(1, static_cast<int>(std::ceil((b - a) / dt - 1e-12)));
        const double h_step = (b - a) / n_steps;
        for (int i = 0; i < n_steps; ++i) {
            const double t_mid = a + (i + 0.5) * h_step;
            ctx.step(flux_profile(pulse, t_mid), h_step, psi);
            if (observer) observer(i + 1 == n_steps ? b : a + (i + 1) * h_step, psi);
        }
    }
    return psi;
}

double population_change(const Vector& x, const Vector& y) {
    return (x.cwiseAbs() - y.cwiseAbs()).cwiseAbs().maxCoeff();
}

}  // namespace

PulseShape pulse_shape_from_string(const std::string& s) {
    if (s == "linear") return PulseShape::Linear;
    if (s == "smoothstep") return PulseShape::Smoothstep;
    throw std::invalid_argument("unknown pulse shape '" + s +
                                "' (expected linear|smoothstep)");
}

const char* to_string(PulseShape s) {
    return s == PulseShape::Linear ? "linear" : "smoothstep";
}

void FluxPulse::validate() const {
    if (!std::isfinite(flux_start) || !std::isfinite(flux_end) || !std::isfinite(t0_ns) ||
        !(std::isfinite(rise_ns) && rise_ns > 0.0)) {
        throw std::invalid_argument("FluxPulse: fluxes and t0 must be finite, rise_ns > 0");
    }
}

FluxSample flux_profile(const FluxPulse& pulse, double t_ns) {
    pulse.validate();
    if (t_ns <= pulse.t0_ns) return {pulse.flux_start, 0.0};
    if (t_ns >= pulse.t0_ns + pulse.rise_ns) return {pulse.flux_end, 0.0};
    const double u = (t_ns - pulse.t0_ns) / pulse.rise_ns;
    const double span = pulse.flux_end - pulse.flux_start;
    if (pulse.shape == PulseShape::Linear) {
        return {pulse.flux_start + span * u, two_pi * span / pulse.rise_ns};
    }
    const double s = u * u * (3.0 - 2.0 * u);
    return {pulse.flux_start + span * s, two_pi * span * 6.0 * u * (1.0 - u) / pulse.rise_ns};
}

bool frames_compatible(FluxAllocation frame, FluxAllocation allocation) {
    return is_junction(frame) == is_junction(allocation);
}

StateVector propagate(const CircuitParams& params, FluxAllocation allocation,
                      const FluxPulse& pulse, const StateVector& psi0,
                      const PropagatorConfig& cfg, const FluxoniumOperators& ops,
                      const StepObserver& observer) {
    params.validate();
    pulse.validate();
    if (!(cfg.dt_ns > 0.0) || !(cfg.t_end_ns > pulse.t0_ns + pulse.rise_ns)) {
        throw std::invalid_argument(
            "PropagatorConfig: dt must be positive and t_end past the ramp");
    }
    if (psi0.coeffs.size() != ops.dim()) {
        throw std::invalid_argument("propagate: psi0 size does not match basis");
    }
    if (!frames_compatible(psi0.frame, allocation)) {
        throw ContractViolationError("propagate: psi0 frame does not match the allocation");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("propagate: psi0 must be normalized");
    }

    Vector result = run_propagation(params, allocation, pulse, psi0.coeffs, cfg.dt_ns,
                                    cfg.t_end_ns, ops, observer);
    if (cfg.verify_dt) {
        const double tol = 1e-6;
        Vector half = run_propagation(params, allocation, pulse, psi0.coeffs, cfg.dt_ns / 2,
                                      cfg.t_end_ns, ops, {});
        const double d1 = population_change(result, half);
        if (d1 > tol) {
            Vector quarter = run_propagation(params, allocation, pulse, psi0.coeffs,
                                             cfg.dt_ns / 4, cfg.t_end_ns, ops, {});
            const double d2 = population_change(half, quarter);
            if (d2 > tol) {
                std::ostringstream msg;
                msg << "propagate: no step-size convergence at dt = " << cfg.dt_ns
                    << " ns (halving changed amplitudes by " << d1 << ", then " << d2 << ")";
                throw AccuracyError(msg.str(), d2);
            }
            // The requested dt was too coarse; fall back to the converged run.
            if (observer) {
                half = run_propagation(params, allocation, pulse, psi0.coeffs, cfg.dt_ns / 2,
                                       cfg.t_end_ns, ops, observer);
            }
            result = std::move(half);
        }
    }
    return StateVector{std::move(result), allocation};
}

StateVector gauge_transform(const StateVector& psi, ExternalFlux flux,
                            GaugeDirection direction, const FluxoniumOperators& ops) {
    const bool to_junction = direction == GaugeDirection::ToJunction;
    if (to_junction && is_junction(psi.frame)) {
        throw ContractViolationError("gauge_transform: state is already in the junction frame");
    }
    if (!to_junction && !is_junction(psi.frame)) {
        throw ContractViolationError("gauge_transform: state is already in the inductor frame");
    }
    const double shift = to_junction ? flux.reduced() : -flux.reduced();
    return StateVector{displace_phase(ops, shift, psi.coeffs),
                       to_junction ? FluxAllocation::JunctionComplete
                                   : FluxAllocation::Inductor};
}

RealVector final_populations(const StateVector& psi, const CircuitParams& params,
                             ExternalFlux flux_b, const FluxoniumOperators& ops, int levels) {
    if (psi.coeffs.size() != ops.dim()) {
        throw ContractViolationError("final_populations: state size does not match basis");
    }
    const FluxAllocation static_alloc = is_junction(psi.frame)
                                            ? FluxAllocation::JunctionIncomplete
                                            : FluxAllocation::Inductor;
    const Spectrum spec = solve_static(params, flux_b, static_alloc, ops, levels);
    return (spec.states.adjoint() * psi.coeffs).cwiseAbs2();
}

StateVector ground_state(const CircuitParams& params, ExternalFlux flux,
                         FluxAllocation allocation, const FluxoniumOperators& ops) {
    const FluxAllocation static_alloc = is_junction(allocation)
                                            ? FluxAllocation::JunctionIncomplete
                                            : FluxAllocation::Inductor;
    const Spectrum spec = solve_static(params, flux, static_alloc, ops, 1);
    return StateVector{spec.states.col(0), allocation};
}

}  // namespace fluxquant
