#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fluxquant {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Circuit energies in frequency units (h = 1): every value is E/h in GHz.
struct CircuitParams {
    double e_c;  // charging energy
    double e_j;  // Josephson energy
    double e_l;  // inductive energy

    void validate() const {
        if (!(std::isfinite(e_c) && e_c > 0.0) || !(std::isfinite(e_j) && e_j > 0.0) ||
            !(std::isfinite(e_l) && e_l > 0.0)) {
            throw std::invalid_argument(
                "CircuitParams: all energies must be positive and finite");
        }
    }
};

// Device parameters obtained from two-tone spectroscopy.
inline constexpr CircuitParams default_device_params{0.755, 6.49, 0.445};
inline constexpr double default_flux_b = 0.812;

// External flux in units of the flux quantum. Not restricted to [0, 1): the
// phase variable of this circuit is extended, so any real value is meaningful.
struct ExternalFlux {
    double frac = 0.0;  // Phi / Phi_0

    ExternalFlux() = default;
    ExternalFlux(double f) : frac(f) {
        if (!std::isfinite(f)) throw std::invalid_argument("ExternalFlux: non-finite value");
    }

    // Reduced flux phi_ext = 2*pi*Phi/Phi_0, radians.
    double reduced() const { return two_pi * frac; }
};

// Which inductive term carries the external flux. For static flux all three
// give the same physics; for time-dependent flux only the first two do.
// JunctionIncomplete is the junction allocation with the charge term
// proportional to dPhi/dt dropped, kept as a deliberately wrong model.
enum class FluxAllocation {
    Inductor,
    JunctionComplete,
    JunctionIncomplete,
};

inline bool is_junction(FluxAllocation a) { return a != FluxAllocation::Inductor; }

inline const char* to_string(FluxAllocation a) {
    switch (a) {
        case FluxAllocation::Inductor: return "inductor";
        case FluxAllocation::JunctionComplete: return "junction-complete";
        case FluxAllocation::JunctionIncomplete: return "junction-incomplete";
    }
    return "?";
}

inline FluxAllocation allocation_from_string(const std::string& s) {
    if (s == "inductor") return FluxAllocation::Inductor;
    if (s == "junction-complete") return FluxAllocation::JunctionComplete;
    if (s == "junction-incomplete") return FluxAllocation::JunctionIncomplete;
    throw std::invalid_argument("unknown flux allocation '" + s +
                                "' (expected inductor|junction-complete|junction-incomplete)");
}

}  // namespace fluxquant
