#pragma once

#include <string>
#include <vector>

#include "fluxquant/hamiltonian.hpp"

namespace fluxquant {

// One two-tone spectroscopy observation: measured transition frequency
// between levels i < j at a flux bias point.
struct SpectroscopyPoint {
    double flux;  // Phi/Phi_0
    int level_i;
    int level_j;
    double freq_ghz;
    double weight = 1.0;

    void validate() const;
};

struct FitResult {
    CircuitParams params;
    double residual_rms = 0.0;  // sqrt(sum w r^2 / N), GHz
    int iterations = 0;
    bool converged = false;
    std::vector<double> best_history;  // best objective value per iteration
};

// Model transition frequency E_j - E_i at the point's flux (inductor-allocated
// static build; the allocation is irrelevant for static spectra).
double model_frequency(const CircuitParams& params, const SpectroscopyPoint& point, int dim);

// Weighted least squares over (E_C, E_J, E_L) by Nelder-Mead simplex in
// log-parameter space (positivity by construction). Converges when the
// simplex diameter drops below 1e-6 in log space, the best objective reaches
// zero to roundoff, or after max_iterations.
FitResult fit_params(const std::vector<SpectroscopyPoint>& observations,
                     const CircuitParams& initial_guess, int dim, int max_iterations = 500);

// Reads observations from a CSV file with header
//   flux,level_i,level_j,freq_ghz,weight
// (the weight column may be omitted; it defaults to 1).
std::vector<SpectroscopyPoint> load_observations(const std::string& path);

}  // namespace fluxquant
