#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "fluxquant/hamiltonian.hpp"

namespace fluxquant {

// Preparation error: initialization intended to produce the ground state
// instead yields the first excited state with probability alpha.
struct PreparationModel {
    double alpha = 0.0;

    void validate() const;
};

// Column-stochastic 2x2 map from true (p0, p1) to reported (p0', p1').
struct ConfusionMatrix {
    Eigen::Matrix2d m;

    static ConfusionMatrix identity();
    void validate() const;
};

// Readout misassignment measured in the pi-pulse calibration experiment.
ConfusionMatrix default_confusion();

struct SuddenExperimentConfig {
    std::vector<double> flux_a_list;          // initial flux points, Phi/Phi_0
    double flux_b = default_flux_b;           // final flux point
    int levels_b = 12;                        // final-basis states tracked
    FluxAllocation allocation = FluxAllocation::Inductor;
    double alpha = 0.05;
    ConfusionMatrix confusion = default_confusion();
};

struct OccupationRow {
    double flux_a;
    RealVector raw;             // p_m, m = 0 .. levels_b-1
    double subspace_retention;  // p0 + p1
    double p0_corrected;
    double p1_corrected;
};

using OccupationTable = std::vector<OccupationRow>;

// p_m = |<m_b | initial_a>|^2 for every state in spec_b. Both spectra must
// share the basis dimension and the allocation side (inductor with inductor,
// junction-static with junction-static).
RealVector overlap_probabilities(const Spectrum& spec_a, const Spectrum& spec_b,
                                 int initial_index);

// p_m = (1-alpha)|<m_b|0_a>|^2 + alpha|<m_b|1_a>|^2, affine in alpha.
RealVector mixed_probabilities(const Spectrum& spec_a, const Spectrum& spec_b,
                               const PreparationModel& prep);

// (p0', p1') = M (p0, p1). Inputs may sum to less than one when population has
// leaked out of the qubit subspace; the outputs then do too.
std::pair<double, double> apply_confusion(double p0, double p1, const ConfusionMatrix& m);

// Sudden-ramp experiment sweep: for each flux_a, populate the eigenbasis at
// flux_b from the mixed initial state at flux_a, then apply the confusion
// matrix to (p0, p1). The allocation selects which prediction is made:
//   Inductor           — state frozen in the inductor-frame variable;
//   JunctionIncomplete — state frozen in the junction-frame variable (the
//                        erroneous model obtained by dropping the dPhi/dt term);
//   JunctionComplete   — junction frame with the impulse exp(i*dphi_ext*n)
//                        contributed by the dPhi/dt term across the jump,
//                        which reproduces the inductor prediction exactly.
// The confusion correction covers only the qubit subspace; leaked population
// is left unreported.
OccupationTable simulate_experiment(const CircuitParams& params,
                                    const SuddenExperimentConfig& config,
                                    const FluxoniumOperators& ops);

}  // namespace fluxquant
