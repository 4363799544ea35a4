#include "fluxquant/sudden.hpp"

#include <cmath>
#include <stdexcept>

#include "fluxquant/errors.hpp"

namespace fluxquant {

namespace {

// Inductor pairs with inductor; either junction variant pairs with either
// (their static eigenbases are the same object).
bool allocations_compatible(FluxAllocation a, FluxAllocation b) {
    return is_junction(a) == is_junction(b);
}

void check_pair(const Spectrum& a, const Spectrum& b) {
    if (a.states.rows() != b.states.rows()) {
        throw ContractViolationError("overlap: spectra use different basis dimensions");
    }
    if (!allocations_compatible(a.allocation, b.allocation)) {
        throw ContractViolationError("overlap: spectra built under different flux allocations");
    }
}

RealVector overlaps_with(const Spectrum& spec_b, const Vector& initial) {
    return (spec_b.states.adjoint() * initial).cwiseAbs2();
}

}  // namespace

void PreparationModel::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("PreparationModel: alpha must lie in [0, 1]");
    }
}

ConfusionMatrix ConfusionMatrix::identity() {
    ConfusionMatrix c;
    c.m = Eigen::Matrix2d::Identity();
    return c;
}

void ConfusionMatrix::validate() const {
    for (int col = 0; col < 2; ++col) {
        double sum = 0.0;
        for (int row = 0; row < 2; ++row) {
            const double v = m(row, col);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("ConfusionMatrix: entries must lie in [0, 1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw std::invalid_argument("ConfusionMatrix: columns must sum to 1");
        }
    }
}

ConfusionMatrix default_confusion() {
    ConfusionMatrix c;
    c.m << 0.95, 0.04, 0.05, 0.96;
    return c;
}

RealVector overlap_probabilities(const Spectrum& spec_a, const Spectrum& spec_b,
                                 int initial_index) {
    check_pair(spec_a, spec_b);
    if (initial_index < 0 || initial_index >= spec_a.levels()) {
        throw std::invalid_argument("overlap_probabilities: initial_index out of range");
    }
    return overlaps_with(spec_b, spec_a.states.col(initial_index));
}

RealVector mixed_probabilities(const Spectrum& spec_a, const Spectrum& spec_b,
                               const PreparationModel& prep) {
    prep.validate();
    if (spec_a.levels() < 2) {
        throw std::invalid_argument("mixed_probabilities: spec_a needs at least two levels");
    }
    return (1.0 - prep.alpha) * overlap_probabilities(spec_a, spec_b, 0) +
           prep.alpha * overlap_probabilities(spec_a, spec_b, 1);
}

std::pair<double, double> apply_confusion(double p0, double p1, const ConfusionMatrix& m) {
    m.validate();
    if (!(p0 >= 0.0 && p0 <= 1.0) || !(p1 >= 0.0 && p1 <= 1.0)) {
        throw std::invalid_argument("apply_confusion: probabilities must lie in [0, 1]");
    }
    const Eigen::Vector2d out = m.m * Eigen::Vector2d(p0, p1);
    return {out[0], out[1]};
}

OccupationTable simulate_experiment(const CircuitParams& params,
                                    const SuddenExperimentConfig& config,
                                    const FluxoniumOperators& ops) {
    if (config.flux_a_list.empty()) {
        throw std::invalid_argument("simulate_experiment: empty flux_a list");
    }
    if (config.levels_b < 2) {
        throw std::invalid_argument("simulate_experiment: levels_b must be >= 2");
    }
    PreparationModel prep{config.alpha};
    prep.validate();
    config.confusion.validate();

    // Static eigenbases are identical for both junction variants; what differs
    // is how the state is transported across the jump.
    const bool complete = config.allocation == FluxAllocation::JunctionComplete;
    const FluxAllocation static_alloc =
        is_junction(config.allocation) ? FluxAllocation::JunctionIncomplete
                                       : FluxAllocation::Inductor;

    const Spectrum spec_b = solve_static(params, ExternalFlux(config.flux_b), static_alloc,
                                         ops, config.levels_b);

    OccupationTable table;
    table.reserve(config.flux_a_list.size());
    for (double flux_a : config.flux_a_list) {
        const Spectrum spec_a =
            solve_static(params, ExternalFlux(flux_a), static_alloc, ops, 2);

        RealVector raw;
        if (complete) {
            // The dPhi/dt charge term integrates to the impulse
            // exp(i*dphi_ext*n) across the jump; with it the junction frame
            // reproduces the inductor-frame prediction exactly.
            const double dphi = two_pi * (config.flux_b - flux_a);
            const RealVector p_from_0 =
                overlaps_with(spec_b, displace_phase(ops, dphi, spec_a.states.col(0)));
            const RealVector p_from_1 =
                overlaps_with(spec_b, displace_phase(ops, dphi, spec_a.states.col(1)));
            raw = (1.0 - config.alpha) * p_from_0 + config.alpha * p_from_1;
        } else {
            raw = mixed_probabilities(spec_a, spec_b, prep);
        }

        OccupationRow row;
        row.flux_a = flux_a;
        row.raw = raw;
        row.subspace_retention = raw[0] + raw[1];
        auto [p0c, p1c] = apply_confusion(raw[0], raw[1], config.confusion);
        row.p0_corrected = p0c;
        row.p1_corrected = p1c;
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace fluxquant
