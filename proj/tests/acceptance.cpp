// Acceptance suite: exercises the headline behaviors end to end and prints
// one PASS/FAIL line per criterion. Exits with the number of failures.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fluxquant/dynamics.hpp"
#include "fluxquant/fit.hpp"
#include "fluxquant/sudden.hpp"
#include "golden_values.hpp"

using namespace fluxquant;

namespace {

const CircuitParams device = default_device_params;
int failures = 0;

void report(int id, bool pass, const std::string& label, const std::string& detail) {
    std::printf("[%s] %d. %s (%s)\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> sweep_points() {
    std::vector<double> fluxes;
    for (int i = 0; i <= 10; ++i) fluxes.push_back(0.498 + 0.0005 * i);
    return fluxes;
}

void criterion_1_qubit_frequency(const FluxoniumOperators& ops) {
    Spectrum s = solve_static(device, ExternalFlux(0.812), FluxAllocation::Inductor, ops, 2);
    const double f01 = s.energies[1] - s.energies[0];
    const double rel = std::abs(f01 - 5.018) / 5.018;
    report(1, rel < 0.02, "qubit frequency at flux 0.812 within 2% of 5.018 GHz",
           "f01 = " + fmt(f01) + " GHz, rel dev " + fmt(rel));
}

void criterion_2_half_flux_splitting(const FluxoniumOperators& ops) {
    Spectrum s = solve_static(device, ExternalFlux(0.5), FluxAllocation::Inductor, ops, 2);
    const double splitting = s.energies[1] - s.energies[0];
    const double rel_golden = std::abs(splitting - golden::half_flux_splitting_ghz) /
                              golden::half_flux_splitting_ghz;
    const bool near_20mhz = splitting > 0.020 / 1.5 && splitting < 0.020 * 1.5;
    report(2, near_20mhz && rel_golden < 1e-6,
           "half-flux splitting near 20 MHz and matching the grid oracle to 1e-6",
           "splitting = " + fmt(splitting * 1e3) + " MHz, rel dev vs oracle " +
               fmt(rel_golden));
}

void criterion_3_subspace_retention(const FluxoniumOperators& ops) {
    SuddenExperimentConfig cfg;
    cfg.flux_a_list = sweep_points();
    cfg.alpha = 0.05;

    cfg.allocation = FluxAllocation::Inductor;
    auto ind = simulate_experiment(device, cfg, ops);
    cfg.allocation = FluxAllocation::JunctionIncomplete;
    auto ji = simulate_experiment(device, cfg, ops);

    double min_ind = 1.0, max_ji = 0.0;
    for (size_t i = 0; i < ind.size(); ++i) {
        min_ind = std::min(min_ind, ind[i].subspace_retention);
        max_ji = std::max(max_ji, ji[i].subspace_retention);
    }
    report(3, min_ind > 0.98 && max_ji < 0.5,
           "sudden sweep: inductor retention > 0.98, incomplete junction < 0.5",
           "min inductor " + fmt(min_ind) + ", max incomplete " + fmt(max_ji));
}

void criterion_4_crossover(const FluxoniumOperators& ops) {
    SuddenExperimentConfig cfg;
    cfg.flux_a_list = sweep_points();
    cfg.alpha = 0.05;
    cfg.allocation = FluxAllocation::Inductor;
    auto table = simulate_experiment(device, cfg, ops);
    bool ok = true;
    for (const auto& row : table) {
        if (row.flux_a < 0.5) ok &= row.p1_corrected > row.p0_corrected;
        if (row.flux_a > 0.5) ok &= row.p0_corrected > row.p1_corrected;
    }
    report(4, ok, "corrected occupations cross over at half flux",
           "p1' > p0' below 0.5, p0' > p1' above");
}

void criterion_5_gauge_equivalence(const FluxoniumOperators& ops) {
    const FluxPulse pulse{0.5, 0.812, 1.0, PulseShape::Linear, 0.05};
    const PropagatorConfig cfg{5e-4, 1.2, false};

    StateVector gi = ground_state(device, ExternalFlux(0.5), FluxAllocation::Inductor, ops);
    StateVector fi = propagate(device, FluxAllocation::Inductor, pulse, gi, cfg, ops);
    RealVector pi = final_populations(fi, device, ExternalFlux(0.812), ops, ops.dim());

    StateVector gj = gauge_transform(gi, ExternalFlux(0.5), GaugeDirection::ToJunction, ops);
    StateVector fc = propagate(device, FluxAllocation::JunctionComplete, pulse, gj, cfg, ops);
    RealVector pc = final_populations(fc, device, ExternalFlux(0.812), ops, ops.dim());

    StateVector fj = propagate(device, FluxAllocation::JunctionIncomplete, pulse, gj, cfg, ops);
    RealVector pj = final_populations(fj, device, ExternalFlux(0.812), ops, ops.dim());

    const double agree = (pi - pc).cwiseAbs().maxCoeff();
    const double tv = 0.5 * (pi - pj).cwiseAbs().sum();

    // The frozen-state (instantaneous-ramp) predictions of the two models,
    // for contrast: at a 1 ns rise the incomplete model's spurious charge
    // term largely averages out, so its time-domain result stays close to
    // the correct one and the full contrast appears only below ~0.1 ns.
    Spectrum ia = solve_static(device, ExternalFlux(0.5), FluxAllocation::Inductor, ops, 1);
    Spectrum ib =
        solve_static(device, ExternalFlux(0.812), FluxAllocation::Inductor, ops, ops.dim());
    Spectrum ja =
        solve_static(device, ExternalFlux(0.5), FluxAllocation::JunctionIncomplete, ops, 1);
    Spectrum jb = solve_static(device, ExternalFlux(0.812), FluxAllocation::JunctionIncomplete,
                               ops, ops.dim());
    const double tv_frozen = 0.5 * (overlap_probabilities(ia, ib, 0) -
                                    overlap_probabilities(ja, jb, 0))
                                       .cwiseAbs()
                                       .sum();
    report(5, agree < 1e-6 && tv > 0.1,
           "1 ns pulse: complete allocation agrees to 1e-6, incomplete differs by > 0.1 TV",
           "complete max dev " + fmt(agree) + ", incomplete TV " + fmt(tv) +
               "; for instantaneous ramps the incomplete-model TV is " + fmt(tv_frozen));
}

void criterion_6_sudden_limit(const FluxoniumOperators& ops) {
    Spectrum sa = solve_static(device, ExternalFlux(0.5), FluxAllocation::Inductor, ops, 2);
    Spectrum sb = solve_static(device, ExternalFlux(0.812), FluxAllocation::Inductor, ops, 12);
    RealVector sudden = overlap_probabilities(sa, sb, 0);

    bool monotone = true;
    double dev_1ns = 0.0, prev = 1e300;
    std::string seq;
    for (double rise : {4.0, 2.0, 1.0, 0.5, 0.25}) {
        FluxPulse pulse{0.5, 0.812, rise, PulseShape::Linear, 0.05};
        PropagatorConfig cfg{5e-4, 0.1 + rise, false};
        StateVector gi = ground_state(device, ExternalFlux(0.5), FluxAllocation::Inductor, ops);
        StateVector fi = propagate(device, FluxAllocation::Inductor, pulse, gi, cfg, ops);
        RealVector p = final_populations(fi, device, ExternalFlux(0.812), ops, 12);
        const double dev = (p - sudden).cwiseAbs().maxCoeff();
        if (rise == 1.0) dev_1ns = dev;
        monotone &= dev < prev + 1e-12;
        prev = dev;
        seq += fmt(dev) + " ";
    }
    report(6, dev_1ns < 0.02 && monotone,
           "ramp results approach the sudden prediction monotonically",
           "max-norm deviations over rises {4,2,1,0.5,0.25} ns: " + seq);
}

void criterion_7_perturbative_shift() {
    bool ok = true;
    std::string detail;
    for (auto alloc : {FluxAllocation::Inductor, FluxAllocation::JunctionIncomplete}) {
        const double center = alloc == FluxAllocation::Inductor ? two_pi * 0.3 : 0.0;
        double prev_rel = 0.0;
        for (double dp : {1e-2, 1e-3, 1e-4}) {
            auto m0 = find_minima(device, ExternalFlux(0.3), alloc, center - M_PI - 0.2,
                                  center + M_PI + 0.2);
            auto m1 = find_minima(device, ExternalFlux(0.3 + dp / two_pi), alloc,
                                  center - M_PI - 0.2, center + M_PI + 0.2);
            const double actual = m1.minima.front().location - m0.minima.front().location;
            const double pred = perturbative_shift(device, ExternalFlux(0.3), alloc, dp);
            const double rel = std::abs(pred - actual) / std::abs(actual);
            if (dp == 1e-3) {
                ok &= rel < 5e-3;
                detail += std::string(to_string(alloc)) + " rel " + fmt(rel) + "; ";
            }
            if (prev_rel > 0.0) ok &= rel < 0.3 * prev_rel;
            prev_rel = rel;
        }
    }
    report(7, ok, "minimum-shift formulas match re-minimization with first-order error",
           detail + "10x decay per decade of delta_phi");
}

void criterion_8_invariants(const FluxoniumOperators& ops) {
    bool ok = true;
    std::string detail;

    {  // canonical commutation
        double worst = 0.0;
        for (int dim : {16, 120}) {
            FluxoniumOperators o(device, dim);
            const Matrix phi = o.phi().cast<std::complex<double>>();
            const Matrix comm = phi * o.charge() - o.charge() * phi;
            const Matrix expected = std::complex<double>(0, 1) * Matrix::Identity(dim, dim);
            worst = std::max(worst, (comm - expected)
                                        .topLeftCorner(dim - 2, dim - 2)
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        ok &= worst < 1e-10;
        detail += "commutator " + fmt(worst);
    }

    {  // allocation independence of static spectra
        double worst = 0.0;
        for (double flux : {0.3, 0.5, 0.812, 0.85}) {
            Spectrum a = solve_static(device, ExternalFlux(flux), FluxAllocation::Inductor, ops, 6);
            Spectrum b = solve_static(device, ExternalFlux(flux),
                                      FluxAllocation::JunctionIncomplete, ops, 6);
            worst = std::max(worst, (a.energies - b.energies).cwiseAbs().maxCoeff());
        }
        ok &= worst < 1e-8;
        detail += ", allocation " + fmt(worst);
    }

    {  // wavefunction shift relation
        const double pe = two_pi * 0.812;
        Spectrum si = solve_static(device, ExternalFlux(0.812), FluxAllocation::Inductor, ops, 2);
        Spectrum sj =
            solve_static(device, ExternalFlux(0.812), FluxAllocation::JunctionIncomplete, ops, 2);
        const int n = 161;
        RealVector grid(n), shifted(n);
        for (int i = 0; i < n; ++i) {
            grid[i] = -8.0 + i * 0.1;
            shifted[i] = grid[i] + pe;
        }
        double worst = 0.0;
        for (int level = 0; level < 2; ++level) {
            Vector pj = eigenfunction_on_grid(ops.basis(), sj.states.col(level), grid);
            Vector pi = eigenfunction_on_grid(ops.basis(), si.states.col(level), shifted);
            Eigen::Index imax = 0;
            pi.cwiseAbs().maxCoeff(&imax);
            const std::complex<double> phase =
                pi[imax] * std::abs(pj[imax]) / (pj[imax] * std::abs(pi[imax]));
            worst = std::max(worst, (pj * phase - pi).cwiseAbs().maxCoeff());
        }
        ok &= worst < 1e-6;
        detail += ", shift " + fmt(worst);
    }

    {  // periodicity and reflection
        double worst = 0.0;
        for (double f : {0.1, 0.3, 0.45}) {
            auto rows = spectrum_vs_flux(device, {f, f + 1.0}, 6, ops);
            worst = std::max(worst, (rows[0].energies - rows[1].energies).cwiseAbs().maxCoeff());
        }
        for (double x : {0.05, 0.1, 0.2}) {
            auto rows = spectrum_vs_flux(device, {0.5 - x, 0.5 + x}, 6, ops);
            worst = std::max(worst, (rows[0].energies - rows[1].energies).cwiseAbs().maxCoeff());
        }
        ok &= worst < 1e-8;
        detail += ", symmetry " + fmt(worst);
    }

    {  // propagator norm conservation
        FluxPulse pulse{0.5, 0.812, 1.0, PulseShape::Linear, 0.05};
        PropagatorConfig cfg{5e-4, 1.2, false};
        StateVector gi = ground_state(device, ExternalFlux(0.5), FluxAllocation::Inductor, ops);
        double worst = 0.0;
        propagate(device, FluxAllocation::Inductor, pulse, gi, cfg, ops,
                  [&](double, const Vector& c) {
                      worst = std::max(worst, std::abs(c.norm() - 1.0));
                  });
        ok &= worst < 1e-9;
        detail += ", norm " + fmt(worst);
    }

    {  // sudden completeness
        double worst = 0.0;
        for (auto alloc : {FluxAllocation::Inductor, FluxAllocation::JunctionIncomplete}) {
            Spectrum a = solve_static(device, ExternalFlux(0.5), alloc, ops, 2);
            Spectrum b = solve_static(device, ExternalFlux(0.812), alloc, ops, ops.dim());
            worst = std::max(worst, std::abs(overlap_probabilities(a, b, 0).sum() - 1.0));
        }
        ok &= worst < 1e-9;
        detail += ", completeness " + fmt(worst);
    }

    report(8, ok, "invariant suite holds at the stated tolerances", detail);
}

void criterion_9_fit_round_trip() {
    std::vector<SpectroscopyPoint> obs;
    for (int i = 0; i < 6; ++i) {
        const double flux = 0.1 * i;
        for (int j : {1, 2}) {
            SpectroscopyPoint pt{flux, 0, j, 1.0, 1.0};
            pt.freq_ghz = model_frequency(device, pt, 120);
            obs.push_back(pt);
        }
    }
    CircuitParams guess{device.e_c * 1.2, device.e_j * 0.8, device.e_l * 1.2};
    FitResult res = fit_params(obs, guess, 80);
    const double worst = std::max({std::abs(res.params.e_c / device.e_c - 1.0),
                                   std::abs(res.params.e_j / device.e_j - 1.0),
                                   std::abs(res.params.e_l / device.e_l - 1.0)});
    report(9, res.converged && worst < 1e-3,
           "fit recovers the device energies from a 20%-perturbed guess",
           "worst relative error " + fmt(worst) + ", " + std::to_string(res.iterations) +
               " iterations");
}

}  // namespace

int main() {
    FluxoniumOperators ops(device, 120);
    criterion_1_qubit_frequency(ops);
    criterion_2_half_flux_splitting(ops);
    criterion_3_subspace_retention(ops);
    criterion_4_crossover(ops);
    criterion_5_gauge_equivalence(ops);
    criterion_6_sudden_limit(ops);
    criterion_7_perturbative_shift();
    criterion_8_invariants(ops);
    criterion_9_fit_round_trip();
    std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "OK" : "ATTENTION", failures);
    return failures;
}
