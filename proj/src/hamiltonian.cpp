#include "fluxquant/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluxquant/errors.hpp"

namespace fluxquant {

namespace {

double potential_deriv(const CircuitParams& p, double phi_ext, FluxAllocation alloc,
                       double phi) {
    if (alloc == FluxAllocation::Inductor) return p.e_j * std::sin(phi) + p.e_l * (phi - phi_ext);
    return p.e_j * std::sin(phi + phi_ext) + p.e_l * phi;
}

double potential_curvature(const CircuitParams& p, double phi_ext, FluxAllocation alloc,
                           double phi) {
    if (alloc == FluxAllocation::Inductor) return p.e_j * std::cos(phi) + p.e_l;
    return p.e_j * std::cos(phi + phi_ext) + p.e_l;
}

// Newton refinement of a sampled minimum, falling back to bisection on V'
// whenever a step leaves the bracket or hits non-convex curvature. The
// bracket [a, b] satisfies V'(a) < 0 < V'(b).
double refine_minimum(const CircuitParams& p, double phi_ext, FluxAllocation alloc, double a,
                      double b, double x0) {
    double x = x0;
    for (int iter = 0; iter < 200; ++iter) {
        const double d1 = potential_deriv(p, phi_ext, alloc, x);
        if (std::abs(d1) < 1e-9) return x;
        if (d1 > 0.0) b = x; else a = x;
        const double d2 = potential_curvature(p, phi_ext, alloc, x);
        double next = x - d1 / d2;
        if (!(d2 > 0.0) || next <= a || next >= b) next = 0.5 * (a + b);
        x = next;
    }
    return x;
}

}  // namespace

OperatorMatrix build_static(const CircuitParams& params, ExternalFlux flux,
                            FluxAllocation allocation, const FluxoniumOperators& ops) {
    params.validate();
    const double pe = flux.reduced();
    RealMatrix h;
    if (allocation == FluxAllocation::Inductor) {
        h = 4.0 * params.e_c * ops.charge_sq() - params.e_j * ops.cos_phi() +
            0.5 * params.e_l * ops.phi_sq();
        if (pe != 0.0) {
            // expanded E_L*(phi - phi_ext)^2/2
            h -= (params.e_l * pe) * ops.phi();
            h.diagonal().array() += 0.5 * params.e_l * pe * pe;
        }
    } else {
        if (pe == 0.0) {
            h = 4.0 * params.e_c * ops.charge_sq() - params.e_j * ops.cos_phi() +
                0.5 * params.e_l * ops.phi_sq();
        } else {
            const double c = std::cos(pe), s = std::sin(pe);
            h = 4.0 * params.e_c * ops.charge_sq() -
                params.e_j * (c * ops.cos_phi() - s * ops.sin_phi()) +
                0.5 * params.e_l * ops.phi_sq();
        }
    }
    return OperatorMatrix{h.cast<std::complex<double>>(), true};
}

OperatorMatrix build_timedep(const CircuitParams& params, double flux_frac, double flux_rate,
                             FluxAllocation allocation, const FluxoniumOperators& ops) {
    if (!std::isfinite(flux_rate)) {
        throw std::invalid_argument("build_timedep: flux rate must be finite");
    }
    OperatorMatrix h = build_static(params, ExternalFlux(flux_frac), allocation, ops);
    if (allocation == FluxAllocation::JunctionComplete && flux_rate != 0.0) {
        // -2e*n*dPhi/dt in h = 1 units: -(dphi_ext/dt)/(2*pi) * n GHz.
        h.mat -= (flux_rate / two_pi) * ops.charge();
    }
    return h;
}

Spectrum diagonalize(const OperatorMatrix& h, int k, const CircuitParams& params,
                     ExternalFlux flux, FluxAllocation allocation) {
    const int d = h.dim();
    if (k < 1 || k > d) throw std::invalid_argument("diagonalize: k must be in [1, dim]");
    if (!h.hermitian || hermiticity_defect(h.mat) > 1e-12) {
        throw ContractViolationError("diagonalize: input matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat);

    Spectrum spec;
    spec.energies = solver.eigenvalues().head(k);
    spec.states = solver.eigenvectors().leftCols(k);
    spec.flux = flux;
    spec.allocation = allocation;
    spec.params = params;

    // Phase convention: largest-magnitude coefficient real and positive.
    for (int j = 0; j < k; ++j) {
        Eigen::Index imax = 0;
        spec.states.col(j).cwiseAbs().maxCoeff(&imax);
        const std::complex<double> c = spec.states(imax, j);
        spec.states.col(j) *= std::conj(c) / std::abs(c);
    }
    return spec;
}

Spectrum solve_static(const CircuitParams& params, ExternalFlux flux,
                      FluxAllocation allocation, const FluxoniumOperators& ops, int k) {
    return diagonalize(build_static(params, flux, allocation, ops), k, params, flux,
                       allocation);
}

std::vector<FluxSpectrumRow> spectrum_vs_flux(const CircuitParams& params,
                                              const std::vector<double>& flux_list, int levels,
                                              const FluxoniumOperators& ops,
                                              bool relative_to_ground) {
    if (flux_list.empty()) throw std::invalid_argument("spectrum_vs_flux: empty flux list");
    if (levels < 1) throw std::invalid_argument("spectrum_vs_flux: levels must be >= 1");
    std::vector<FluxSpectrumRow> rows;
    rows.reserve(flux_list.size());
    for (double f : flux_list) {
        Spectrum spec = solve_static(params, ExternalFlux(f), FluxAllocation::Inductor, ops,
                                     levels);
        RealVector e = spec.energies;
        if (relative_to_ground) e.array() -= e[0];
        rows.push_back(FluxSpectrumRow{f, std::move(e)});
    }
    return rows;
}

double potential_value(const CircuitParams& params, ExternalFlux flux,
                       FluxAllocation allocation, double phi) {
    const double pe = flux.reduced();
    if (allocation == FluxAllocation::Inductor) {
        const double dx = phi - pe;
        return -params.e_j * std::cos(phi) + 0.5 * params.e_l * dx * dx;
    }
    return -params.e_j * std::cos(phi + pe) + 0.5 * params.e_l * phi * phi;
}

RealVector potential_curve(const CircuitParams& params, ExternalFlux flux,
                           FluxAllocation allocation, const RealVector& grid) {
    RealVector v(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        v[i] = potential_value(params, flux, allocation, grid[i]);
    }
    return v;
}

PotentialAnalysis find_minima(const CircuitParams& params, ExternalFlux flux,
                              FluxAllocation allocation, double window_lo, double window_hi) {
    params.validate();
    if (!(window_hi - window_lo >= two_pi)) {
        throw std::invalid_argument("find_minima: window must be at least 2*pi wide");
    }
    const double pe = flux.reduced();
    const int n = static_cast<int>(std::ceil((window_hi - window_lo) / 0.01));
    const double step = (window_hi - window_lo) / n;

    RealVector v(n + 1);
    for (int i = 0; i <= n; ++i) {
        v[i] = potential_value(params, flux, allocation, window_lo + i * step);
    }

    PotentialAnalysis out;
    out.allocation = allocation;
    out.flux = flux;
    for (int i = 1; i < n; ++i) {
        if (!(v[i] < v[i - 1] && v[i] <= v[i + 1])) continue;
        const double a = window_lo + (i - 1) * step;
        const double b = window_lo + (i + 1) * step;
        const double x = refine_minimum(params, pe, allocation, a, b, window_lo + i * step);
        if (x < window_lo || x > window_hi) continue;
        if (!(potential_curvature(params, pe, allocation, x) > 0.0)) continue;
        bool duplicate = false;
        for (const auto& m : out.minima) duplicate |= std::abs(m.location - x) < 1e-6;
        if (!duplicate) {
            out.minima.push_back({x, potential_value(params, flux, allocation, x)});
        }
    }
    std::sort(out.minima.begin(), out.minima.end(),
              [](const PotentialMinimum& lhs, const PotentialMinimum& rhs) {
                  if (std::abs(lhs.value - rhs.value) > 1e-12) return lhs.value < rhs.value;
                  return lhs.location < rhs.location;
              });
    return out;
}

double perturbative_shift(const CircuitParams& params, ExternalFlux flux,
                          FluxAllocation allocation, double delta_phi) {
    if (!std::isfinite(delta_phi)) {
        throw std::invalid_argument("perturbative_shift: non-finite delta_phi");
    }
    const double pe = flux.reduced();
    // The global minimum sits within one period of the potential's center:
    // phi_ext for the inductor allocation, zero for the junction one.
    const double center = (allocation == FluxAllocation::Inductor) ? pe : 0.0;
    PotentialAnalysis analysis =
        find_minima(params, flux, allocation, center - M_PI - 0.2, center + M_PI + 0.2);
    if (analysis.minima.empty()) {
        throw SingularConfigurationError("perturbative_shift: no potential minimum found");
    }
    const double phi_bar = analysis.minima.front().location;

    double ratio;
    if (allocation == FluxAllocation::Inductor) {
        const double denom = params.e_l + params.e_j * std::cos(phi_bar);
        if (std::abs(denom) < 1e-9) {
            throw SingularConfigurationError("perturbative_shift: degenerate curvature");
        }
        ratio = params.e_l / denom;
    } else {
        const double c = std::cos(phi_bar + pe);
        const double denom = params.e_l + params.e_j * c;
        if (std::abs(denom) < 1e-9) {
            throw SingularConfigurationError("perturbative_shift: degenerate curvature");
        }
        ratio = -params.e_j * c / denom;
    }
    return ratio * delta_phi;
}

}  // namespace fluxquant
