#pragma once

// Independent cross-check for the oscillator-basis implementation: the
// fluxonium Hamiltonian discretized on a uniform phase grid with a
// second-order finite-difference kinetic term, diagonalized with LAPACK's
// tridiagonal solver. Shares no code with the library under test.

#include <vector>

namespace oracle {

struct GridSpectrum {
    std::vector<double> energies;             // lowest k eigenvalues, GHz
    std::vector<std::vector<double>> states;  // grid-normalized eigenvectors
    std::vector<double> grid;                 // phi nodes, radians
    double h = 0.0;                           // grid spacing
};

// Lowest k eigenpairs of
//   -4 E_C d^2/dphi^2 + V(phi)
// with V(phi) = -E_J cos(phi) + E_L (phi - 2*pi*flux)^2 / 2 (inductor form)
// or   V(phi) = -E_J cos(phi + 2*pi*flux) + E_L phi^2 / 2  (junction form)
// on n_points interior nodes of [-10*pi, 10*pi] with Dirichlet boundaries.
// States are normalized so that h * sum |psi_i|^2 = 1 and their largest
// component is positive.
GridSpectrum solve(double e_c, double e_j, double e_l, double flux, bool junction_form,
                   int n_points, int k);

// |<m_b | i_a>|^2 with the grid inner product; both spectra must share a grid.
double overlap_probability(const GridSpectrum& a, const GridSpectrum& b, int initial_index,
                           int final_index);

}  // namespace oracle
