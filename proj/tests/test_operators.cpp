#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fluxquant/operators.hpp"

using namespace fluxquant;

namespace {
const CircuitParams device = default_device_params;
}

TEST_SUITE("operators") {

TEST_CASE("make_basis oscillator length") {
    BasisSpec b = make_basis(device, 120);
    CHECK(b.dim == 120);
    CHECK(b.osc_length == doctest::Approx(std::pow(8.0 * 0.755 / 0.445, 0.25)).epsilon(1e-14));
    CHECK(b.osc_length == doctest::Approx(1.9194).epsilon(1e-3));

    // ratio 8 E_C / E_L = 1
    BasisSpec unit = make_basis({0.125, 1.0, 1.0}, 2);
    CHECK(unit.osc_length == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(make_basis({0.755, 6.49, -1.0}, 120), std::invalid_argument);
    CHECK_THROWS_AS(make_basis({-0.755, 6.49, 0.445}, 120), std::invalid_argument);
    CHECK_THROWS_AS(make_basis(device, 1), std::invalid_argument);
}

TEST_CASE("phase operator matrix elements") {
    // 8 E_C / E_L = 4 gives l = sqrt(2)
    BasisSpec b = make_basis({0.5, 1.0, 1.0}, 2);
    REQUIRE(b.osc_length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    OperatorMatrix phi = phase_operator(b);
    CHECK(phi.hermitian);
    CHECK(phi.mat(0, 0) == std::complex<double>(0, 0));
    CHECK(phi.mat(0, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(phi.mat(1, 0).real() == doctest::Approx(1.0).epsilon(1e-15));

    BasisSpec b3 = make_basis({0.5, 1.0, 1.0}, 3);
    OperatorMatrix phi3 = phase_operator(b3);
    CHECK(phi3.mat(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(hermiticity_defect(phi3.mat) == 0.0);
}

TEST_CASE("charge operator matrix elements and vacuum fluctuations") {
    BasisSpec b = make_basis({0.5, 1.0, 1.0}, 2);
    OperatorMatrix n = charge_operator(b);
    CHECK(n.mat(0, 1).real() == 0.0);
    CHECK(n.mat(0, 1).imag() == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(n.mat(1, 0).imag() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(hermiticity_defect(n.mat) == 0.0);

    // <0|n^2|0> = 1/(2 l^2), by the direct matrix product and the cached
    // projection alike (minimal-uncertainty check: <phi^2><n^2> = 1/4).
    FluxoniumOperators ops(device, 120);
    const double l = ops.basis().osc_length;
    const Matrix n2_direct = ops.charge() * ops.charge();
    CHECK(n2_direct(0, 0).real() == doctest::Approx(1.0 / (2 * l * l)).epsilon(1e-14));
    CHECK(ops.charge_sq()(0, 0) == doctest::Approx(1.0 / (2 * l * l)).epsilon(1e-14));
    CHECK(ops.phi_sq()(0, 0) * ops.charge_sq()(0, 0) ==
          doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("canonical commutation on the interior block") {
    for (int dim : {16, 60, 120}) {
        FluxoniumOperators ops(device, dim);
        const Matrix phi = ops.phi().cast<std::complex<double>>();
        const Matrix comm = phi * ops.charge() - ops.charge() * phi;
        const Matrix expected = std::complex<double>(0, 1) * Matrix::Identity(dim, dim);
        const double defect =
            (comm - expected).topLeftCorner(dim - 2, dim - 2).cwiseAbs().maxCoeff();
        CHECK(defect < 1e-10);
    }
}

TEST_CASE("cos/sin of the phase operator") {
    BasisSpec b = make_basis(device, 120);

    SUBCASE("trig identity on the interior block") {
        for (double offset : {0.0, 0.7, 3.9}) {
            auto [c, s] = cos_sin_phase(b, offset);
            CHECK(c.hermitian);
            CHECK(s.hermitian);
            CHECK(hermiticity_defect(c.mat) < 1e-12);
            CHECK(hermiticity_defect(s.mat) < 1e-12);
            const Matrix unit = c.mat * c.mat + s.mat * s.mat;
            const double defect = (unit - Matrix::Identity(120, 120))
                                      .topLeftCorner(112, 112)
                                      .cwiseAbs()
                                      .maxCoeff();
            CHECK(defect < 1e-8);
        }
    }

    SUBCASE("offset pi flips the sign of cos") {
        auto [c0, s0] = cos_sin_phase(b, 0.0);
        auto [cpi, spi] = cos_sin_phase(b, M_PI);
        CHECK((cpi.mat + c0.mat).cwiseAbs().maxCoeff() < 1e-12);
        (void)s0;
        (void)spi;
    }

    SUBCASE("vacuum expectation of cos equals the Gaussian closed form") {
        auto [c, s] = cos_sin_phase(b, 0.0);
        const double expected = std::exp(-b.osc_length * b.osc_length / 4.0);
        CHECK(c.mat(0, 0).real() == doctest::Approx(expected).epsilon(1e-12));
        (void)s;
    }
}

TEST_CASE("eigenfunction evaluation on a grid") {
    BasisSpec b = make_basis(device, 120);

    SUBCASE("ground state peak value") {
        Vector coeffs = Vector::Zero(120);
        coeffs[0] = 1.0;
        RealVector grid(1);
        grid[0] = 0.0;
        Vector psi = eigenfunction_on_grid(b, coeffs, grid);
        const double expected = std::pow(M_PI * b.osc_length * b.osc_length, -0.25);
        CHECK(psi[0].real() == doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("odd state vanishes at the origin") {
        Vector coeffs = Vector::Zero(120);
        coeffs[1] = 1.0;
        RealVector grid(1);
        grid[0] = 0.0;
        Vector psi = eigenfunction_on_grid(b, coeffs, grid);
        CHECK(std::abs(psi[0]) < 1e-15);
    }

    SUBCASE("random low-lying superpositions stay normalized") {
        // unit oscillator length, so states below k = dim/2 fit inside the
        // [-12, 12] window (classical turning point sqrt(2k+1) * l <= 9)
        BasisSpec unit = make_basis({0.125, 1.0, 1.0}, 80);
        REQUIRE(unit.osc_length == doctest::Approx(1.0));
        const int n = 2401;
        RealVector grid(n);
        for (int i = 0; i < n; ++i) grid[i] = -12.0 + i * 0.01;
        std::mt19937 rng(42);
        std::normal_distribution<double> gauss;
        for (int trial = 0; trial < 5; ++trial) {
            Vector coeffs = Vector::Zero(80);
            for (int k = 0; k < 40; ++k) {
                coeffs[k] = std::complex<double>(gauss(rng), gauss(rng));
            }
            coeffs /= coeffs.norm();
            Vector psi = eigenfunction_on_grid(unit, coeffs, grid);
            const double total = psi.cwiseAbs2().sum() * 0.01;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
        }
    }
}

TEST_CASE("phase displacement") {
    FluxoniumOperators ops(device, 120);
    Vector vac = Vector::Zero(120);
    vac[0] = 1.0;

    // exp(i a n) maps psi(phi) to psi(phi + a): the packet center moves by -a.
    Vector moved = displace_phase(ops, 1.3, vac);
    CHECK(moved.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const double mean =
        (moved.adjoint() * ops.phi().cast<std::complex<double>>() * moved).real()(0, 0);
    CHECK(mean == doctest::Approx(-1.3).epsilon(1e-10));

    Vector back = displace_phase(ops, -1.3, moved);
    CHECK((back - vac).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
