#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tomokit/cvstates.hpp"

using namespace tomokit;

TEST_CASE("Fock states") {
    const WaveFunction v = fock_state(0);
    double err = 0.0;
    for (int i = 0; i < v.grid.count(); ++i) {
        const double x = v.grid.point(i);
        err = std::max(err, std::abs(v.samples[i] - std::pow(pi, -0.25) * std::exp(-0.5 * x * x)));
    }
    CHECK(err < 1e-10);

    // odd grid count puts a node exactly at the origin
    const WaveFunction f1 = fock_state(1, make_grid(-8, 8, 1025));
    CHECK(f1.samples[512] == cplx(0.0, 0.0));

    const WaveFunction f2 = fock_state(2);
    double q2 = 0.0;
    for (int i = 0; i < f2.grid.count(); ++i) q2 += std::norm(f2.samples[i]) * std::pow(f2.grid.point(i), 2) * f2.grid.spacing();
    CHECK(q2 == doctest::Approx(2.5).epsilon(1e-8));

    for (int n = 0; n <= 10; ++n) {
        const WaveFunction f = fock_state(n);
        CHECK(std::abs(f.norm() - 1.0) < 1e-8);
        for (int i = 0; i < f.grid.count(); i += 97)
            CHECK(std::abs(f.samples[i].real() - oracle::hermite_function(n, f.grid.point(i))) < 1e-12);
    }
    CHECK_THROWS_AS(fock_state(11), Error);
    CHECK_THROWS_AS(fock_state(-1), Error);
}

TEST_CASE("coherent states") {
    const WaveFunction a0 = coherent_state({0.0, 0.0});
    CHECK((a0.samples - fock_state(0).samples).cwiseAbs().maxCoeff() < 1e-10);
    for (cplx alpha : {cplx(1.0, 0.0), cplx(-0.5, 1.5), cplx(0.0, -2.0)}) {
        const WaveFunction c = coherent_state(alpha);
        double m1 = 0.0, m2 = 0.0;
        for (int i = 0; i < c.grid.count(); ++i) {
            const double x = c.grid.point(i), w = std::norm(c.samples[i]) * c.grid.spacing();
            m1 += w * x;
            m2 += w * x * x;
        }
        CHECK(std::abs(m1 - std::sqrt(2.0) * alpha.real()) < 1e-6);
        CHECK(std::abs(m2 - m1 * m1 - 0.5) < 1e-6);
    }
    CHECK_THROWS_AS(coherent_state({2.5, 0.0}), Error);

    // wave-function phase convention matches the Fock expansion
    const DensityMatrixCV proj = to_density_matrix(coherent_state({0.8, 0.3}));
    const DensityMatrixCV ref = coherent_density_matrix({0.8, 0.3});
    CHECK((proj.rho - ref.rho).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("thermal states") {
    const DensityMatrixCV t0 = thermal_state(0.0, 16);
    CHECK(std::abs(t0.rho(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(t0.rho.trace() - 1.0) < 1e-15);
    const DensityMatrixCV t = thermal_state(0.5, 32);
    CHECK(std::abs(t.rho(0, 0).real() - 1.0 / 1.5) < 1e-6);
    CHECK(std::abs(t.rho.trace().real() - 1.0) < 1e-8);
    for (int n = 1; n < 32; ++n) CHECK(t.rho(n, n).real() <= t.rho(n - 1, n - 1).real());
    CHECK_THROWS_AS(thermal_state(-0.1), Error);
    CHECK_NOTHROW(validate(t));
}

TEST_CASE("classical Gaussian density") {
    Eigen::Matrix2d cov;
    cov << 0.5, 0.0, 0.0, 0.5;
    const PhaseSpaceDensity f = classical_gaussian_density(0, 0, cov);
    CHECK_NOTHROW(validate(f));
    double err = 0.0;
    for (int i = 0; i < f.qgrid.count(); i += 7)
        for (int j = 0; j < f.pgrid.count(); j += 7) {
            const double q = f.qgrid.point(i), p = f.pgrid.point(j);
            err = std::max(err, std::abs(f.values(i, j) - std::exp(-q * q - p * p) / pi));
        }
    CHECK(err < 1e-6);

    Eigen::Matrix2d narrow;
    narrow << 0.01, 0.0, 0.0, 0.01;
    CHECK_NOTHROW(validate(classical_gaussian_density(0, 0, narrow)));
    Eigen::Matrix2d bad;
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(classical_gaussian_density(0, 0, bad), Error);
}

TEST_CASE("Wigner functions") {
    const WignerFunction w0 = wigner_from_state(fock_state(0));
    double err = 0.0;
    for (int i = 0; i < w0.qgrid.count(); ++i)
        for (int j = 0; j < w0.pgrid.count(); ++j) {
            const double q = w0.qgrid.point(i), p = w0.pgrid.point(j);
            err = std::max(err, std::abs(w0.values(i, j) - 2.0 * std::exp(-q * q - p * p)));
        }
    CHECK(err < 1e-4);
    CHECK(std::abs(w0.values.sum() * w0.qgrid.spacing() * w0.pgrid.spacing() / (2 * pi) - 1.0) < 1e-4);

    // origin sits at a node for an odd q/p count on the half lattice of the default position grid
    const Grid1D odd = make_grid(-8.03125, 8.03125, 257);
    const WignerFunction w1 = wigner_from_state(fock_state(1), odd, odd);
    CHECK(std::abs(odd.point(128)) < 1e-12);
    CHECK(w1.values(128, 128) == doctest::Approx(-2.0).epsilon(1e-6));

    // p-marginal gives the position density
    for (int n = 0; n <= 3; ++n) {
        const WaveFunction psi = fock_state(n);
        const WignerFunction w = wigner_from_state(psi);
        for (int i = 10; i < w.qgrid.count(); i += 23) {
            const double marg = w.values.row(i).sum() * w.pgrid.spacing() / (2 * pi);
            const double x = w.qgrid.point(i);
            CHECK(std::abs(marg - std::pow(oracle::hermite_function(n, x), 2)) < 1e-4);
        }
    }

    // mixed input equals the weighted pure sum
    const WignerFunction wt = wigner_from_state(thermal_state(0.5));
    double s = 0.0;
    for (int n = 0; n < 20; ++n)
        s += thermal_state(0.5).rho(n, n).real() * wigner_from_state(oscillator_eigenfunction(n)).values(128, 128);
    CHECK(std::abs(wt.values(128, 128) - s) < 1e-8);
}

TEST_CASE("state fidelity") {
    const DensityMatrixCV a = coherent_density_matrix({1.0, 0.0});
    const DensityMatrixCV v = coherent_density_matrix({0.0, 0.0});
    CHECK(state_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(state_fidelity(a, v) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    const DensityMatrixCV t = thermal_state(0.5);
    CHECK(state_fidelity(t, t) == doctest::Approx(1.0).epsilon(1e-7));
}
