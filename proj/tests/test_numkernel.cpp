#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tomokit/cvstates.hpp"
#include "tomokit/numkernel.hpp"

using namespace tomokit;

namespace {

double max_abs_diff(const CVector& a, const CVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("grid construction") {
    const Grid1D g = make_grid(-8, 8, 1024);
    CHECK(g.spacing() == doctest::Approx(0.015625).epsilon(1e-15));
    CHECK(g.point(0) == doctest::Approx(-8 + 0.0078125));
    const Grid1D a = make_grid(0, 2 * pi, 256);
    CHECK(a.spacing() == doctest::Approx(pi / 128).epsilon(1e-15));
    CHECK_THROWS_AS(make_grid(1, 1, 16), Error);
    CHECK_THROWS_AS(make_grid(0, 1, 7), Error);
    CHECK(Grid1D().same_as(default_position_grid()));
}

TEST_CASE("fractional Fourier identity and vacuum invariance") {
    const WaveFunction psi = coherent_state({0.7, -0.4});
    CHECK(max_abs_diff(fractional_fourier(psi, 0.0).samples, psi.samples) < 1e-8);

    const WaveFunction vac = fock_state(0);
    for (double theta : {0.3, 1.0, pi / 2, 2.5, pi, -2.0, 7.1, 1e-4, pi - 1e-4}) {
        const WaveFunction out = fractional_fourier(vac, theta);
        double err = 0.0;
        for (int i = 0; i < out.grid.count(); ++i) {
            const double x = out.grid.point(i);
            err = std::max(err, std::abs(std::norm(out.samples[i]) - std::exp(-x * x) / std::sqrt(pi)));
        }
        CHECK(err < 1e-6);
        CHECK(std::abs(out.norm() - 1.0) < 1e-6);
    }
}

TEST_CASE("fractional Fourier against direct kernel quadrature") {
    const WaveFunction f1 = fock_state(1);
    auto psi1 = [](double y) { return oracle::cplx(oracle::hermite_function(1, y), 0.0); };
    const WaveFunction out = fractional_fourier(f1, pi / 4);
    double err = 0.0;
    for (int i = 0; i < out.grid.count(); i += 37) {
        const double x = out.grid.point(i);
        const oracle::cplx ref = oracle::propagate(psi1, pi / 4, x);
        err = std::max(err, std::abs(out.samples[i] - ref));
        CHECK(std::abs(std::norm(out.samples[i]) - 2.0 / std::sqrt(pi) * x * x * std::exp(-x * x)) < 1e-6);
    }
    CHECK(err < 1e-8);

    // complex amplitude, including phase, at an angle handled by the split path
    const WaveFunction coh = coherent_state({0.5, 0.5});
    const double q0 = std::sqrt(2.0) * 0.5, p0 = std::sqrt(2.0) * 0.5;
    auto psic = [&](double y) {
        return std::polar(std::pow(pi, -0.25) * std::exp(-0.5 * (y - q0) * (y - q0)), p0 * y - 0.5 * q0 * p0);
    };
    for (double theta : {0.2, 2.9, -0.1, -3.0}) {
        const WaveFunction o = fractional_fourier(coh, theta);
        for (int i = 100; i < o.grid.count(); i += 211)
            CHECK(std::abs(o.samples[i] - oracle::propagate(psic, theta, o.grid.point(i))) < 1e-8);
    }
}

TEST_CASE("fractional Fourier additivity and period") {
    const WaveFunction psi = coherent_state({1.0, 0.5});
    const WaveFunction a = fractional_fourier(fractional_fourier(psi, 0.4), 1.9);
    const WaveFunction b = fractional_fourier(psi, 2.3);
    CHECK(max_abs_diff(a.samples, b.samples) < 1e-6);
    // U(theta + 2 pi) = -U(theta)
    const WaveFunction c = fractional_fourier(psi, 2.3 + 2 * pi);
    CHECK(max_abs_diff(c.samples, -b.samples) < 1e-8);
}

TEST_CASE("quarter turn equals momentum transform up to global phase") {
    const WaveFunction psi = fock_state(3);
    const WaveFunction q = fractional_fourier(psi, pi / 2);
    const WaveFunction m = fourier_momentum(psi);
    CHECK(max_abs_diff(q.samples, std::polar(1.0, -pi / 4) * m.samples) < 1e-6);
}

TEST_CASE("momentum transform") {
    const WaveFunction vac = fock_state(0);
    CHECK(max_abs_diff(fourier_momentum(vac).samples, vac.samples) < 1e-6);

    const WaveFunction psi = coherent_state({0.3, 1.2});
    WaveFunction r = psi;
    for (int k = 0; k < 4; ++k) r = fourier_momentum(r);
    CHECK(max_abs_diff(r.samples, psi.samples) < 1e-6);
    CHECK(std::abs(fourier_momentum(psi).norm() - 1.0) < 1e-6);

    const WaveFunction f1 = fourier_momentum(fock_state(1));
    double err = 0.0;
    for (int i = 0; i < f1.grid.count(); ++i) {
        const double p = f1.grid.point(i);
        err = std::max(err, std::abs(std::norm(f1.samples[i]) - 2.0 / std::sqrt(pi) * p * p * std::exp(-p * p)));
    }
    CHECK(err < 1e-6);
}

TEST_CASE("Haar unitaries") {
    const UnitaryMatrix u1 = haar_unitary(1, 5);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-14);
    CHECK(unitarity_defect(haar_unitary(4, 11)) <= 1e-10);
    CHECK((haar_unitary(3, 9) - haar_unitary(3, 9)).norm() == 0.0);

    Rng rng = substream(42, 0);
    double m = 0.0, mv = 0.0;
    const int n = 10000;
    UnitaryMatrix v = haar_unitary(2, 77);
    for (int k = 0; k < n; ++k) {
        const UnitaryMatrix u = haar_unitary(2, rng);
        m += std::norm(u(0, 0));
        mv += std::norm((v * u)(0, 0));
    }
    CHECK(std::abs(m / n - 0.5) < 0.02);
    // left invariance on the same moment
    CHECK(std::abs(mv / n - 0.5) < 0.02);
}

TEST_CASE("Gauss-Legendre") {
    const Quadrature q = gauss_legendre(12, 0.0, 2.0);
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += q.weights[i] * std::pow(q.nodes[i], 9);
    CHECK(s == doctest::Approx(std::pow(2.0, 10) / 10).epsilon(1e-13));
    const Quadrature c = composite_gauss_legendre(0.0, pi, 5, 8);
    double t = 0.0;
    for (int i = 0; i < c.nodes.size(); ++i) t += c.weights[i] * std::sin(c.nodes[i]);
    CHECK(t == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("cubic interpolation is exact on cubics") {
    std::vector<double> v(20);
    for (int i = 0; i < 20; ++i) v[i] = 1.0 + i - 0.3 * i * i + 0.01 * i * i * i;
    const double t = 7.37;
    CHECK(interp_cubic(v.data(), 20, t) == doctest::Approx(1.0 + t - 0.3 * t * t + 0.01 * t * t * t).epsilon(1e-12));
}
