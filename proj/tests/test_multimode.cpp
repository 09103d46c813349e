#include <doctest.h>

#include <cmath>
#include <array>
#include <vector>

#include "oracles.hpp"
#include "tomokit/cventropy.hpp"
#include "tomokit/cvrecon.hpp"
#include "tomokit/cvstates.hpp"
#include "tomokit/error.hpp"
#include "tomokit/multimode.hpp"

using namespace tomokit;

namespace {

RVector vec(std::initializer_list<double> v) {
    RVector r(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) r[i++] = x;
    return r;
}

ClassicalGaussian correlated_gaussian() {
    ClassicalGaussian g;
    g.mean = vec({0.3, -0.2, 0.1, 0.4});
    g.cov.resize(4, 4);
    g.cov << 1.0, 0.2, 0.3, 0.0,
             0.2, 0.8, 0.0, -0.1,
             0.3, 0.0, 1.2, 0.25,
             0.0, -0.1, 0.25, 0.9;
    return g;
}

// independent density of a 4-variate normal via explicit Cholesky
double normal4(const ClassicalGaussian& g, const RVector& z) {
    const Eigen::LLT<RMatrix> llt(g.cov);
    const RVector y = llt.matrixL().solve(z - g.mean);
    const double det = std::pow(RMatrix(llt.matrixL()).diagonal().prod(), 2);
    return std::exp(-0.5 * y.squaredNorm()) / std::sqrt(std::pow(2.0 * oracle::pi, 4) * det);
}

// bivariate normal of (X1, X2) = (mu1 q1 + nu1 p1, mu2 q2 + nu2 p2)
double projected_oracle(const ClassicalGaussian& g, double x1, double x2, double m1, double n1, double m2, double n2) {
    const double a[2][4] = {{m1, n1, 0, 0}, {0, 0, m2, n2}};
    double mean[2] = {0, 0}, c[2][2] = {{0, 0}, {0, 0}};
    for (int r = 0; r < 2; ++r)
        for (int i = 0; i < 4; ++i) {
            mean[r] += a[r][i] * g.mean[i];
            for (int s = 0; s < 2; ++s)
                for (int j = 0; j < 4; ++j) c[r][s] += a[r][i] * g.cov(i, j) * a[s][j];
        }
    const double det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    const double d1 = x1 - mean[0], d2 = x2 - mean[1];
    const double quad = (c[1][1] * d1 * d1 - 2.0 * c[0][1] * d1 * d2 + c[0][0] * d2 * d2) / det;
    return std::exp(-0.5 * quad) / (2.0 * oracle::pi * std::sqrt(det));
}

}  // namespace

TEST_CASE("two-mode vacuum product tomogram") {
    const auto st = product_state(std::vector<WaveFunction>{fock_state(0), fock_state(0)});
    const auto m = multimode_symplectic_tomogram(st);
    REQUIRE(m.modes() == 2);
    double err = 0.0;
    for (double x1 : {-1.3, 0.0, 0.7})
        for (double x2 : {-0.4, 1.1})
            for (auto [m1, n1, m2, n2] : std::vector<std::array<double, 4>>{{1, 0, 0, 1}, {0.6, -1.2, 2.0, 0.5}, {-0.8, 0.3, 0.4, -1.5}}) {
                const double v = m(vec({x1, x2}), vec({m1, m2}), vec({n1, n2}));
                err = std::max(err, std::abs(v - oracle::vacuum_tomogram(x1, m1, n1) * oracle::vacuum_tomogram(x2, m2, n2)));
            }
    CHECK(err < 1e-6);

    SUBCASE("normalization") {
        const RVector mu = vec({0.9, -0.5}), nu = vec({0.4, 1.3});
        const Grid1D g1 = m.span(0, mu[0], nu[0]), g2 = m.span(1, mu[1], nu[1]);
        double sum = 0.0;
        for (int i = 0; i < g1.count(); i += 16)
            for (int j = 0; j < g2.count(); j += 16) sum += m(vec({g1[i], g2[j]}), mu, nu);
        CHECK(std::abs(sum * 256.0 * g1.spacing() * g2.spacing() - 1.0) < 1e-6);
    }
    SUBCASE("differential equation") {
        CHECK(multimode_differential_residual(m, vec({0.3, -0.6}), vec({1.1, 0.7}), vec({0.2, -0.9})) <= 1e-3);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(m(vec({0.0}), vec({1.0, 1.0}), vec({0.0, 0.0})), Error);
    }
}

TEST_CASE("center-of-mass tomogram of the two-mode vacuum") {
    const auto st = product_state(std::vector<WaveFunction>{fock_state(0), fock_state(0)});
    const auto c = center_of_mass_tomogram(st);
    const RVector mu = vec({0.8, -0.3}), nu = vec({0.5, 1.1});
    const double var = (mu.squaredNorm() + nu.squaredNorm()) / 2.0;
    double err = 0.0;
    for (double X : {-2.0, -0.5, 0.0, 0.9, 1.7}) err = std::max(err, std::abs(c(X, mu, nu) - oracle::gaussian(X, 0.0, var)));
    CHECK(err < 1e-5);

    SUBCASE("homogeneity") {
        for (double lam : {-2.0, 2.0, -0.5})
            for (double X : {-0.7, 0.4}) {
                const double lhs = c(lam * X, lam * mu, lam * nu);
                CHECK(std::abs(lhs - c(X, mu, nu) / std::abs(lam)) < 1e-4);
            }
    }
    SUBCASE("differential equation") {
        CHECK(center_of_mass_differential_residual(c, 0.6, mu, nu) <= 1e-3);
    }
    SUBCASE("all directions zero") {
        CHECK_THROWS_AS(c(0.0, vec({0.0, 0.0}), vec({0.0, 0.0})), Error);
    }
}

TEST_CASE("center-of-mass tomogram of thermal times coherent has the summed variance") {
    const auto st = product_state(std::vector<DensityMatrixCV>{thermal_state(0.5), coherent_density_matrix(cplx(0.5, 0.0))});
    const auto c = center_of_mass_tomogram(st);
    const RVector mu = vec({0.7, 1.0}), nu = vec({-0.6, 0.2});
    const double var = 1.0 * (mu[0] * mu[0] + nu[0] * nu[0]) + 0.5 * (mu[1] * mu[1] + nu[1] * nu[1]);
    const double mean = mu[1] * 0.5 * std::sqrt(2.0);
    double err = 0.0;
    for (double X : {-1.5, 0.0, 0.8, 2.2}) err = std::max(err, std::abs(c(X, mu, nu) - oracle::gaussian(X, mean, var)));
    CHECK(err < 1e-5);
}

TEST_CASE("subsystem marginals reduce to the single-mode tomogram") {
    const auto st = product_state(std::vector<WaveFunction>{fock_state(0), coherent_state(cplx(0.6, -0.3))});
    const auto m = subsystem_marginal(multimode_symplectic_tomogram(st), 1);
    REQUIRE(m.modes() == 1);
    double err = 0.0;
    for (double X : {-1.0, 0.2, 0.9}) err = std::max(err, std::abs(m(vec({X}), vec({0.8}), vec({-0.6})) - oracle::vacuum_tomogram(X, 0.8, -0.6)));
    CHECK(err < 1e-5);

    const auto c = subsystem_marginal(center_of_mass_tomogram(st), 1);
    double cerr = 0.0;
    for (double X : {-1.0, 0.2, 0.9}) cerr = std::max(cerr, std::abs(c(X, vec({0.8}), vec({-0.6})) - oracle::vacuum_tomogram(X, 0.8, -0.6)));
    CHECK(cerr < 1e-4);

    CHECK_THROWS_AS(subsystem_marginal(multimode_symplectic_tomogram(st), 2), Error);
}

TEST_CASE("classical Gaussian symplectic tomogram") {
    const auto g = correlated_gaussian();
    const auto m = multimode_symplectic_tomogram(classical_state(g));
    double err = 0.0;
    for (auto [x1, x2] : std::vector<std::array<double, 2>>{{0.1, -0.3}, {1.2, 0.5}, {-0.8, 1.4}}) {
        const double v = m(vec({x1, x2}), vec({0.7, -1.1}), vec({0.4, 0.6}));
        err = std::max(err, std::abs(v - projected_oracle(g, x1, x2, 0.7, 0.4, -1.1, 0.6)));
    }
    CHECK(err < 1e-10);

    SUBCASE("sampled density agrees") {
        std::vector<Grid1D> axes;
        for (int a = 0; a < 4; ++a) {
            const double h = 7.0 * std::sqrt(g.cov(a, a));
            axes.push_back(make_grid(g.mean[a] - h, g.mean[a] + h, 40));
        }
        const auto ms = multimode_symplectic_tomogram(classical_state(sample_density(g, axes)));
        double serr = 0.0, peak = 0.0;
        for (auto [x1, x2] : std::vector<std::array<double, 2>>{{0.1, -0.3}, {1.2, 0.5}, {-0.8, 1.4}, {0.3, 0.2}})
            for (auto [m1, n1, m2, n2] : std::vector<std::array<double, 4>>{{0.7, 0.4, -1.1, 0.6}, {0.2, 1.0, 1.0, -0.3}}) {
                const double ref = projected_oracle(g, x1, x2, m1, n1, m2, n2);
                peak = std::max(peak, ref);
                serr = std::max(serr, std::abs(ms(vec({x1, x2}), vec({m1, m2}), vec({n1, n2})) - ref));
            }
        CHECK(serr < 1e-3 * peak);
    }
}

TEST_CASE("classical two-mode Gaussian reconstruction") {
    const auto g = correlated_gaussian();
    const auto st = classical_state(g);
    std::vector<Grid1D> axes;
    for (int a = 0; a < 4; ++a) axes.push_back(make_grid(g.mean[a] - 2.0, g.mean[a] + 2.0, 9));
    const auto check = [&](const PhaseSpaceDensityND& f) {
        double err = 0.0, peak = 0.0;
        std::vector<int> idx(4, 0);
        for (std::size_t n = 0; n < f.values.size(); ++n) {
            RVector z(4);
            for (int a = 0; a < 4; ++a) z[a] = axes[a][idx[a]];
            const double ref = normal4(g, z);
            peak = std::max(peak, ref);
            err = std::max(err, std::abs(f.values[f.index(idx)] - ref));
            for (int a = 3; a >= 0; --a) {
                if (++idx[a] < 9) break;
                idx[a] = 0;
            }
        }
        return err / peak;
    };
    SUBCASE("from the symplectic tomogram") {
        CHECK(check(reconstruct_multimode_classical(multimode_symplectic_tomogram(st), axes)) < 2e-3);
    }
    SUBCASE("from the center-of-mass tomogram") {
        CHECK(check(reconstruct_multimode_classical(center_of_mass_tomogram(st), axes)) < 5e-3);
    }
}

TEST_CASE("product quantum reconstruction") {
    const auto coh = coherent_state(cplx(0.7, 0.2));
    const auto st = product_state(std::vector<WaveFunction>{fock_state(0), coh});
    const auto rho = reconstruct_multimode_quantum(multimode_symplectic_tomogram(st), 16);
    REQUIRE(rho.size() == 2);
    CHECK(state_fidelity(rho[0], to_density_matrix(fock_state(0), 16)) >= 0.995);
    CHECK(state_fidelity(rho[1], to_density_matrix(coh, 16)) >= 0.995);

    CHECK_THROWS_AS(reconstruct_multimode_quantum(multimode_symplectic_tomogram(classical_state(correlated_gaussian()))),
                    Error);
}

TEST_CASE("multimode entropic uncertainty") {
    SUBCASE("two coherent modes saturate") {
        const auto r = multimode_entropy_check({coherent_state(cplx(0.5, 0.1)), coherent_state(cplx(-0.3, 0.8))});
        CHECK(std::abs(r.residual) < 1e-3);
    }
    SUBCASE("vacuum times Fock one is strict") {
        CHECK(multimode_entropy_check({fock_state(0), fock_state(1)}).residual > 0.1);
    }
    SUBCASE("single mode matches the one-mode relation") {
        const auto psi = fock_state(2);
        const auto r = multimode_entropy_check({psi});
        const auto e = position_momentum_entropies(psi);
        CHECK(std::abs(r.residual - (e.position + e.momentum - std::log(oracle::pi * std::exp(1.0)))) < 1e-12);
    }
    SUBCASE("three modes add up") {
        const auto r = multimode_entropy_check({fock_state(0), fock_state(0), fock_state(0)});
        CHECK(std::abs(r.residual) < 1e-3);
    }
    SUBCASE("too many modes") {
        CHECK_THROWS_AS(multimode_entropy_check({fock_state(0), fock_state(0), fock_state(0), fock_state(0)}), Error);
    }
}
