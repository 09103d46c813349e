#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tomokit/cvstates.hpp"
#include "tomokit/fidelity.hpp"

using namespace tomokit;

namespace {

struct Fixture {
    const char* name;
    OpticalTomogram w;
    SymplecticTomogram m;
};

std::vector<Fixture> fixtures() {
    const auto vac = fock_state(0), f1 = fock_state(1), coh = coherent_state(cplx(1.0, 0.0));
    const auto th = thermal_state(0.5);
    return {{"vacuum", optical_tomogram(vac), symplectic_tomogram(vac)},
            {"fock1", optical_tomogram(f1), symplectic_tomogram(f1)},
            {"coherent", optical_tomogram(coh), symplectic_tomogram(coh)},
            {"thermal", optical_tomogram(th), symplectic_tomogram(th)}};
}

}  // namespace

TEST_CASE("joint distribution of two vacua is the product Gaussian") {
    const auto w = optical_tomogram(fock_state(0));
    const auto p = joint_distribution(w, w);
    double err = 0.0;
    for (int i = 0; i < p.xgrid.count(); i += 7)
        for (int j = 0; j < p.ygrid.count(); j += 5) {
            const double x = p.xgrid[i], y = p.ygrid[j];
            err = std::max(err, std::abs(p.values(i, j) - std::exp(-x * x - y * y) / oracle::pi));
        }
    CHECK(err < 1e-5);
}

TEST_CASE("joint distribution normalization and symmetry") {
    const auto a = optical_tomogram(fock_state(1)), b = optical_tomogram(coherent_state(cplx(1.0, 0.0)));
    const auto p = joint_distribution(a, b), q = joint_distribution(b, a);
    CHECK(std::abs(p.values.sum() * p.xgrid.spacing() * p.ygrid.spacing() - 1.0) < 1e-4);
    CHECK(p.values.minCoeff() >= -1e-12);
    CHECK((p.values.transpose() - q.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("joint distribution rejects mismatched angle grids") {
    const auto a = optical_tomogram(fock_state(0));
    const auto b = optical_tomogram(fock_state(0), make_grid(0.0, 2.0 * oracle::pi, 128));
    CHECK_THROWS_AS(joint_distribution(a, b), Error);
}

TEST_CASE("rotated marginal of two vacua") {
    const auto w = optical_tomogram(fock_state(0));
    const auto m = rotated_marginal(joint_distribution(w, w));
    double err = 0.0;
    for (int k = 0; k < m.bgrid.count(); ++k) {
        const double b = m.bgrid[k];
        err = std::max(err, std::abs(m.values[k] - std::exp(-b * b) / std::sqrt(oracle::pi)));
    }
    CHECK(err < 1e-4);
    CHECK(std::abs(m.values.sum() * m.bgrid.spacing() - 1.0) < 1e-4);
    CHECK(std::abs(m.characteristic(0.0) - 1.0) < 1e-5);
    for (double l : {0.3, 1.7, 5.0}) CHECK(std::abs(m.characteristic(-l) - std::conj(m.characteristic(l))) < 1e-8);
}

TEST_CASE("fidelity closed forms") {
    const auto vac = optical_tomogram(fock_state(0));
    const auto coh = optical_tomogram(coherent_state(cplx(1.0, 0.0)));
    const auto same = fidelity_from_tomograms(vac, vac);
    CHECK(std::abs(same.fidelity - 1.0) < 1e-3);
    CHECK(same.bounds_ok);
    const auto cross = fidelity_from_tomograms(vac, coh);
    CHECK(std::abs(cross.fidelity - std::exp(-1.0)) < 1e-3);
    CHECK(format_fidelity(same).rfind("F=", 0) == 0);
}

TEST_CASE("fidelity agrees with the symbol trace for all fixture pairs") {
    const auto fx = fixtures();
    for (std::size_t i = 0; i < fx.size(); ++i)
        for (std::size_t j = i; j < fx.size(); ++j) {
            const Fixture& a = fx[i];
            const Fixture& b = fx[j];
            const auto r = fidelity_from_tomograms(a.w, b.w);
            const auto rev = fidelity_from_tomograms(b.w, a.w);
            const double trace = symbol_pair_trace(a.m, b.m).real();
            INFO(a.name << " x " << b.name << " F=" << r.fidelity << " trace=" << trace);
            CHECK(r.im_residual <= 1e-3);
            CHECK(r.bounds_ok);
            CHECK(std::abs(r.fidelity - rev.fidelity) < 1e-4);
            CHECK(std::abs(r.fidelity - trace) < 2e-3);
        }
}

TEST_CASE("fidelity rejects a non-decaying characteristic") {
    const auto vac = optical_tomogram(fock_state(0));
    CHECK_THROWS_AS(fidelity_from_tomograms(vac, vac, 2.0), Error);
}
