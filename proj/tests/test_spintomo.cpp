#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "tomokit/error.hpp"
#include "tomokit/spintomo.hpp"

using namespace tomokit;

namespace {

constexpr double ln2 = 0.69314718055994530942;

DensityMatrixSpin diag_state(std::initializer_list<double> d) {
    RVector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v[i++] = x;
    return {v.cast<cplx>().asDiagonal()};
}

// direct <m| u rho u^dagger |m> without matrix products
double direct_w(const DensityMatrixSpin& rho, const UnitaryMatrix& u, int m) {
    cplx acc = 0.0;
    for (int a = 0; a < rho.dim(); ++a)
        for (int b = 0; b < rho.dim(); ++b) acc += u(m, a) * rho.entries(a, b) * std::conj(u(m, b));
    return acc.real();
}

}  // namespace

TEST_CASE("spin tomogram") {
    SUBCASE("diagonal state at the identity") {
        const auto rho = diag_state({0.5, 0.3, 0.2});
        const auto w = spin_tomogram(rho, UnitaryMatrix::Identity(3, 3));
        CHECK(w.probabilities[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(w.probabilities[2] == doctest::Approx(0.2).epsilon(1e-15));
    }
    SUBCASE("maximally mixed is uniform") {
        const auto w = spin_tomogram(maximally_mixed(4), haar_unitary(4, 3));
        CHECK((w.probabilities.array() - 0.25).abs().maxCoeff() < 1e-12);
    }
    SUBCASE("eigen route and direct evaluation agree") {
        double err = 0.0, norm = 0.0;
        for (int i = 0; i < 16; ++i) {
            Rng rng = substream(11, i);
            const int n = 2 + i % 4;
            const auto rho = haar_mixed_state(n, rng);
            const auto u = haar_unitary(n, rng);
            const RVector w = spin_tomogram(rho, u).probabilities;
            const RVector e = spin_tomogram_from_eigenbasis(rho, u);
            for (int m = 0; m < n; ++m) err = std::max({err, std::abs(w[m] - direct_w(rho, u, m)), std::abs(e[m] - w[m])});
            norm = std::max(norm, std::abs(w.sum() - 1.0));
        }
        CHECK(err < 1e-12);
        CHECK(norm < 1e-12);
    }
    SUBCASE("composition") {
        Rng rng = substream(5, 0);
        const auto rho = haar_mixed_state(3, rng);
        const auto u = haar_unitary(3, rng), v = haar_unitary(3, rng);
        const DensityMatrixSpin moved{v * rho.entries * v.adjoint()};
        const RVector a = spin_tomogram(rho, u * v).probabilities, b = spin_tomogram(moved, u).probabilities;
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(spin_tomogram(maximally_mixed(3), UnitaryMatrix::Identity(2, 2)), Error);
    }
    SUBCASE("validation") {
        CMatrix bad = CMatrix::Identity(2, 2);
        CHECK_THROWS_AS(spin_state(bad), Error);
        bad(0, 0) = 1.5;
        bad(1, 1) = -0.5;
        CHECK_THROWS_AS(spin_state(bad), Error);
    }
}

TEST_CASE("quantum Fourier matrix") {
    const CMatrix f2 = qft_matrix(2);
    CHECK(std::abs(f2(1, 1) + 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(f2(0, 1) - 1.0 / std::sqrt(2.0)) < 1e-15);
    for (int n : {2, 3, 4, 8}) {
        const CMatrix f = qft_matrix(n);
        const CMatrix id = CMatrix::Identity(n, n);
        CHECK((f * f.adjoint() - id).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((f - f.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((f * f * f * f - id).cwiseAbs().maxCoeff() < 1e-10);
    }
    // F^N = 1 only holds for N in {1, 2, 4}
    const CMatrix f3 = qft_matrix(3);
    CHECK((f3 * f3 * f3 - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() > 0.5);
    CHECK_THROWS_AS(qft_matrix(1), Error);
}

TEST_CASE("tomographic entropies") {
    SUBCASE("Shannon") {
        CHECK(std::abs(shannon_entropy(spin_tomogram(maximally_mixed(5), haar_unitary(5, 2)).probabilities) - std::log(5.0)) < 1e-12);
        CVector psi(3);
        psi << cplx(0.3, 0.1), cplx(-0.5, 0.2), cplx(0.4, 0.6);
        const auto pure = pure_spin_state(psi);
        CHECK(std::abs(shannon_entropy(spin_tomogram(pure, diagonalizing_unitary(pure)).probabilities)) < 1e-12);
        const auto q = diag_state({0.75, 0.25});
        const double ref = 0.75 * std::log(4.0 / 3.0) + 0.25 * std::log(4.0);
        CHECK(std::abs(shannon_entropy(spin_tomogram(q, UnitaryMatrix::Identity(2, 2)).probabilities) - ref) < 1e-15);
    }
    SUBCASE("Renyi") {
        RVector w(2);
        w << 0.75, 0.25;
        CHECK(std::abs(renyi_entropy(w, 2.0) + std::log(5.0 / 8.0)) < 1e-15);
        CHECK(std::abs(renyi_entropy(w, 1.0 + 1e-6) - shannon_entropy(w)) < 1e-4);
        CHECK(std::abs(renyi_entropy(w, 1.0 - 1e-6) - shannon_entropy(w)) < 1e-4);
        const RVector u = RVector::Constant(6, 1.0 / 6.0);
        for (double q : {0.3, 0.5, 2.0, 5.0}) CHECK(std::abs(renyi_entropy(u, q) - std::log(6.0)) < 1e-12);
        CHECK_THROWS_AS(renyi_entropy(w, 1.0), Error);
        CHECK_THROWS_AS(renyi_entropy(w, -0.5), Error);
    }
    SUBCASE("relative q-entropy") {
        RVector a(2), b(2);
        a << 1.0, 0.0;
        b << 0.5, 0.5;
        CHECK(relative_q_entropy(a, a, 0.5) == 0.0);
        // -(1)(ln_{1/2} 0.5) = -(0.5^{0.5} - 1) / 0.5
        CHECK(std::abs(relative_q_entropy(a, b, 0.5) - 2.0 * (1.0 - std::sqrt(0.5))) < 1e-15);
        RVector c(3), d(3);
        c << 0.2, 0.5, 0.3;
        d << 0.4, 0.1, 0.5;
        double kl = 0.0;
        for (int i = 0; i < 3; ++i) kl += c[i] * std::log(c[i] / d[i]);
        CHECK(std::abs(relative_q_entropy(c, d, 1.0 + 1e-6) - kl) < 1e-6);
        CHECK(std::abs(relative_q_entropy(c, d, 1.0 - 1e-6) - kl) < 1e-6);
        for (int i = 0; i < 50; ++i) {
            Rng rng = substream(21, i);
            const auto rho1 = haar_mixed_state(3, rng), rho2 = haar_mixed_state(3, rng);
            const auto u = haar_unitary(3, rng);
            const RVector w1 = spin_tomogram(rho1, u).probabilities, w2 = spin_tomogram(rho2, u).probabilities;
            for (double q : {0.5, 1.0 - 1e-6, 1.0, 1.0 + 1e-6, 2.0}) CHECK(relative_q_entropy(w1, w2, q) >= -1e-12);
        }
        CHECK_THROWS_AS(relative_q_entropy(b, a, 0.5), Error);
    }
}

TEST_CASE("minimization over the unitary group") {
    SUBCASE("pure state") {
        CVector psi(2);
        psi << cplx(0.6, 0.0), cplx(0.0, 0.8);
        const auto r = min_over_unitaries(pure_spin_state(psi), EntropyMode::shannon(), 100, 1);
        CHECK(std::abs(r.min_value) < 1e-12);
        CHECK(std::abs(r.attained) < 1e-12);
    }
    SUBCASE("diagonal qubit") {
        const auto r = min_over_unitaries(diag_state({0.75, 0.25}), EntropyMode::shannon(), 200, 2);
        CHECK(std::abs(r.min_value - (0.75 * std::log(4.0 / 3.0) + 0.25 * std::log(4.0))) < 1e-15);
        CHECK((r.argmin - UnitaryMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("random qutrits, Shannon and Renyi") {
        for (int s = 0; s < 10; ++s) {
            Rng rng = substream(9, s);
            const auto rho = haar_mixed_state(3, rng);
            const RVector lam = Eigen::SelfAdjointEigenSolver<CMatrix>(rho.entries).eigenvalues();
            const double purity = lam.squaredNorm();
            const auto sh = min_over_unitaries(rho, EntropyMode::shannon(), 1000, 100 + s);
            CHECK(std::abs(sh.attained - sh.min_value) < 1e-12);
            const auto r2 = min_over_unitaries(rho, EntropyMode::renyi(2.0), 1000, 200 + s);
            CHECK(std::abs(r2.min_value + std::log(purity)) < 1e-12);
            CHECK(std::abs(r2.attained - r2.min_value) < 1e-12);
            CHECK(r2.sampled_min >= r2.min_value - 1e-12);
            const auto rh = min_over_unitaries(rho, EntropyMode::renyi(0.5), 1000, 300 + s);
            CHECK(std::abs(rh.attained - rh.min_value) < 1e-12);
        }
    }
}

TEST_CASE("measurement entropic bounds") {
    ObservablePair mub{UnitaryMatrix::Identity(2, 2), qft_matrix(2), RVector::Zero(2), RVector::Zero(2)};
    CVector up(2);
    up << 1.0, 0.0;
    const auto r = measurement_bounds(mub, up);
    CHECK(std::abs(r.h_p) < 1e-15);
    CHECK(std::abs(r.h_q - ln2) < 1e-12);
    REQUIRE(r.unbiased);
    CHECK(std::abs(r.mub) < 1e-12);

    const auto same = measurement_bounds({UnitaryMatrix::Identity(2, 2), UnitaryMatrix::Identity(2, 2), {}, {}}, up);
    CHECK(std::abs(same.overlap - 1.0) < 1e-15);
    CHECK(std::abs(same.maassen_uffink) < 1e-15);

    ObservablePair four{UnitaryMatrix::Identity(4, 4), qft_matrix(4), {}, {}};
    double worst = 1e300;
    for (int i = 0; i < 200; ++i) {
        Rng rng = substream(31, i);
        const CVector psi = haar_unitary(4, rng).col(0);
        const auto b = measurement_bounds(four, psi);
        REQUIRE(b.unbiased);
        worst = std::min({worst, b.deutsch, b.maassen_uffink, b.mub});
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("QFT entropic inequalities") {
    SUBCASE("maximally mixed") {
        for (int n : {2, 3, 5}) {
            const auto r = qft_inequality_check(maximally_mixed(n), haar_unitary(n, 4), 2.0, 2.0 / 3.0);
            CHECK(std::abs(r.shannon_rotated - std::log(n)) < 1e-12);
            CHECK(std::abs(r.renyi_rotated - std::log(n)) < 1e-12);
        }
    }
    SUBCASE("pure qubit saturates the Shannon form") {
        CVector psi(2);
        psi << cplx(0.6, 0.0), cplx(0.48, 0.64);
        const auto rho = pure_spin_state(psi);
        const auto r = qft_inequality_check(rho, diagonalizing_unitary(rho), 1.0, 1.0);
        CHECK(std::abs(r.shannon_rotated) < 1e-12);
        CHECK(std::abs(r.von_neumann) < 1e-12);
    }
    SUBCASE("Haar sweep") {
        double worst = 1e300;
        for (int n : {2, 3, 4, 8})
            for (int i = 0; i < 1000; ++i) {
                Rng rng = substream(41 + n, i);
                const auto rho = haar_mixed_state(n, rng);
                const auto u = haar_unitary(n, rng);
                worst = std::min(worst, qft_inequality_check(rho, u, 2.0, 2.0 / 3.0).min_residual());
            }
        CHECK(worst >= -1e-10);
    }
    SUBCASE("order constraint") {
        CHECK_THROWS_AS(qft_inequality_check(maximally_mixed(2), UnitaryMatrix::Identity(2, 2), 2.0, 2.0), Error);
    }
}

TEST_CASE("subadditivity") {
    SUBCASE("product state at the product eigenbasis") {
        Rng rng = substream(51, 0);
        const auto a = haar_mixed_state(2, rng), b = haar_mixed_state(3, rng);
        const UnitaryMatrix u = Eigen::kroneckerProduct(diagonalizing_unitary(a), diagonalizing_unitary(b)).eval();
        const auto r = bipartite_subadditivity(tensor(a, b), 2, 3, u);
        CHECK(std::abs(r.residual) < 1e-12);
        CHECK(std::abs(r.von_neumann) < 1e-12);
        // relabeling the factors swaps the subsystem entropies
        const UnitaryMatrix v = Eigen::kroneckerProduct(diagonalizing_unitary(b), diagonalizing_unitary(a)).eval();
        const auto s = bipartite_subadditivity(tensor(b, a), 3, 2, v);
        CHECK(s.h1 == doctest::Approx(r.h2).epsilon(1e-14));
        CHECK(s.h2 == doctest::Approx(r.h1).epsilon(1e-14));
    }
    SUBCASE("Bell state") {
        const auto r = bipartite_subadditivity(bell_state(), 2, 2, UnitaryMatrix::Identity(4, 4));
        CHECK(std::abs(r.h12 - ln2) < 1e-12);
        CHECK(std::abs(r.h1 - ln2) < 1e-12);
        CHECK(std::abs(r.residual - ln2) < 1e-12);
        CHECK(std::abs(r.von_neumann - 2.0 * ln2) < 1e-12);
    }
    SUBCASE("Haar sweep") {
        double worst = 1e300;
        for (int i = 0; i < 200; ++i) {
            Rng rng = substream(61, i);
            const auto rho = haar_mixed_state(6, rng);
            const auto r = bipartite_subadditivity(rho, 2, 3, haar_unitary(6, rng));
            worst = std::min({worst, r.residual, r.von_neumann});
        }
        CHECK(worst >= -1e-10);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(bipartite_subadditivity(bell_state(), 2, 3, UnitaryMatrix::Identity(4, 4)), Error);
    }
}

TEST_CASE("strong subadditivity") {
    const std::vector<int> dims{2, 2, 2};
    SUBCASE("product state") {
        Rng rng = substream(71, 0);
        const auto a = haar_mixed_state(2, rng), b = haar_mixed_state(2, rng), c = haar_mixed_state(2, rng);
        const UnitaryMatrix u = Eigen::kroneckerProduct(
            Eigen::kroneckerProduct(diagonalizing_unitary(a), diagonalizing_unitary(b)).eval(), diagonalizing_unitary(c)).eval();
        const auto r = tripartite_ssa(tensor(tensor(a, b), c), dims, u);
        CHECK(std::abs(r.residual) < 1e-12);
    }
    SUBCASE("GHZ state") {
        const auto r = tripartite_ssa(ghz_state(), dims, UnitaryMatrix::Identity(8, 8));
        // w = (1/2, 0, ..., 0, 1/2): every projected entropy is ln 2
        CHECK(std::abs(r.h123 - ln2) < 1e-12);
        CHECK(std::abs(r.h12 - ln2) < 1e-12);
        CHECK(std::abs(r.h2 - ln2) < 1e-12);
        CHECK(std::abs(r.residual) < 1e-12);
        CHECK(std::abs(r.von_neumann - ln2) < 1e-12);
    }
    SUBCASE("Haar sweep") {
        double worst = 1e300;
        for (int i = 0; i < 200; ++i) {
            Rng rng = substream(81, i);
            const auto rho = haar_mixed_state(8, rng);
            const auto r = tripartite_ssa(rho, dims, haar_unitary(8, rng));
            worst = std::min({worst, r.residual, r.von_neumann});
        }
        CHECK(worst >= -1e-10);
    }
}

TEST_CASE("Haar group averages") {
    SUBCASE("maximally mixed") {
        const auto g = group_average_entropy(maximally_mixed(3), AverageMode::shannon(), 1000, 1);
        CHECK(std::abs(g.mean - std::log(3.0)) < 1e-12);
        CHECK(std::abs(g.bound_residual - 0.5 * std::log(3.0)) < 1e-12);
    }
    SUBCASE("pure qubit") {
        CVector psi(2);
        psi << 1.0, 0.0;
        const auto g = group_average_entropy(pure_spin_state(psi), AverageMode::shannon(), 10000, 2);
        CHECK(std::abs(g.mean - 0.5) < 0.02);
        CHECK(g.bound_residual >= -3.0 * g.std_error);
        CHECK(g.column_residual >= -3.0 * g.column_std_error);
    }
    SUBCASE("Renyi pair") {
        Rng rng = substream(91, 0);
        const auto g = group_average_entropy(haar_mixed_state(3, rng), AverageMode::renyi_pair(2.0, 2.0 / 3.0), 10000, 3);
        CHECK(g.bound_residual >= -3.0 * g.std_error);
    }
    SUBCASE("sample count") {
        CHECK_THROWS_AS(group_average_entropy(maximally_mixed(2), AverageMode::shannon(), 10, 0), Error);
    }
    SUBCASE("deterministic") {
        const auto a = group_average_entropy(maximally_mixed(2), AverageMode::shannon(), 1000, 5);
        const auto b = group_average_entropy(maximally_mixed(2), AverageMode::shannon(), 1000, 5);
        CHECK(format_report(a) == format_report(b));
    }
}
