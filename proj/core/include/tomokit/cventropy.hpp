#pragma once

#include <string>
#include <vector>

#include "tomokit/cvstates.hpp"
#include "tomokit/cvtomo.hpp"
#include "tomokit/numkernel.hpp"

namespace tomokit {

// -sum p ln p dx with 0 ln 0 = 0. Input must integrate to 1 within 1e-4.
double differential_entropy(const RVector& density, double spacing);
// (1/(1-q)) ln int p^q dx for q > 0; q == 1 returns the Shannon value.
double renyi_differential_entropy(const RVector& density, double spacing, double q);

struct PositionMomentumEntropies {
    double position = 0.0;
    double momentum = 0.0;
};
PositionMomentumEntropies position_momentum_entropies(const WaveFunction& psi);

// S(mu, nu) = -int M ln M dX.
double tomographic_entropy(const SymplecticTomogram& m, double mu, double nu);
inline double tomographic_entropy(const SymplecticTomogram& m, double theta) {
    return tomographic_entropy(m, std::cos(theta), std::sin(theta));
}

struct EntropicUrEntry {
    double theta = 0.0;
    double entropy = 0.0;
    double entropy_conjugate = 0.0;
    double residual = 0.0;  // S(theta) + S(theta + pi/2) - ln(pi e)
};
std::vector<EntropicUrEntry> entropic_ur_check(const SymplecticTomogram& m, const std::vector<double>& thetas);

struct RenyiUrEntry {
    double q = 0.0;
    double residual = 0.0;
};
inline const std::vector<double> default_renyi_q = {0.1, 0.25, 0.5, 0.75, 0.9};
// Orders alpha = 1/(1-q) at theta + pi/2 and beta = 1/(1+q) at theta, so 1/alpha + 1/beta = 2.
// The residual is R_alpha + R_beta minus the bound, in entropy units; it tends to the Shannon
// residual as q -> 0.
std::vector<RenyiUrEntry> renyi_ur_check(const SymplecticTomogram& m, double theta,
                                         const std::vector<double>& q_values = default_renyi_q);

std::string format_entry(const EntropicUrEntry& e);
std::string format_entry(const RenyiUrEntry& e);

struct PhaseSpaceMarginals {
    Grid1D qgrid;
    Grid1D pgrid;
    RVector position;
    RVector momentum;
    double position_entropy = 0.0;
    double momentum_entropy = 0.0;
};
PhaseSpaceMarginals phase_space_marginals(const PhaseSpaceDensity& f);

// Variances and covariances ordered (p1, q1[, p2, q2]).
struct DispersionMatrix {
    int modes = 1;
    RMatrix sigma;
    double qq(int mode = 0) const { return sigma(2 * mode + 1, 2 * mode + 1); }
    double pp(int mode = 0) const { return sigma(2 * mode, 2 * mode); }
    double qp(int mode = 0) const { return sigma(2 * mode + 1, 2 * mode); }
};

DispersionMatrix dispersion_matrix(const PhaseSpaceDensity& f);
DispersionMatrix dispersion_matrix(const DensityMatrixCV& rho);
// Product of two single-mode states.
DispersionMatrix dispersion_matrix(const DensityMatrixCV& rho1, const DensityMatrixCV& rho2);
DispersionMatrix make_dispersion(const RMatrix& sigma);

enum class StateKind { classical, quantum };

struct Condition {
    std::string name;
    double value = 0.0;  // compared against zero
    bool ok = false;
};
struct UncertaintyReport {
    std::vector<Condition> conditions;
    bool all_ok() const;
};
// Classical: nonnegative variances, sigma_qq sigma_pp >= sigma_qp^2 per mode, det >= 0 and the
// leading 3x3 minor >= 0. Quantum: sigma_qq sigma_pp - sigma_qp^2 >= 1/4 per mode and, for two
// modes, sigma + (i/2) Omega positive semidefinite. Tolerance 1e-9.
UncertaintyReport uncertainty_tests(const DispersionMatrix& sigma, StateKind kind);

}  // namespace tomokit
