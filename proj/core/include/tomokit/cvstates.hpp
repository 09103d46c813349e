#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tomokit/numkernel.hpp"

namespace tomokit {

// Fock-basis density matrix, rows/cols indexed by photon number.
struct DensityMatrixCV {
    CMatrix rho;
    int cutoff() const { return static_cast<int>(rho.rows()); }
};

// W(q, p) normalized so that sum W dq dp / (2 pi) = 1. values(iq, ip).
struct WignerFunction {
    Grid1D qgrid;
    Grid1D pgrid;
    RMatrix values;
};

// Classical phase-space probability density f(q, p). values(iq, ip).
struct PhaseSpaceDensity {
    Grid1D qgrid;
    Grid1D pgrid;
    RMatrix values;
};

inline constexpr int default_cutoff = 32;

// n-th oscillator eigenfunction on an arbitrary grid, no range restriction.
WaveFunction oscillator_eigenfunction(int n, const Grid1D& grid = Grid1D());
// Same for all n < count at once; column n holds psi_n.
RMatrix oscillator_eigenfunctions(int count, const Grid1D& grid);

WaveFunction fock_state(int n, const Grid1D& grid = Grid1D());
WaveFunction coherent_state(cplx alpha, const Grid1D& grid = Grid1D());
DensityMatrixCV thermal_state(double nbar, int cutoff = default_cutoff);
DensityMatrixCV coherent_density_matrix(cplx alpha, int cutoff = default_cutoff);
// Projection of psi onto the first `cutoff` Fock states.
DensityMatrixCV to_density_matrix(const WaveFunction& psi, int cutoff = default_cutoff);

void validate(const DensityMatrixCV& rho, double tol = 1e-8);
void validate(const PhaseSpaceDensity& f, double tol = 1e-6);

// Eigen-decomposition of rho into weighted wave functions, dropping weights below `floor`.
std::vector<std::pair<double, WaveFunction>> spectral_wavefunctions(const DensityMatrixCV& rho, const Grid1D& grid,
                                                                    double floor = 1e-14);

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2; eigenvalues of b are clipped at zero
// so slightly non-physical reconstructions can be compared.
double state_fidelity(const DensityMatrixCV& a, const DensityMatrixCV& b);

// Bivariate Gaussian density. Without explicit grids the window is centred on the mean
// and spans nine marginal standard deviations on each axis, 128 points per axis.
PhaseSpaceDensity classical_gaussian_density(double mean_q, double mean_p, const Eigen::Matrix2d& cov,
                                             std::optional<std::pair<Grid1D, Grid1D>> grids = std::nullopt);

// q nodes must sit on the half-lattice of the wave-function grid; the default
// [-8, 8] grid with 256 points does for the default position grid.
WignerFunction wigner_from_state(const WaveFunction& psi, std::optional<Grid1D> qgrid = std::nullopt,
                                 std::optional<Grid1D> pgrid = std::nullopt);
WignerFunction wigner_from_state(const DensityMatrixCV& rho, std::optional<Grid1D> qgrid = std::nullopt,
                                 std::optional<Grid1D> pgrid = std::nullopt, const Grid1D& xgrid = Grid1D());

}  // namespace tomokit
