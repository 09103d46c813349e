#pragma once

#include <optional>
#include <string>

#include "tomokit/cvtomo.hpp"

namespace tomokit {

struct ReconstructionOptions {
    // Radial extent of the characteristic function. Chosen from its decay when unset;
    // an explicit window must see |xi| <= 1e-6 at its edge.
    std::optional<double> window;
    // Output phase-space grid; fitted to the tomogram support when unset (129 x 129).
    std::optional<Grid1D> qgrid, pgrid;
    int output_points = 129;
    // Threshold defining the automatic window.
    double decay_threshold = 1e-9;
    // Fock cutoff the polar sampling must resolve (density-matrix route).
    int cutoff = default_cutoff;
    // Fail when the reconstructed trace misses 1 by more than 1e-2.
    bool check_trace = true;
};

// Characteristic function chi(mu, nu) = xi(1, mu, nu) sampled on a polar grid
// (half circle; the other half follows from chi(-mu, -nu) = conj chi(mu, nu)).
struct PolarCharacteristic {
    RVector theta;       // n_half angles in [0, pi)
    Quadrature radial;   // nodes on [0, window]
    CMatrix chi;         // n_half x n_radial
    double window = 0.0;
    double support = 0.0;  // radius containing the tomogram support
};

double tomogram_support_radius(const SymplecticTomogram& m, double rel_threshold = 1e-12);
double characteristic_window(const SymplecticTomogram& m, double threshold = 1e-9);
PolarCharacteristic sample_characteristic(const SymplecticTomogram& m, const ReconstructionOptions& opt,
                                          double output_radius);

// f(q, p) from the inverse two-dimensional Fourier transform of chi; may be negative.
PhaseSpaceDensity reconstruct_phase_space(const SymplecticTomogram& m, const ReconstructionOptions& opt = {});
PhaseSpaceDensity reconstruct_phase_space(const PolarCharacteristic& chi, const Grid1D& qgrid, const Grid1D& pgrid);

// Fock-basis matrix of the operator with characteristic function chi; Hermitian, eigenvalues unconstrained.
DensityMatrixCV reconstruct_density_matrix(const SymplecticTomogram& m, int cutoff = default_cutoff,
                                           const ReconstructionOptions& opt = {});
DensityMatrixCV reconstruct_density_matrix(const PolarCharacteristic& chi, int cutoff, bool check_trace = true);

// <m| exp(beta a^dag - beta^* a) |n> with beta = (s / sqrt 2) exp(i (theta - pi/2)),
// stripped of its angular factor exp(i (m - n)(theta - pi/2)).
double displacement_radial(int m, int n, double s);

struct ClassificationResult {
    bool classical = false;
    bool quantum = false;
    double min_phase_space_value = 0.0;
    double min_density_eigenvalue = 0.0;
    double tolerance = 0.0;
    double trace = 0.0;  // trace of the reconstructed Fock matrix (diagnostic)
};

// The tolerance defaults to 1e-6 times the largest reconstructed magnitude.
ClassificationResult classify_tomogram(const SymplecticTomogram& m, std::optional<double> tolerance = std::nullopt,
                                       int cutoff = default_cutoff);

std::string format_classification(const ClassificationResult& r);

// A tomogram that is neither classical nor quantum: a seeded search over mixtures of
// the first Fock state with a displaced sub-Heisenberg classical Gaussian, kept once
// the classifier rejects both flags.
struct NeitherFixture {
    SymplecticTomogram tomogram;
    double weight;        // weight of the classical component
    double mean_q, mean_p;
    ClassificationResult classification;
};
NeitherFixture neither_fixture(std::uint64_t seed);

}  // namespace tomokit
