#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomokit/numkernel.hpp"

namespace tomokit {

// Spin projection m = -j..j is stored at index m + j.
struct DensityMatrixSpin {
    CMatrix entries;
    int dim() const { return static_cast<int>(entries.rows()); }
};

void validate(const DensityMatrixSpin& rho, double tol = 1e-12);
DensityMatrixSpin spin_state(CMatrix entries);  // validated
DensityMatrixSpin pure_spin_state(const CVector& psi);
DensityMatrixSpin maximally_mixed(int dim);
DensityMatrixSpin bell_state();
DensityMatrixSpin ghz_state();
DensityMatrixSpin haar_pure_state(int dim, Rng& rng);
// Reduced state of a Haar-random pure state on dim x dim.
DensityMatrixSpin haar_mixed_state(int dim, Rng& rng);
DensityMatrixSpin tensor(const DensityMatrixSpin& a, const DensityMatrixSpin& b);
// Trace out every subsystem not listed in `keep` (indices into dims, increasing).
DensityMatrixSpin partial_trace(const DensityMatrixSpin& rho, const std::vector<int>& dims, const std::vector<int>& keep);

// Eigenvectors as columns, eigenvalues decreasing, first nonzero entry of each column real positive.
UnitaryMatrix eigenbasis(const DensityMatrixSpin& rho);
// u with u rho u^dagger diagonal (the adjoint of the eigenbasis).
UnitaryMatrix diagonalizing_unitary(const DensityMatrixSpin& rho);
RVector spin_eigenvalues(const DensityMatrixSpin& rho);  // decreasing

struct SpinTomogram {
    RVector probabilities;
    UnitaryMatrix unitary;
    int dim() const { return static_cast<int>(probabilities.size()); }
};

// w(m, u) = <m| u rho u^dagger |m>
SpinTomogram spin_tomogram(const DensityMatrixSpin& rho, const UnitaryMatrix& u);
// Same numbers via |u u0|^2 applied to the eigenvalues.
RVector spin_tomogram_from_eigenbasis(const DensityMatrixSpin& rho, const UnitaryMatrix& u);

// (1/sqrt N) a^{jk}, a = exp(2 pi i / N)
CMatrix qft_matrix(int dim);

double shannon_entropy(const RVector& w);
double renyi_entropy(const RVector& w, double q);
inline double shannon_tomo_entropy(const SpinTomogram& w) { return shannon_entropy(w.probabilities); }
inline double renyi_tomo_entropy(const SpinTomogram& w, double q) { return renyi_entropy(w.probabilities, q); }
// -sum w1 ln_q(w2 / w1); q == 1 gives the Kullback divergence.
double relative_q_entropy(const RVector& w1, const RVector& w2, double q);
inline double relative_q_entropy(const SpinTomogram& w1, const SpinTomogram& w2, double q) {
    return relative_q_entropy(w1.probabilities, w2.probabilities, q);
}

double von_neumann_entropy(const DensityMatrixSpin& rho);
double quantum_renyi_entropy(const DensityMatrixSpin& rho, double q);

struct EntropyMode {
    enum class Kind { shannon, renyi } kind = Kind::shannon;
    double q = 0.0;
    static EntropyMode shannon() { return {}; }
    static EntropyMode renyi(double q) { return {Kind::renyi, q}; }
};

struct MinimizationResult {
    double min_value = 0.0;    // analytic eigenvalue formula
    double attained = 0.0;     // entropy of the tomogram at argmin
    double sampled_min = 0.0;  // smallest Haar-sampled value
    UnitaryMatrix argmin;
    int samples = 0;
};
// Throws a validation error if any sample falls below min_value - 1e-12.
MinimizationResult min_over_unitaries(const DensityMatrixSpin& rho, EntropyMode mode, int samples, std::uint64_t seed);

struct ObservablePair {
    UnitaryMatrix basis_a;
    UnitaryMatrix basis_b;
    RVector eigenvalues_a;
    RVector eigenvalues_b;
};

struct MeasurementBounds {
    double h_p = 0.0;
    double h_q = 0.0;
    double overlap = 0.0;  // max |<a_i|b_j>|
    double deutsch = 0.0;
    double maassen_uffink = 0.0;
    bool unbiased = false;
    double mub = 0.0;  // only meaningful when unbiased
};
MeasurementBounds measurement_bounds(const ObservablePair& pair, const CVector& psi);

struct QftInequalityReport {
    double renyi_sqrt = 0.0;     // R_alpha(w) + R_beta(w_F) - ln N
    double renyi_rotated = 0.0;  // R_alpha(w(u)) + R_beta(w(Fu)) - ln N
    double shannon_rotated = 0.0;
    double shannon_sqrt = 0.0;
    double von_neumann = 0.0;  // S_vN + H(F u0) - ln N
    double min_residual() const;
};
// |sum_m' F_mm' sqrt w(m')|^2
RVector qft_of_sqrt(const RVector& w);
QftInequalityReport qft_inequality_check(const DensityMatrixSpin& rho, const UnitaryMatrix& u, double alpha,
                                         double beta);

struct SubadditivityReport {
    double h1 = 0.0, h2 = 0.0, h12 = 0.0;
    double residual = 0.0;     // H1 + H2 - H12
    double von_neumann = 0.0;  // S1 + S2 - S12
};
SubadditivityReport bipartite_subadditivity(const DensityMatrixSpin& rho, int dim1, int dim2, const UnitaryMatrix& u);

struct StrongSubadditivityReport {
    double h12 = 0.0, h23 = 0.0, h123 = 0.0, h2 = 0.0;
    double residual = 0.0;     // H12 + H23 - H123 - H2
    double von_neumann = 0.0;  // S12 + S23 - S123 - S2
};
StrongSubadditivityReport tripartite_ssa(const DensityMatrixSpin& rho, const std::vector<int>& dims,
                                         const UnitaryMatrix& u);

// Sum of w over the indices not listed in keep.
RVector marginal(const RVector& w, const std::vector<int>& dims, const std::vector<int>& keep);

struct GroupAverage {
    double mean = 0.0;
    double std_error = 0.0;
    double bound_residual = 0.0;  // mean - (1/2) ln N, or mean - ln N for a Renyi pair
    double column_mean = 0.0;     // -E sum_j |u_j1|^2 ln |u_j1|^2
    double column_std_error = 0.0;
    double column_residual = 0.0;
    int samples = 0;
};
struct AverageMode {
    enum class Kind { shannon, renyi_pair } kind = Kind::shannon;
    double alpha = 0.0, beta = 0.0;
    static AverageMode shannon() { return {}; }
    static AverageMode renyi_pair(double a, double b) { return {Kind::renyi_pair, a, b}; }
};
GroupAverage group_average_entropy(const DensityMatrixSpin& rho, AverageMode mode, int samples, std::uint64_t seed);

std::string format_report(const MeasurementBounds& r);
std::string format_report(const QftInequalityReport& r);
std::string format_report(const SubadditivityReport& r);
std::string format_report(const StrongSubadditivityReport& r);
std::string format_report(const GroupAverage& r);

}  // namespace tomokit
