#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tomokit/cvrecon.hpp"
#include "tomokit/cvstates.hpp"
#include "tomokit/cvtomo.hpp"

namespace tomokit {

inline constexpr int max_quantum_modes = 3;
inline constexpr int max_classical_modes = 3;

// Sampled density on a product grid; axes ordered (q1, p1, q2, p2, ...), last axis fastest.
struct PhaseSpaceDensityND {
    std::vector<Grid1D> axes;
    std::vector<double> values;
    int modes() const { return static_cast<int>(axes.size() / 2); }
    std::size_t index(const std::vector<int>& i) const;
    double cell() const;
};

// Gaussian density with mean and covariance in the (q1, p1, q2, p2, ...) ordering.
struct ClassicalGaussian {
    RVector mean;
    RMatrix cov;
    int modes() const { return static_cast<int>(mean.size() / 2); }
};

PhaseSpaceDensityND sample_density(const ClassicalGaussian& g, const std::vector<Grid1D>& axes);

enum class MultimodeKind { classical_gaussian, classical_density, product_pure, product_mixed };

struct MultimodeState {
    MultimodeKind kind = MultimodeKind::product_pure;
    ClassicalGaussian gaussian;
    PhaseSpaceDensityND density;
    std::vector<WaveFunction> pure;
    std::vector<DensityMatrixCV> mixed;
    int modes() const;
};

MultimodeState product_state(std::vector<WaveFunction> modes);
MultimodeState product_state(std::vector<DensityMatrixCV> modes);
MultimodeState classical_state(ClassicalGaussian g);
MultimodeState classical_state(PhaseSpaceDensityND f);

class MultimodeSource;
class CenterOfMassSource;

// M(X, mu, nu) with one (X_k, mu_k, nu_k) triple per mode.
class MultimodeTomogram {
public:
    explicit MultimodeTomogram(std::shared_ptr<const MultimodeSource> src);
    int modes() const;
    double operator()(const RVector& X, const RVector& mu, const RVector& nu) const;
    // Grid covering the X_k support for the direction (mu_k, nu_k) of mode k.
    Grid1D span(int k, double mu, double nu) const;
    // Single-mode factors of a product state, empty otherwise.
    const std::vector<SymplecticTomogram>& factors() const;
    // int M(X, mu, nu) exp(i sum_k X_k) dX.
    cplx characteristic(const RVector& mu, const RVector& nu) const;

private:
    std::shared_ptr<const MultimodeSource> src_;
};

// M_cm(X, mu, nu) = < delta(X - mu.q - nu.p) >.
class CenterOfMassTomogram {
public:
    explicit CenterOfMassTomogram(std::shared_ptr<const CenterOfMassSource> src);
    int modes() const;
    double operator()(double X, const RVector& mu, const RVector& nu) const;
    RVector row(const RVector& mu, const RVector& nu, const Grid1D& xgrid) const;
    // Grid covering the support of the row in direction (mu, nu).
    Grid1D span(const RVector& mu, const RVector& nu) const;

private:
    std::shared_ptr<const CenterOfMassSource> src_;
};

MultimodeTomogram multimode_symplectic_tomogram(const MultimodeState& state);
CenterOfMassTomogram center_of_mass_tomogram(const MultimodeState& state);

// Max |(X_k d/dX_k + mu_k d/dmu_k + nu_k d/dnu_k + 1) M| over modes k, central differences.
double multimode_differential_residual(const MultimodeTomogram& m, const RVector& X, const RVector& mu,
                                       const RVector& nu, double step = 1e-4);
// (X d/dX + mu.d/dmu + nu.d/dnu + 1) M_cm, central differences.
double center_of_mass_differential_residual(const CenterOfMassTomogram& m, double X, const RVector& mu,
                                            const RVector& nu, double step = 1e-4);

// Integrate out the trailing `drop` modes.
MultimodeTomogram subsystem_marginal(const MultimodeTomogram& m, int drop);
// Set the trailing `drop` direction components to zero.
CenterOfMassTomogram subsystem_marginal(const CenterOfMassTomogram& m, int drop);

// Classical inversion of a center-of-mass tomogram on the given output axes (q1, p1, q2, p2, ...).
PhaseSpaceDensityND reconstruct_multimode_classical(const CenterOfMassTomogram& m, const std::vector<Grid1D>& axes);
// Same from a symplectic multimode tomogram; chi(mu, nu) is its k = 1 characteristic.
PhaseSpaceDensityND reconstruct_multimode_classical(const MultimodeTomogram& m, const std::vector<Grid1D>& axes);
// Mode-by-mode density matrices of a declared product state.
std::vector<DensityMatrixCV> reconstruct_multimode_quantum(const MultimodeTomogram& m, int cutoff = default_cutoff);

struct MultimodeEntropyReport {
    int modes = 0;
    double position_entropy = 0.0;
    double momentum_entropy = 0.0;
    double residual = 0.0;  // S_x + S_p - N ln(pi e)
};
MultimodeEntropyReport multimode_entropy_check(const std::vector<WaveFunction>& modes);
std::string format_report(const MultimodeEntropyReport& r);

}  // namespace tomokit
