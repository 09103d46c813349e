#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tomokit/cvstates.hpp"

namespace tomokit {

enum class TomogramBackend { wavefunction, density_matrix, wigner, classical_density, optical_samples, composite };

std::string to_string(TomogramBackend b);

// Matrix of quadrature densities w[theta][X].
struct OpticalTomogram {
    Grid1D xgrid;
    Grid1D thetagrid;
    RMatrix values;  // rows: theta, cols: X
};

// Backend interface. Implementations provide the optical density w(x, theta) on the
// unit circle; the symplectic evaluator extends it by homogeneity.
class TomogramSource {
public:
    virtual ~TomogramSource() = default;
    virtual TomogramBackend backend() const = 0;
    virtual Grid1D natural_grid() const = 0;
    virtual double optical(double x, double theta) const = 0;
    virtual RVector optical_row(double theta, const Grid1D& xgrid) const;
    // xi_theta(s) = int w(X, theta) exp(i s X) dX for each s.
    virtual CVector characteristic_line(double theta, const RVector& s) const;
    // Angles at which the data were measured, if the backend is sampled.
    virtual std::optional<Grid1D> native_angles() const { return std::nullopt; }
};

// M(X, mu, nu): density of X = mu q + nu p.
class SymplecticTomogram {
public:
    explicit SymplecticTomogram(std::shared_ptr<const TomogramSource> src);

    double operator()(double X, double mu, double nu) const;
    double optical(double X, double theta) const { return src_->optical(X, theta); }
    RVector optical_row(double theta) const { return src_->optical_row(theta, grid_); }
    RVector optical_row(double theta, const Grid1D& xgrid) const { return src_->optical_row(theta, xgrid); }
    CVector characteristic_line(double theta, const RVector& s) const { return src_->characteristic_line(theta, s); }

    const Grid1D& grid() const { return grid_; }
    TomogramBackend backend() const { return src_->backend(); }
    std::optional<Grid1D> native_angles() const { return src_->native_angles(); }
    const std::shared_ptr<const TomogramSource>& source() const { return src_; }

private:
    std::shared_ptr<const TomogramSource> src_;
    Grid1D grid_;
};

// Polar form of a direction; throws when both components are below 1e-6.
void direction_polar(double mu, double nu, double& s, double& theta);

SymplecticTomogram symplectic_tomogram(const WaveFunction& psi);
SymplecticTomogram symplectic_tomogram(const DensityMatrixCV& rho, const Grid1D& xgrid = Grid1D());
SymplecticTomogram symplectic_tomogram(const WignerFunction& w);
SymplecticTomogram symplectic_tomogram(const PhaseSpaceDensity& f);
SymplecticTomogram symplectic_tomogram(const OpticalTomogram& w);

// Wrappers.
SymplecticTomogram mixture(const std::vector<std::pair<double, SymplecticTomogram>>& parts);
SymplecticTomogram scaled(const SymplecticTomogram& m, double factor);  // factor * M, breaks normalization
// |lambda| M(lambda X, lambda mu, lambda nu)
SymplecticTomogram rescaled(const SymplecticTomogram& m, double lambda);
// Tomogram defined by a closed form (X, mu, nu) -> density.
SymplecticTomogram tomogram_from_function(std::function<double(double, double, double)> f, const Grid1D& natural);

OpticalTomogram optical_tomogram(const SymplecticTomogram& m, const Grid1D& thetagrid = default_angle_grid(),
                                 std::optional<Grid1D> xgrid = std::nullopt);
OpticalTomogram optical_tomogram(const WaveFunction& psi, const Grid1D& thetagrid = default_angle_grid());
OpticalTomogram optical_tomogram(const DensityMatrixCV& rho, const Grid1D& thetagrid = default_angle_grid(),
                                 const Grid1D& xgrid = Grid1D());
OpticalTomogram optical_tomogram(const PhaseSpaceDensity& f, const Grid1D& thetagrid = default_angle_grid(),
                                 std::optional<Grid1D> xgrid = std::nullopt);

// Interpolated symplectic value from stored optical data (cubic in X, periodic cubic in theta).
double symplectic_from_optical(const OpticalTomogram& w, double X, double mu, double nu);

void write_optical(std::ostream& os, const OpticalTomogram& w);
OpticalTomogram read_optical(std::istream& is);
void save_optical(const std::string& path, const OpticalTomogram& w);
OpticalTomogram load_optical(const std::string& path);

struct AxiomReport {
    std::vector<double> normalization_error;  // per direction
    double min_value = 0.0;
    double max_homogeneity_residual = 0.0;
    double max_differential_residual = 0.0;  // X dM/dX + mu dM/dmu + nu dM/dnu + M
    bool ok(double tol = 1e-4, double diff_tol = 1e-3) const;
};

AxiomReport verify_tomogram_axioms(const SymplecticTomogram& m, const std::vector<std::pair<double, double>>& directions,
                                   const std::vector<double>& lambdas, std::uint64_t seed = 0, double step = 1e-4);

enum class Quadrature1D { position, momentum };
double tomogram_moments(const SymplecticTomogram& m, int n, Quadrature1D which);

// xi(k, mu, nu) = int exp(i k X) M(X, mu, nu) dX.
struct CharacteristicFn {
    std::function<CVector(double mu, double nu, const RVector& k)> line;
    cplx operator()(double k, double mu, double nu) const;
};

CharacteristicFn characteristic_function(const SymplecticTomogram& m);
RVector tomogram_from_characteristic(const CharacteristicFn& xi, double mu, double nu, const Grid1D& xgrid,
                                     double kmax = 40.0, double dk = 0.05);

// Tomographic symbol of sum_t coef_t |psi1_t><psi2_t|.
class TomographicSymbol {
public:
    struct Term {
        cplx coef;
        WaveFunction psi1, psi2;
    };
    explicit TomographicSymbol(std::vector<Term> terms);

    cplx operator()(double X, double mu, double nu) const;
    CVector optical_row(double theta, const Grid1D& xgrid) const;
    CVector optical_row(double theta) const { return optical_row(theta, grid()); }
    const Grid1D& grid() const { return terms_.front().w1.psi.grid; }
    std::optional<cplx> trace_hint;

private:
    struct Prepared {
        cplx coef;
        PreparedWave w1, w2;
    };
    std::vector<Prepared> terms_;
};

TomographicSymbol operator_symbol(const WaveFunction& psi1, const WaveFunction& psi2);
TomographicSymbol operator_symbol(const DensityMatrixCV& rho, const Grid1D& xgrid = Grid1D());

struct TraceResult {
    cplx trace;          // integral of the symbol at the reference direction
    cplx limit_trace;    // small-direction limit of the characteristic function
    double discrepancy;  // |trace - limit_trace|
};
// Throws a validation error when the two forms disagree by more than 1e-3.
TraceResult symbol_trace(const TomographicSymbol& sym);

// Tr(AB) from the symbol pair; the imaginary part collects the sine correlation.
cplx symbol_pair_trace(const TomographicSymbol& a, const TomographicSymbol& b, int angles = 128, double window = 20.0);
// Same route applied to two state tomograms.
cplx symbol_pair_trace(const SymplecticTomogram& a, const SymplecticTomogram& b, int angles = 128,
                       double window = 20.0);

// w(X, mu, nu, a) = M(X - a, mu, nu).
class ShiftedTomogram {
public:
    ShiftedTomogram(SymplecticTomogram m, double a) : m_(std::move(m)), a_(a) {}
    double operator()(double X, double mu, double nu) const { return m_(X - a_, mu, nu); }
    double operator()(double X, double mu, double nu, double a) const { return m_(X - a, mu, nu); }
    double shift() const { return a_; }

private:
    SymplecticTomogram m_;
    double a_;
};

ShiftedTomogram shifted_tomogram(const SymplecticTomogram& m, double a);

}  // namespace tomokit
