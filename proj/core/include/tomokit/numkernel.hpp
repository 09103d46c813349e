#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tomokit/error.hpp"

namespace tomokit {

using cplx = std::complex<double>;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using UnitaryMatrix = Eigen::MatrixXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Uniform grid sampled at cell midpoints: x_i = lower + (i + 1/2) * spacing.
class Grid1D {
public:
    Grid1D() = default;  // [-8, 8] with 1024 points

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    int count() const noexcept { return count_; }
    double spacing() const noexcept { return (upper_ - lower_) / count_; }
    double point(int i) const noexcept { return lower_ + (i + 0.5) * spacing(); }
    double operator[](int i) const noexcept { return point(i); }
    RVector points() const;

    // Fractional node index of x (node i sits at i).
    double index_of(double x) const noexcept { return (x - lower_) / spacing() - 0.5; }
    bool same_as(const Grid1D& other, double tol = 1e-12) const noexcept;
    // Reflection x -> -x; node i maps onto node count - 1 - i.
    Grid1D mirrored() const noexcept {
        Grid1D g = *this;
        g.lower_ = -upper_;
        g.upper_ = -lower_;
        return g;
    }

private:
    friend Grid1D make_grid(double lower, double upper, int count);
    double lower_ = -8.0;
    double upper_ = 8.0;
    int count_ = 1024;
};

Grid1D make_grid(double lower, double upper, int count);
Grid1D default_position_grid();
Grid1D default_angle_grid();  // [0, 2pi) with 256 points

// out[i] = exp(i k x_i) over the grid nodes, by recurrence re-anchored every 64 nodes.
void exp_ramp(double k, const Grid1D& g, cplx* out);
void exp_ramp(double k, const Grid1D& g, double* re, double* im);

// Complex samples of psi(x) on a position grid.
struct WaveFunction {
    Grid1D grid;
    CVector samples;

    double norm() const;  // sum |psi|^2 dx
};

void require_normalized(const WaveFunction& psi, double tol = 1e-6);

// out_k = sum_j in_j exp(-i a x_k y_j) for uniform grids y (input) and x (output),
// evaluated with a Bluestein convolution.
CVector chirp_z(const CVector& in, const Grid1D& y, double a, const Grid1D& x);

// Oscillator propagator psi(X, theta) on the input grid.
WaveFunction fractional_fourier(const WaveFunction& psi, double theta);
// Same transform sampled on an arbitrary output grid.
CVector fractional_fourier_samples(const WaveFunction& psi, double theta, const Grid1D& out);

// Wave function with its quarter turns U(+-pi/2) psi cached, so that any angle
// costs a single well-conditioned propagator step.
struct PreparedWave {
    explicit PreparedWave(WaveFunction psi);
    WaveFunction psi;
    CVector plus, minus;
};
CVector propagate_samples(const PreparedWave& w, double theta, const Grid1D& out);
// U(theta) psi at one point by direct quadrature of the kernel.
cplx propagate_point(const PreparedWave& w, double theta, double x);

// (2 pi)^{-1/2} int exp(-i p x) psi(x) dx on the same grid (read as p).
WaveFunction fourier_momentum(const WaveFunction& psi);

// Random numbers. Every stochastic routine takes an explicit seed or engine.
using Rng = std::mt19937_64;
std::uint64_t splitmix64(std::uint64_t x);
// Independent engine for sample `index` of a run seeded with `seed`.
Rng substream(std::uint64_t seed, std::uint64_t index);

UnitaryMatrix haar_unitary(int dim, std::uint64_t seed);
UnitaryMatrix haar_unitary(int dim, Rng& rng);
double unitarity_defect(const CMatrix& u);

// Gauss-Legendre rule on [a, b].
struct Quadrature {
    RVector nodes;
    RVector weights;
};
Quadrature gauss_legendre(int n, double a = -1.0, double b = 1.0);
// Composite rule: `panels` equal panels with `order` nodes each.
Quadrature composite_gauss_legendre(double a, double b, int panels, int order);

// Four-point Lagrange interpolation at fractional index t into v[0..n).
// Samples outside the array count as zero.
double interp_cubic(const double* v, int n, double t);
// Periodic variant.
double interp_cubic_periodic(const double* v, int n, double t);

}  // namespace tomokit
