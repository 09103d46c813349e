#pragma once
// Independent reference implementations used only by the tests. They are
// deliberately naive (direct sums, closed forms) so they share no code path
// with the library routines they check.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.141592653589793238462643383279502884;

inline double midpoint(double lo, double hi, int n, int i) { return lo + (i + 0.5) * (hi - lo) / n; }

// Hermite function by explicit polynomial (small n only).
inline double hermite_function(int n, double x) {
    double h0 = 1.0, h1 = 2.0 * x;
    double h = n == 0 ? h0 : h1;
    for (int k = 1; k < n; ++k) {
        h = 2.0 * x * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h;
    }
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    return h / std::sqrt(std::pow(2.0, n) * fact * std::sqrt(pi)) * std::exp(-0.5 * x * x);
}

// psi(X, theta) by direct O(N) trapezoid of the oscillator propagator kernel.
template <class Psi>
cplx propagate(Psi psi, double theta, double X, double lo = -10.0, double hi = 10.0, int n = 8000) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double h = (hi - lo) / n;
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = midpoint(lo, hi, n, i);
        const double ph = 0.5 * (c / s * (y * y + X * X) - 2.0 * X * y / s);
        acc += std::polar(1.0, ph) * psi(y) * h;
    }
    return acc / std::sqrt(cplx(0.0, 2.0 * pi * s));
}

inline double vacuum_tomogram(double X, double mu, double nu) {
    const double s2 = mu * mu + nu * nu;
    return std::exp(-X * X / s2) / std::sqrt(pi * s2);
}

inline double gaussian(double x, double mean, double var) {
    return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * pi * var);
}

inline double gaussian_entropy(double var) { return 0.5 * std::log(2.0 * pi * std::exp(1.0) * var); }

// -int p ln p by a fine midpoint rule over [lo, hi].
template <class Density>
double entropy(Density p, double lo = -12.0, double hi = 12.0, int n = 200000) {
    const double h = (hi - lo) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = p(midpoint(lo, hi, n, i));
        if (v > 0.0) acc -= v * std::log(v) * h;
    }
    return acc;
}

// int p^a by a fine midpoint rule.
template <class Density>
double power_integral(Density p, double a, double lo = -12.0, double hi = 12.0, int n = 200000) {
    const double h = (hi - lo) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::pow(p(midpoint(lo, hi, n, i)), a) * h;
    return acc;
}

// |psi_1(x)|^2 for the first excited oscillator level; the tomogram has this form at every angle.
inline double fock1_density(double x) { return 2.0 / std::sqrt(pi) * x * x * std::exp(-x * x); }

}  // namespace oracle
