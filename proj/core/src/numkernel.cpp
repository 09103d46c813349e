#include "tomokit/numkernel.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

namespace tomokit {

RVector Grid1D::points() const {
    RVector x(count_);
    for (int i = 0; i < count_; ++i) x[i] = point(i);
    return x;
}

bool Grid1D::same_as(const Grid1D& other, double tol) const noexcept {
    return count_ == other.count_ && std::abs(lower_ - other.lower_) <= tol &&
           std::abs(upper_ - other.upper_) <= tol;
}

void exp_ramp(double k, const Grid1D& g, cplx* out) {
    const cplx step = std::polar(1.0, k * g.spacing());
    cplx z;
    for (int i = 0; i < g.count(); ++i) {
        z = (i % 64 == 0) ? std::polar(1.0, k * g.point(i)) : z * step;
        out[i] = z;
    }
}

void exp_ramp(double k, const Grid1D& g, double* re, double* im) {
    const cplx step = std::polar(1.0, k * g.spacing());
    cplx z;
    for (int i = 0; i < g.count(); ++i) {
        z = (i % 64 == 0) ? std::polar(1.0, k * g.point(i)) : z * step;
        re[i] = z.real();
        im[i] = z.imag();
    }
}

Grid1D make_grid(double lower, double upper, int count) {
    if (!(lower < upper)) fail_input(fmt::format("invalid bounds: lower {} >= upper {}", lower, upper));
    if (count < 8) fail_input(fmt::format("invalid count {}: need at least 8 points", count));
    Grid1D g;
    g.lower_ = lower;
    g.upper_ = upper;
    g.count_ = count;
    return g;
}

Grid1D default_position_grid() { return make_grid(-8.0, 8.0, 1024); }
Grid1D default_angle_grid() { return make_grid(0.0, 2.0 * pi, 256); }

double WaveFunction::norm() const { return samples.squaredNorm() * grid.spacing(); }

void require_normalized(const WaveFunction& psi, double tol) {
    if (psi.samples.size() != psi.grid.count()) fail_input("wave function size does not match its grid");
    const double n = psi.norm();
    if (std::abs(n - 1.0) > tol) fail_input(fmt::format("wave function not normalized (norm {:.10g})", n));
}

namespace {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

Eigen::FFT<double>& fft_engine() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

// Spectrum of the convolution chirp; the last few are kept because a row sweep
// applies the same step to many wave functions.
const std::vector<cplx>& chirp_kernel(double beta, int n_in, int n_out, int len) {
    struct Entry {
        double beta;
        int n_in, n_out, len;
        std::vector<cplx> spectrum;
    };
    thread_local std::vector<Entry> cache;
    for (const auto& e : cache)
        if (e.beta == beta && e.n_in == n_in && e.n_out == n_out && e.len == len) return e.spectrum;
    std::vector<cplx> c(len, cplx(0.0, 0.0));
    for (int m = -(n_in - 1); m < n_out; ++m) {
        const double mm = static_cast<double>(m);
        c[m >= 0 ? m : len + m] = std::polar(1.0, 0.5 * beta * mm * mm);
    }
    Entry e{beta, n_in, n_out, len, {}};
    fft_engine().fwd(e.spectrum, c);
    if (cache.size() >= 6) cache.erase(cache.begin());
    cache.push_back(std::move(e));
    return cache.back().spectrum;
}

}  // namespace

CVector chirp_z(const CVector& in, const Grid1D& y, double a, const Grid1D& x) {
    const int n_in = y.count();
    const int n_out = x.count();
    if (in.size() != n_in) fail_input("chirp_z: input length does not match grid");
    const double y0 = y.point(0), dy = y.spacing();
    const double x0 = x.point(0), dx = x.spacing();
    const double beta = a * dx * dy;
    const int len = next_pow2(n_in + n_out - 1);

    std::vector<cplx> h(len, cplx(0.0, 0.0));
    for (int j = 0; j < n_in; ++j) {
        const double jj = static_cast<double>(j);
        const double ph = -a * x0 * dy * jj - 0.5 * beta * jj * jj;
        h[j] = in[j] * std::polar(1.0, ph);
    }
    auto& fft = fft_engine();
    const std::vector<cplx>& cf = chirp_kernel(beta, n_in, n_out, len);
    std::vector<cplx> hf, conv;
    fft.fwd(hf, h);
    for (int i = 0; i < len; ++i) hf[i] *= cf[i];
    fft.inv(conv, hf);

    CVector out(n_out);
    for (int k = 0; k < n_out; ++k) {
        const double kk = static_cast<double>(k);
        const double ph = -a * x0 * y0 - a * y0 * dx * kk - 0.5 * beta * kk * kk;
        out[k] = conv[k] * std::polar(1.0, ph);
    }
    return out;
}

namespace {

// One well-conditioned propagator step (|sin theta| bounded away from zero).
CVector frft_step(const CVector& in, const Grid1D& g, double theta, const Grid1D& out) {
    const double s = std::sin(theta);
    const double cot = std::cos(theta) / s;
    const double dy = g.spacing();
    CVector h(in.size());
    for (int j = 0; j < g.count(); ++j) {
        const double y = g.point(j);
        h[j] = in[j] * std::polar(dy, 0.5 * cot * y * y);
    }
    CVector r = chirp_z(h, g, 1.0 / s, out);
    const cplx pref = 1.0 / std::sqrt(cplx(0.0, 2.0 * pi * s));
    for (int k = 0; k < out.count(); ++k) {
        const double x = out.point(k);
        r[k] *= pref * std::polar(1.0, 0.5 * cot * x * x);
    }
    return r;
}

// Reduce theta into (-pi, pi]; U(theta + 2 pi) = -U(theta).
double reduce_angle(double theta, double& sign) {
    const double turns = std::floor((theta + pi) / (2.0 * pi));
    double t = theta - turns * 2.0 * pi;
    if (t <= -pi) t += 2.0 * pi;  // guard rounding at the left edge
    const long long k = static_cast<long long>(turns);
    sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (t > pi) t = pi;
    return t;
}

bool symmetric_grid(const Grid1D& g) { return std::abs(g.lower() + g.upper()) <= 1e-12 * (g.upper() - g.lower()); }

}  // namespace

CVector fractional_fourier_samples(const WaveFunction& psi, double theta, const Grid1D& out) {
    double sign = 1.0;
    const double t = reduce_angle(theta, sign);
    const Grid1D& g = psi.grid;
    constexpr double small = 1e-14;

    if (std::abs(t) < small) {
        if (out.same_as(g)) return sign * psi.samples;
        // Identity onto another grid: go through two quarter turns.
        const CVector q = frft_step(psi.samples, g, -pi / 2, g);
        return sign * frft_step(q, g, pi / 2, out);
    }
    if (std::abs(t - pi) < small && out.same_as(g) && symmetric_grid(g)) {
        // U(pi) psi = -i psi(-x)
        return (sign * cplx(0.0, -1.0)) * psi.samples.reverse().eval();
    }
    if (std::abs(std::sin(t)) >= 0.5) return sign * frft_step(psi.samples, g, t, out);

    // Near 0 or pi the kernel is ill-conditioned: split off a quarter turn.
    const double quarter = std::abs(t) < pi / 2 ? -pi / 2 : (t > 0 ? pi / 2 : -pi / 2);
    const CVector q = frft_step(psi.samples, g, quarter, g);
    return sign * frft_step(q, g, t - quarter, out);
}

PreparedWave::PreparedWave(WaveFunction w) : psi(std::move(w)) {
    if (psi.samples.size() != psi.grid.count()) fail_input("wave function size does not match its grid");
    plus = frft_step(psi.samples, psi.grid, pi / 2, psi.grid);
    minus = frft_step(psi.samples, psi.grid, -pi / 2, psi.grid);
}

namespace {

// Picks the single step that realizes U(theta): returns the source samples and the residual angle.
const CVector& pick_step(const PreparedWave& w, double theta, double& step, double& sign) {
    const double t = reduce_angle(theta, sign);
    if (std::abs(std::sin(t)) >= 0.5) {
        step = t;
        return w.psi.samples;
    }
    if (std::abs(t) < pi / 2 || t < 0) {
        step = t + pi / 2;
        return w.minus;
    }
    step = t - pi / 2;
    return w.plus;
}

}  // namespace

CVector propagate_samples(const PreparedWave& w, double theta, const Grid1D& out) {
    double step, sign;
    const CVector& src = pick_step(w, theta, step, sign);
    return sign * frft_step(src, w.psi.grid, step, out);
}

cplx propagate_point(const PreparedWave& w, double theta, double x) {
    double step, sign;
    const CVector& src = pick_step(w, theta, step, sign);
    const Grid1D& g = w.psi.grid;
    const double s = std::sin(step), cot = std::cos(step) / s;
    cplx acc = 0.0;
    for (int j = 0; j < g.count(); ++j) {
        const double y = g.point(j);
        acc += src[j] * std::polar(1.0, 0.5 * (cot * (y * y + x * x) - 2.0 * x * y / s));
    }
    return sign * acc * g.spacing() / std::sqrt(cplx(0.0, 2.0 * pi * s));
}

WaveFunction fractional_fourier(const WaveFunction& psi, double theta) {
    if (psi.samples.size() != psi.grid.count()) fail_input("wave function size does not match its grid");
    return WaveFunction{psi.grid, fractional_fourier_samples(psi, theta, psi.grid)};
}

WaveFunction fourier_momentum(const WaveFunction& psi) {
    if (psi.samples.size() != psi.grid.count()) fail_input("wave function size does not match its grid");
    const Grid1D& g = psi.grid;
    CVector r = chirp_z(psi.samples * g.spacing(), g, 1.0, g);
    r /= std::sqrt(2.0 * pi);
    return WaveFunction{g, r};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t s = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return Rng(seq);
}

UnitaryMatrix haar_unitary(int dim, Rng& rng) {
    if (dim < 1) fail_input(fmt::format("haar_unitary: dimension {} < 1", dim));
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix z(dim, dim);
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(r, c) = cplx(re, im);
        }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix& rr = qr.matrixQR();
    for (int c = 0; c < dim; ++c) {
        const cplx d = rr(c, c);
        const double m = std::abs(d);
        q.col(c) *= (m > 0.0) ? d / m : cplx(1.0, 0.0);
    }
    return q;
}

UnitaryMatrix haar_unitary(int dim, std::uint64_t seed) {
    Rng rng = substream(seed, 0);
    return haar_unitary(dim, rng);
}

double unitarity_defect(const CMatrix& u) {
    const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

Quadrature gauss_legendre(int n, double a, double b) {
    if (n < 1) fail_input("gauss_legendre: need at least one node");
    // Golub-Welsch: eigen-decomposition of the Legendre Jacobi matrix.
    RMatrix jac = RMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double off = k / std::sqrt(4.0 * k * k - 1.0);
        jac(k, k - 1) = off;
        jac(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(jac);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    Quadrature q{RVector(n), RVector(n)};
    for (int i = 0; i < n; ++i) {
        q.nodes[i] = mid + half * es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        q.weights[i] = half * 2.0 * v0 * v0;
    }
    return q;
}

Quadrature composite_gauss_legendre(double a, double b, int panels, int order) {
    if (panels < 1) fail_input("composite_gauss_legendre: need at least one panel");
    const Quadrature ref = gauss_legendre(order);
    Quadrature q{RVector(panels * order), RVector(panels * order)};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < order; ++i) {
            q.nodes[p * order + i] = lo + 0.5 * h * (ref.nodes[i] + 1.0);
            q.weights[p * order + i] = 0.5 * h * ref.weights[i];
        }
    }
    return q;
}

namespace {

inline void lagrange4(double f, double w[4]) {
    // nodes at -1, 0, 1, 2 relative to floor(t)
    w[0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
    w[1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
    w[2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
    w[3] = (f + 1.0) * f * (f - 1.0) / 6.0;
}

}  // namespace

double interp_cubic(const double* v, int n, double t) {
    if (!(t > -2.0 && t < n + 1.0)) return 0.0;
    const double fl = std::floor(t);
    const int i = static_cast<int>(fl);
    double w[4];
    lagrange4(t - fl, w);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        const int j = i - 1 + k;
        if (j >= 0 && j < n) acc += w[k] * v[j];
    }
    return acc;
}

double interp_cubic_periodic(const double* v, int n, double t) {
    const double fl = std::floor(t);
    const int i = static_cast<int>(fl);
    double w[4];
    lagrange4(t - fl, w);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        int j = (i - 1 + k) % n;
        if (j < 0) j += n;
        acc += w[k] * v[j];
    }
    return acc;
}

}  // namespace tomokit
