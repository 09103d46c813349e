#include "tomokit/multimode.hpp"

#include <array>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "tomokit/cventropy.hpp"
#include "tomokit/error.hpp"
#include "tomokit/report.hpp"

namespace tomokit {

// ---------------------------------------------------------------------------------------------
// sources

class MultimodeSource {
public:
    virtual ~MultimodeSource() = default;
    virtual int modes() const = 0;
    virtual double value(const RVector& X, const RVector& mu, const RVector& nu) const = 0;
    virtual Grid1D span(int k, double mu, double nu) const = 0;
    virtual const std::vector<SymplecticTomogram>& factors() const {
        static const std::vector<SymplecticTomogram> none;
        return none;
    }
    virtual cplx characteristic(const RVector& mu, const RVector& nu) const;
};

class CenterOfMassSource {
public:
    virtual ~CenterOfMassSource() = default;
    virtual int modes() const = 0;
    virtual RVector row(const RVector& mu, const RVector& nu, const Grid1D& xgrid) const = 0;
    virtual Grid1D span(const RVector& mu, const RVector& nu) const = 0;
    virtual double value(double X, const RVector& mu, const RVector& nu) const {
        const Grid1D g = span(mu, nu);
        const RVector r = row(mu, nu, g);
        const double t = g.index_of(X);
        const int i = static_cast<int>(std::floor(t));
        if (i < 0 || i + 1 >= g.count()) return 0.0;
        const double f = t - i;
        return (1.0 - f) * r[i] + f * r[i + 1];
    }
};

namespace {

void check_dims(int n, const RVector& a, const RVector& b, const char* what) {
    if (a.size() != n || b.size() != n)
        fail_input(fmt::format("dimension mismatch: {} expects {} modes, got {} and {}", what, n, a.size(), b.size()));
}

void check_dims(int n, const RVector& X, const RVector& mu, const RVector& nu) {
    if (X.size() != n || mu.size() != n || nu.size() != n)
        fail_input(fmt::format("dimension mismatch: expected {} modes, got X {}, mu {}, nu {}", n, X.size(), mu.size(),
                               nu.size()));
}

void require_direction(const RVector& mu, const RVector& nu) {
    if (mu.cwiseAbs().maxCoeff() < 1e-6 && nu.cwiseAbs().maxCoeff() < 1e-6)
        fail_input("undefined direction: all mu_k and nu_k vanish");
}

std::array<double, 4> cubic_weights(double g) {
    return {-g * (g - 1.0) * (g - 2.0) / 6.0, (g + 1.0) * (g - 1.0) * (g - 2.0) / 2.0,
            -(g + 1.0) * g * (g - 2.0) / 2.0, (g + 1.0) * g * (g - 1.0) / 6.0};
}

// u = (mu1, nu1, mu2, nu2, ...), the direction in the (q1, p1, ...) ordering
RVector interleave(const RVector& mu, const RVector& nu) {
    RVector u(2 * mu.size());
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
        u[2 * k] = mu[k];
        u[2 * k + 1] = nu[k];
    }
    return u;
}

// Multivariate normal of X_k = mu_k q_k + nu_k p_k for a fixed direction set.
struct GaussianProjection {
    RVector mean;
    RMatrix inv;
    double norm = 0.0;

    GaussianProjection(const ClassicalGaussian& g, const RVector& mu, const RVector& nu) {
        const int n = g.modes();
        RMatrix a = RMatrix::Zero(n, 2 * n);
        for (int k = 0; k < n; ++k) {
            if (std::abs(mu[k]) < 1e-6 && std::abs(nu[k]) < 1e-6)
                fail_input(fmt::format("undefined direction for mode {}", k + 1));
            a(k, 2 * k) = mu[k];
            a(k, 2 * k + 1) = nu[k];
        }
        mean = a * g.mean;
        const RMatrix c = a * g.cov * a.transpose();
        inv = c.inverse();
        norm = 1.0 / std::sqrt(std::pow(2.0 * pi, n) * c.determinant());
    }
    double operator()(const RVector& X) const {
        const RVector d = X - mean;
        return norm * std::exp(-0.5 * d.dot(inv * d));
    }
};

class GaussianSource final : public MultimodeSource {
public:
    explicit GaussianSource(ClassicalGaussian g) : g_(std::move(g)) {}
    int modes() const override { return g_.modes(); }
    double value(const RVector& X, const RVector& mu, const RVector& nu) const override {
        check_dims(modes(), X, mu, nu);
        return GaussianProjection(g_, mu, nu)(X);
    }
    Grid1D span(int k, double mu, double nu) const override {
        const double m = mu * g_.mean[2 * k] + nu * g_.mean[2 * k + 1];
        const Eigen::Vector2d a(mu, nu);
        const double sd = std::sqrt(a.dot(g_.cov.block<2, 2>(2 * k, 2 * k) * a));
        if (!(sd > 0.0)) fail_input(fmt::format("undefined direction for mode {}", k + 1));
        return make_grid(m - 9.0 * sd, m + 9.0 * sd, 32);
    }
    cplx characteristic(const RVector& mu, const RVector& nu) const override;

private:
    ClassicalGaussian g_;
};

class SampledSource final : public MultimodeSource {
public:
    explicit SampledSource(PhaseSpaceDensityND f) : f_(std::move(f)) {}
    int modes() const override { return f_.modes(); }
    double value(const RVector& X, const RVector& mu, const RVector& nu) const override;
    Grid1D span(int k, double mu, double nu) const override {
        const Grid1D& q = f_.axes[2 * k];
        const Grid1D& p = f_.axes[2 * k + 1];
        double lo = 1e300, hi = -1e300;
        for (double a : {q.lower(), q.upper()})
            for (double b : {p.lower(), p.upper()}) {
                lo = std::min(lo, mu * a + nu * b);
                hi = std::max(hi, mu * a + nu * b);
            }
        if (!(hi > lo)) fail_input(fmt::format("undefined direction for mode {}", k + 1));
        return make_grid(lo, hi, 128);
    }

private:
    PhaseSpaceDensityND f_;
};

class ProductSource final : public MultimodeSource {
public:
    explicit ProductSource(std::vector<SymplecticTomogram> f) : f_(std::move(f)) {}
    int modes() const override { return static_cast<int>(f_.size()); }
    double value(const RVector& X, const RVector& mu, const RVector& nu) const override {
        check_dims(modes(), X, mu, nu);
        double v = 1.0;
        for (int k = 0; k < modes(); ++k) v *= f_[k](X[k], mu[k], nu[k]);
        return v;
    }
    Grid1D span(int k, double mu, double nu) const override {
        double s, t;
        direction_polar(mu, nu, s, t);
        const Grid1D& g = f_[k].grid();
        return make_grid(s * g.lower(), s * g.upper(), g.count());
    }
    const std::vector<SymplecticTomogram>& factors() const override { return f_; }

private:
    std::vector<SymplecticTomogram> f_;
};

class MarginalSource final : public MultimodeSource {
public:
    MarginalSource(MultimodeTomogram m, int drop) : m_(std::move(m)), drop_(drop) {
        const auto& f = m_.factors();
        if (!f.empty()) kept_.assign(f.begin(), f.end() - drop);
    }
    int modes() const override { return m_.modes() - drop_; }
    double value(const RVector& X, const RVector& mu, const RVector& nu) const override {
        check_dims(modes(), X, mu, nu);
        const int n = m_.modes(), keep = modes();
        RVector x(n), a(n), b(n);
        x.head(keep) = X;
        a.head(keep) = mu;
        b.head(keep) = nu;
        std::vector<Grid1D> g;
        for (int k = keep; k < n; ++k) {
            a[k] = 1.0;
            b[k] = 0.0;
            g.push_back(m_.span(k, 1.0, 0.0));
        }
        // trailing X_k integrated over their spans
        std::function<double(int)> rec = [&](int d) -> double {
            if (d == n) return m_(x, a, b);
            const Grid1D& gd = g[d - keep];
            double acc = 0.0;
            for (int i = 0; i < gd.count(); ++i) {
                x[d] = gd.point(i);
                acc += rec(d + 1);
            }
            return acc * gd.spacing();
        };
        return rec(keep);
    }
    Grid1D span(int k, double mu, double nu) const override { return m_.span(k, mu, nu); }
    const std::vector<SymplecticTomogram>& factors() const override { return kept_; }

private:
    MultimodeTomogram m_;
    int drop_;
    std::vector<SymplecticTomogram> kept_;
};

// ---- center of mass

class GaussianCenterOfMass final : public CenterOfMassSource {
public:
    explicit GaussianCenterOfMass(ClassicalGaussian g) : g_(std::move(g)) {}
    int modes() const override { return g_.modes(); }
    double value(double X, const RVector& mu, const RVector& nu) const override {
        double m, sd;
        moments(mu, nu, m, sd);
        const double z = (X - m) / sd;
        return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * pi) * sd);
    }
    RVector row(const RVector& mu, const RVector& nu, const Grid1D& xgrid) const override {
        double m, sd;
        moments(mu, nu, m, sd);
        RVector r(xgrid.count());
        for (int i = 0; i < xgrid.count(); ++i) {
            const double z = (xgrid.point(i) - m) / sd;
            r[i] = std::exp(-0.5 * z * z) / (std::sqrt(2.0 * pi) * sd);
        }
        return r;
    }
    Grid1D span(const RVector& mu, const RVector& nu) const override {
        double m, sd;
        moments(mu, nu, m, sd);
        return make_grid(m - 10.0 * sd, m + 10.0 * sd, 128);
    }

private:
    void moments(const RVector& mu, const RVector& nu, double& m, double& sd) const {
        check_dims(modes(), mu, nu, "center-of-mass direction");
        require_direction(mu, nu);
        const RVector u = interleave(mu, nu);
        m = u.dot(g_.mean);
        sd = std::sqrt(u.dot(g_.cov * u));
    }
    ClassicalGaussian g_;
};

// Sum of independent mode variables: the characteristic function is the product of the
// single-mode ones, inverted back to X by Gauss-Legendre quadrature.
class ProductCenterOfMass final : public CenterOfMassSource {
public:
    explicit ProductCenterOfMass(std::vector<SymplecticTomogram> f) : f_(std::move(f)) {
        for (const auto& m : f_) radius_.push_back(tomogram_support_radius(m));
    }
    int modes() const override { return static_cast<int>(f_.size()); }
    double value(double X, const RVector& mu, const RVector& nu) const override {
        RVector x(1);
        x[0] = X;
        return invert(mu, nu, x)[0];
    }
    RVector row(const RVector& mu, const RVector& nu, const Grid1D& xgrid) const override {
        return invert(mu, nu, xgrid.points());
    }
    Grid1D span(const RVector& mu, const RVector& nu) const override {
        check_dims(modes(), mu, nu, "center-of-mass direction");
        require_direction(mu, nu);
        double r = 0.0;
        for (int k = 0; k < modes(); ++k) r += std::hypot(mu[k], nu[k]) * radius_[k];
        return make_grid(-r, r, 512);
    }

private:
    CVector characteristic(const RVector& mu, const RVector& nu, const RVector& t) const {
        CVector out = CVector::Ones(t.size());
        for (int k = 0; k < modes(); ++k) {
            const double s = std::hypot(mu[k], nu[k]);
            if (s < 1e-12) continue;
            out.array() *= f_[k].characteristic_line(std::atan2(nu[k], mu[k]), (s * t).eval()).array();
        }
        return out;
    }

    RVector invert(const RVector& mu, const RVector& nu, const RVector& x) const {
        check_dims(modes(), mu, nu, "center-of-mass direction");
        require_direction(mu, nu);
        double smax = 0.0, tmax = 1e300;
        for (int k = 0; k < modes(); ++k) {
            const double s = std::hypot(mu[k], nu[k]);
            if (s < 1e-12) continue;
            smax = std::max(smax, s);
            tmax = std::min(tmax, 0.9 * pi / (f_[k].grid().spacing() * s));
        }
        // decay scan in steps of 0.25 / smax
        const double step = 0.25 / smax;
        const int ns = static_cast<int>(tmax / step);
        RVector ts(ns);
        for (int i = 0; i < ns; ++i) ts[i] = (i + 1) * step;
        const CVector scan = characteristic(mu, nu, ts);
        double cut = -1.0;
        for (int i = 0, run = 0; i < ns; ++i) {
            run = std::abs(scan[i]) < 1e-12 ? run + 1 : 0;
            if (run == 4) {
                cut = ts[i - 2];
                break;
            }
        }
        if (cut < 0.0) fail_numerical("center-of-mass characteristic function does not decay");
        const double xr = std::max(x.cwiseAbs().maxCoeff(), 1.0);
        const int panels = std::max(4, static_cast<int>(std::ceil(cut * (xr + smax) / 8.0)));
        const Quadrature q = composite_gauss_legendre(0.0, cut, panels, 16);
        const CVector chi = characteristic(mu, nu, q.nodes);
        RVector out(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            double acc = 0.0;
            for (Eigen::Index j = 0; j < q.nodes.size(); ++j)
                acc += q.weights[j] * (std::polar(1.0, -q.nodes[j] * x[i]) * chi[j]).real();
            out[i] = acc / pi;
        }
        return out;
    }

    std::vector<SymplecticTomogram> f_;
    std::vector<double> radius_;
};

// Histogram of X = u.z over the sampled grid with linear sharing between adjacent bins.
class SampledCenterOfMass final : public CenterOfMassSource {
public:
    explicit SampledCenterOfMass(PhaseSpaceDensityND f) : f_(std::move(f)) {
        for (const auto& a : f_.axes) radius2_ += std::max(a.lower() * a.lower(), a.upper() * a.upper());
    }
    int modes() const override { return f_.modes(); }
    RVector row(const RVector& mu, const RVector& nu, const Grid1D& xgrid) const override {
        check_dims(modes(), mu, nu, "center-of-mass direction");
        require_direction(mu, nu);
        const RVector u = interleave(mu, nu);
        const int d = static_cast<int>(f_.axes.size());
        RVector hist = RVector::Zero(xgrid.count());
        std::vector<int> idx(d, 0);
        const double w = f_.cell() / xgrid.spacing();
        for (std::size_t n = 0; n < f_.values.size(); ++n) {
            double t = 0.0;
            for (int a = 0; a < d; ++a) t += u[a] * f_.axes[a].point(idx[a]);
            const double pos = xgrid.index_of(t);
            const int i = static_cast<int>(std::floor(pos));
            const double fr = pos - i;
            const double v = f_.values[n] * w;
            if (i >= 0 && i < xgrid.count()) hist[i] += (1.0 - fr) * v;
            if (i + 1 >= 0 && i + 1 < xgrid.count()) hist[i + 1] += fr * v;
            for (int a = d - 1; a >= 0; --a) {
                if (++idx[a] < f_.axes[a].count()) break;
                idx[a] = 0;
            }
        }
        return hist;
    }
    Grid1D span(const RVector& mu, const RVector& nu) const override {
        check_dims(modes(), mu, nu, "center-of-mass direction");
        require_direction(mu, nu);
        const double r = interleave(mu, nu).norm() * std::sqrt(radius2_);
        return make_grid(-r, r, 256);
    }

private:
    PhaseSpaceDensityND f_;
    double radius2_ = 0.0;
};

class MarginalCenterOfMass final : public CenterOfMassSource {
public:
    MarginalCenterOfMass(CenterOfMassTomogram m, int drop) : m_(std::move(m)), drop_(drop) {}
    int modes() const override { return m_.modes() - drop_; }
    double value(double X, const RVector& mu, const RVector& nu) const override {
        return m_(X, pad(mu), pad(nu));
    }
    RVector row(const RVector& mu, const RVector& nu, const Grid1D& xgrid) const override {
        return m_.row(pad(mu), pad(nu), xgrid);
    }
    Grid1D span(const RVector& mu, const RVector& nu) const override { return m_.span(pad(mu), pad(nu)); }

private:
    RVector pad(const RVector& v) const {
        if (v.size() != modes())
            fail_input(fmt::format("dimension mismatch: expected {} modes, got {}", modes(), v.size()));
        RVector out = RVector::Zero(m_.modes());
        out.head(modes()) = v;
        return out;
    }
    CenterOfMassTomogram m_;
    int drop_;
};

}  // namespace

cplx MultimodeSource::characteristic(const RVector& mu, const RVector& nu) const {
    const int n = modes();
    check_dims(n, mu, nu, "characteristic direction");
    const auto& f = factors();
    if (!f.empty()) {
        // product: int prod_k M_k exp(i X_k) dX = prod_k chi_k(s_k) along theta_k
        cplx acc = 1.0;
        for (int k = 0; k < n; ++k) {
            const double s = std::hypot(mu[k], nu[k]);
            if (s < 1e-12) continue;
            RVector sv(1);
            sv[0] = s;
            acc *= f[k].characteristic_line(std::atan2(nu[k], mu[k]), sv)[0];
        }
        return acc;
    }
    std::vector<Grid1D> g;
    for (int k = 0; k < n; ++k) g.push_back(span(k, mu[k], nu[k]));
    RVector x(n);
    std::function<cplx(int, double)> rec = [&](int d, double phase) -> cplx {
        if (d == n) return value(x, mu, nu) * std::polar(1.0, phase);
        cplx acc = 0.0;
        for (int i = 0; i < g[d].count(); ++i) {
            x[d] = g[d].point(i);
            acc += rec(d + 1, phase + x[d]);
        }
        return acc * g[d].spacing();
    };
    return rec(0, 0.0);
}

// int M exp(i sum X_k) dX is the Gaussian characteristic at u = (mu1, nu1, mu2, ...)
cplx GaussianSource::characteristic(const RVector& mu, const RVector& nu) const {
    check_dims(modes(), mu, nu, "characteristic direction");
    const RVector u = interleave(mu, nu);
    return std::exp(cplx(-0.5 * u.dot(g_.cov * u), u.dot(g_.mean)));
}

// Eliminate one coordinate per mode with its delta factor; the free coordinate runs over its
// grid and the eliminated one is interpolated (cubic).
double SampledSource::value(const RVector& X, const RVector& mu, const RVector& nu) const {
    const int n = modes();
    check_dims(n, X, mu, nu);
    struct Stencil {
        int base;
        std::array<double, 4> w;
    };
    std::vector<int> free_axis(n), elim_axis(n);
    std::vector<std::vector<Stencil>> st(n);
    double scale = 1.0;
    for (int k = 0; k < n; ++k) {
        const bool elim_q = std::abs(mu[k]) >= std::abs(nu[k]);
        const double c = elim_q ? mu[k] : nu[k], other = elim_q ? nu[k] : mu[k];
        if (std::abs(c) < 1e-12) fail_input(fmt::format("undefined direction for mode {}", k + 1));
        free_axis[k] = 2 * k + (elim_q ? 1 : 0);
        elim_axis[k] = 2 * k + (elim_q ? 0 : 1);
        const Grid1D& fg = f_.axes[free_axis[k]];
        const Grid1D& eg = f_.axes[elim_axis[k]];
        scale *= fg.spacing() / std::abs(c);
        for (int j = 0; j < fg.count(); ++j) {
            const double t = eg.index_of((X[k] - other * fg.point(j)) / c);
            const double fl = std::floor(t);
            st[k].push_back({static_cast<int>(fl) - 1, cubic_weights(t - fl)});
        }
    }
    std::vector<std::size_t> stride(2 * n);
    std::size_t acc_stride = 1;
    for (int a = 2 * n - 1; a >= 0; --a) {
        stride[a] = acc_stride;
        acc_stride *= f_.axes[a].count();
    }
    std::function<double(int, std::size_t)> rec = [&](int k, std::size_t offset) -> double {
        if (k == n) return f_.values[offset];
        const Grid1D& fg = f_.axes[free_axis[k]];
        const int ne = f_.axes[elim_axis[k]].count();
        double acc = 0.0;
        for (int j = 0; j < fg.count(); ++j) {
            const Stencil& s = st[k][j];
            if (s.base + 3 < 0 || s.base >= ne) continue;
            for (int m = 0; m < 4; ++m) {
                const int e = s.base + m;
                if (e < 0 || e >= ne || s.w[m] == 0.0) continue;
                acc += s.w[m] * rec(k + 1, offset + j * stride[free_axis[k]] + e * stride[elim_axis[k]]);
            }
        }
        return acc;
    };
    return scale * rec(0, 0);
}

// ---------------------------------------------------------------------------------------------
// states

std::size_t PhaseSpaceDensityND::index(const std::vector<int>& i) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < axes.size(); ++a) idx = idx * axes[a].count() + i[a];
    return idx;
}

double PhaseSpaceDensityND::cell() const {
    double c = 1.0;
    for (const auto& a : axes) c *= a.spacing();
    return c;
}

PhaseSpaceDensityND sample_density(const ClassicalGaussian& g, const std::vector<Grid1D>& axes) {
    const int d = static_cast<int>(axes.size());
    if (d != g.mean.size()) fail_input("dimension mismatch: axes and mean");
    PhaseSpaceDensityND f{axes, {}};
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.count();
    if (total > (std::size_t{1} << 26)) fail_input("phase-space grid too large");
    f.values.resize(total);
    const RMatrix inv = g.cov.inverse();
    std::vector<int> idx(d, 0);
    RVector z(d);
    double sum = 0.0;
    for (std::size_t n = 0; n < total; ++n) {
        for (int a = 0; a < d; ++a) z[a] = axes[a].point(idx[a]) - g.mean[a];
        f.values[n] = std::exp(-0.5 * z.dot(inv * z));
        sum += f.values[n];
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < axes[a].count()) break;
            idx[a] = 0;
        }
    }
    const double norm = 1.0 / (sum * f.cell());
    for (double& v : f.values) v *= norm;
    return f;
}

int MultimodeState::modes() const {
    switch (kind) {
        case MultimodeKind::classical_gaussian: return gaussian.modes();
        case MultimodeKind::classical_density: return density.modes();
        case MultimodeKind::product_pure: return static_cast<int>(pure.size());
        case MultimodeKind::product_mixed: return static_cast<int>(mixed.size());
    }
    return 0;
}

namespace {

void check_mode_count(int n, int limit) {
    if (n < 1 || n > limit) fail_input(fmt::format("mode count {} outside 1..{}", n, limit));
}

}  // namespace

MultimodeState product_state(std::vector<WaveFunction> modes) {
    check_mode_count(static_cast<int>(modes.size()), max_quantum_modes);
    for (const auto& m : modes) require_normalized(m);
    MultimodeState s;
    s.kind = MultimodeKind::product_pure;
    s.pure = std::move(modes);
    return s;
}

MultimodeState product_state(std::vector<DensityMatrixCV> modes) {
    check_mode_count(static_cast<int>(modes.size()), max_quantum_modes);
    for (const auto& m : modes) validate(m);
    MultimodeState s;
    s.kind = MultimodeKind::product_mixed;
    s.mixed = std::move(modes);
    return s;
}

MultimodeState classical_state(ClassicalGaussian g) {
    const int d = static_cast<int>(g.mean.size());
    if (d % 2 != 0) fail_input("mean must have an even number of entries");
    check_mode_count(d / 2, max_classical_modes);
    if (g.cov.rows() != d || g.cov.cols() != d) fail_input("dimension mismatch: covariance and mean");
    if ((g.cov - g.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) fail_input("covariance is not symmetric");
    if (g.cov.llt().info() != Eigen::Success) fail_input("covariance is not positive definite");
    MultimodeState s;
    s.kind = MultimodeKind::classical_gaussian;
    s.gaussian = std::move(g);
    return s;
}

MultimodeState classical_state(PhaseSpaceDensityND f) {
    const int d = static_cast<int>(f.axes.size());
    if (d == 0 || d % 2 != 0) fail_input("phase-space density needs an even number of axes");
    check_mode_count(d / 2, max_classical_modes);
    std::size_t total = 1;
    for (const auto& a : f.axes) total *= a.count();
    if (f.values.size() != total) fail_input("dimension mismatch: values and axes");
    double sum = 0.0;
    for (double v : f.values) {
        if (v < 0.0) fail_validation("phase-space density is negative");
        sum += v;
    }
    if (std::abs(sum * f.cell() - 1.0) > 1e-6) fail_validation(fmt::format("density integrates to {:.10g}", sum * f.cell()));
    MultimodeState s;
    s.kind = MultimodeKind::classical_density;
    s.density = std::move(f);
    return s;
}

// ---------------------------------------------------------------------------------------------
// tomogram handles

MultimodeTomogram::MultimodeTomogram(std::shared_ptr<const MultimodeSource> src) : src_(std::move(src)) {}
int MultimodeTomogram::modes() const { return src_->modes(); }
double MultimodeTomogram::operator()(const RVector& X, const RVector& mu, const RVector& nu) const {
    return src_->value(X, mu, nu);
}
Grid1D MultimodeTomogram::span(int k, double mu, double nu) const { return src_->span(k, mu, nu); }
const std::vector<SymplecticTomogram>& MultimodeTomogram::factors() const { return src_->factors(); }
cplx MultimodeTomogram::characteristic(const RVector& mu, const RVector& nu) const {
    return src_->characteristic(mu, nu);
}

CenterOfMassTomogram::CenterOfMassTomogram(std::shared_ptr<const CenterOfMassSource> src) : src_(std::move(src)) {}
int CenterOfMassTomogram::modes() const { return src_->modes(); }
double CenterOfMassTomogram::operator()(double X, const RVector& mu, const RVector& nu) const {
    return src_->value(X, mu, nu);
}
RVector CenterOfMassTomogram::row(const RVector& mu, const RVector& nu, const Grid1D& xgrid) const {
    return src_->row(mu, nu, xgrid);
}
Grid1D CenterOfMassTomogram::span(const RVector& mu, const RVector& nu) const { return src_->span(mu, nu); }

namespace {

std::vector<SymplecticTomogram> factor_tomograms(const MultimodeState& s) {
    std::vector<SymplecticTomogram> f;
    if (s.kind == MultimodeKind::product_pure)
        for (const auto& p : s.pure) f.push_back(symplectic_tomogram(p));
    else
        for (const auto& r : s.mixed) f.push_back(symplectic_tomogram(r));
    return f;
}

}  // namespace

MultimodeTomogram multimode_symplectic_tomogram(const MultimodeState& state) {
    switch (state.kind) {
        case MultimodeKind::classical_gaussian: return MultimodeTomogram(std::make_shared<GaussianSource>(state.gaussian));
        case MultimodeKind::classical_density: return MultimodeTomogram(std::make_shared<SampledSource>(state.density));
        default: return MultimodeTomogram(std::make_shared<ProductSource>(factor_tomograms(state)));
    }
}

CenterOfMassTomogram center_of_mass_tomogram(const MultimodeState& state) {
    switch (state.kind) {
        case MultimodeKind::classical_gaussian:
            return CenterOfMassTomogram(std::make_shared<GaussianCenterOfMass>(state.gaussian));
        case MultimodeKind::classical_density:
            return CenterOfMassTomogram(std::make_shared<SampledCenterOfMass>(state.density));
        default: return CenterOfMassTomogram(std::make_shared<ProductCenterOfMass>(factor_tomograms(state)));
    }
}

double multimode_differential_residual(const MultimodeTomogram& m, const RVector& X, const RVector& mu,
                                       const RVector& nu, double step) {
    const int n = m.modes();
    check_dims(n, X, mu, nu);
    const double m0 = m(X, mu, nu);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto d = [&](RVector x, RVector a, RVector b, int which) {
            RVector* v = which == 0 ? &x : which == 1 ? &a : &b;
            (*v)[k] += step;
            const double up = m(x, a, b);
            (*v)[k] -= 2.0 * step;
            return (up - m(x, a, b)) / (2.0 * step);
        };
        const double r = X[k] * d(X, mu, nu, 0) + mu[k] * d(X, mu, nu, 1) + nu[k] * d(X, mu, nu, 2) + m0;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double center_of_mass_differential_residual(const CenterOfMassTomogram& m, double X, const RVector& mu,
                                            const RVector& nu, double step) {
    const int n = m.modes();
    double r = m(X, mu, nu) + X * (m(X + step, mu, nu) - m(X - step, mu, nu)) / (2.0 * step);
    for (int k = 0; k < n; ++k)
        for (int which = 0; which < 2; ++which) {
            RVector a = mu, b = nu;
            RVector& v = which == 0 ? a : b;
            const double c = v[k];
            v[k] = c + step;
            const double up = m(X, a, b);
            v[k] = c - step;
            r += c * (up - m(X, a, b)) / (2.0 * step);
        }
    return std::abs(r);
}

MultimodeTomogram subsystem_marginal(const MultimodeTomogram& m, int drop) {
    if (drop < 1 || drop >= m.modes()) fail_input(fmt::format("invalid marginal: cannot drop {} of {} modes", drop, m.modes()));
    return MultimodeTomogram(std::make_shared<MarginalSource>(m, drop));
}

CenterOfMassTomogram subsystem_marginal(const CenterOfMassTomogram& m, int drop) {
    if (drop < 1 || drop >= m.modes()) fail_input(fmt::format("invalid marginal: cannot drop {} of {} modes", drop, m.modes()));
    return CenterOfMassTomogram(std::make_shared<MarginalCenterOfMass>(m, drop));
}

// ---------------------------------------------------------------------------------------------
// reconstruction

namespace {

// Contract axis `a` of a row-major complex tensor with e (rows: new size, cols: old size).
std::vector<cplx> contract(const std::vector<cplx>& in, std::vector<int>& shape, int a, const CMatrix& e) {
    std::size_t outer = 1, inner = 1;
    for (int i = 0; i < a; ++i) outer *= shape[i];
    for (std::size_t i = a + 1; i < shape.size(); ++i) inner *= shape[i];
    const int n_old = shape[a], n_new = static_cast<int>(e.rows());
    std::vector<cplx> out(outer * n_new * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (int j = 0; j < n_new; ++j)
            for (int i = 0; i < n_old; ++i) {
                const cplx w = e(j, i);
                const cplx* src = &in[(o * n_old + i) * inner];
                cplx* dst = &out[(o * n_new + j) * inner];
                for (std::size_t k = 0; k < inner; ++k) dst[k] += w * src[k];
            }
    shape[a] = n_new;
    return out;
}

// f(z) = (2 pi)^{-2N} int chi(u) exp(-i u.z) du on a Cartesian u grid.
PhaseSpaceDensityND invert_characteristic(const std::function<cplx(const RVector&)>& chi,
                                          const std::function<double(int)>& extent, int modes,
                                          const std::vector<Grid1D>& axes) {
    const int d = 2 * modes;
    if (static_cast<int>(axes.size()) != d) fail_input(fmt::format("dimension mismatch: expected {} output axes", d));
    // decay radius from scans along the axes and the pairwise diagonals
    std::vector<RVector> probes;
    for (int a = 0; a < d; ++a) {
        RVector e = RVector::Zero(d);
        e[a] = 1.0;
        probes.push_back(e);
        for (int b = a + 1; b < d; ++b)
            for (double sg : {1.0, -1.0}) {
                RVector f = RVector::Zero(d);
                f[a] = 1.0 / std::sqrt(2.0);
                f[b] = sg / std::sqrt(2.0);
                probes.push_back(f);
            }
    }
    double umax = 0.0;
    for (const auto& p : probes) {
        double cut = -1.0;
        for (int i = 1, run = 0; i <= 800; ++i) {
            run = std::abs(chi(0.25 * i * p)) < 1e-10 ? run + 1 : 0;
            if (run == 4) {
                cut = 0.25 * (i - 2);
                break;
            }
        }
        if (cut < 0.0) fail_numerical("characteristic function does not decay");
        umax = std::max(umax, cut);
    }
    std::vector<RVector> nodes(d);
    std::vector<int> shape(d);
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) {
        const double rout = std::max(std::abs(axes[a].lower()), std::abs(axes[a].upper()));
        const double du = 2.0 * pi / (rout + extent(a));
        const int half = static_cast<int>(std::ceil(umax / du));
        shape[a] = 2 * half + 1;
        nodes[a].resize(shape[a]);
        for (int j = 0; j < shape[a]; ++j) nodes[a][j] = (j - half) * du;
        total *= shape[a];
    }
    if (total > 4000000) fail_numerical(fmt::format("characteristic grid of {} nodes is too large", total));
    std::vector<cplx> data(total);
    std::vector<int> idx(d, 0);
    RVector u(d);
    for (std::size_t n = 0; n < total; ++n) {
        for (int a = 0; a < d; ++a) u[a] = nodes[a][idx[a]];
        data[n] = u.cwiseAbs().maxCoeff() == 0.0 ? cplx(1.0) : chi(u);
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < shape[a]) break;
            idx[a] = 0;
        }
    }
    for (int a = 0; a < d; ++a) {
        const double du = nodes[a].size() > 1 ? nodes[a][1] - nodes[a][0] : 1.0;
        CMatrix e(axes[a].count(), shape[a]);
        for (int i = 0; i < axes[a].count(); ++i)
            for (int j = 0; j < shape[a]; ++j) e(i, j) = std::polar(du / (2.0 * pi), -nodes[a][j] * axes[a].point(i));
        data = contract(data, shape, a, e);
    }
    PhaseSpaceDensityND f{axes, std::vector<double>(data.size())};
    for (std::size_t n = 0; n < data.size(); ++n) f.values[n] = data[n].real();
    return f;
}

void split(const RVector& u, RVector& mu, RVector& nu) {
    const Eigen::Index n = u.size() / 2;
    mu.resize(n);
    nu.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        mu[k] = u[2 * k];
        nu[k] = u[2 * k + 1];
    }
}

}  // namespace

PhaseSpaceDensityND reconstruct_multimode_classical(const CenterOfMassTomogram& m, const std::vector<Grid1D>& axes) {
    const int n = m.modes();
    const auto chi = [&](const RVector& u) -> cplx {
        RVector mu, nu;
        split(u, mu, nu);
        const Grid1D g = m.span(mu, nu);
        const RVector r = m.row(mu, nu, g);
        CVector ramp(g.count());
        exp_ramp(1.0, g, ramp.data());
        return (ramp.array() * r.array().cast<cplx>()).sum() * g.spacing();
    };
    const auto extent = [&](int a) {
        RVector u = RVector::Zero(2 * n), mu, nu;
        u[a] = 1.0;
        split(u, mu, nu);
        const Grid1D g = m.span(mu, nu);
        return std::max(std::abs(g.lower()), std::abs(g.upper()));
    };
    return invert_characteristic(chi, extent, n, axes);
}

PhaseSpaceDensityND reconstruct_multimode_classical(const MultimodeTomogram& m, const std::vector<Grid1D>& axes) {
    const int n = m.modes();
    const auto chi = [&](const RVector& u) -> cplx {
        RVector mu, nu;
        split(u, mu, nu);
        return m.characteristic(mu, nu);
    };
    const auto extent = [&](int a) {
        const Grid1D g = a % 2 == 0 ? m.span(a / 2, 1.0, 0.0) : m.span(a / 2, 0.0, 1.0);
        return std::max(std::abs(g.lower()), std::abs(g.upper()));
    };
    return invert_characteristic(chi, extent, n, axes);
}

std::vector<DensityMatrixCV> reconstruct_multimode_quantum(const MultimodeTomogram& m, int cutoff) {
    const auto& f = m.factors();
    if (f.empty()) fail_input("non-product quantum input: only declared product states can be reconstructed per mode");
    std::vector<DensityMatrixCV> out;
    for (const auto& t : f) out.push_back(reconstruct_density_matrix(t, cutoff));
    return out;
}

// ---------------------------------------------------------------------------------------------
// entropy

MultimodeEntropyReport multimode_entropy_check(const std::vector<WaveFunction>& modes) {
    const int n = static_cast<int>(modes.size());
    check_mode_count(n, max_quantum_modes);
    MultimodeEntropyReport r;
    r.modes = n;
    if (n == 1) {
        const auto e = position_momentum_entropies(modes[0]);
        r.position_entropy = e.position;
        r.momentum_entropy = e.momentum;
    } else {
        std::vector<RVector> px, pp;
        std::vector<double> hx, hp;
        for (const auto& psi : modes) {
            require_normalized(psi);
            const WaveFunction mom = fourier_momentum(psi);
            px.push_back(psi.samples.cwiseAbs2());
            pp.push_back(mom.samples.cwiseAbs2());
            hx.push_back(psi.grid.spacing());
            hp.push_back(mom.grid.spacing());
        }
        const auto joint = [&](const std::vector<RVector>& p, const std::vector<double>& h) {
            if (n == 2) {
                // -sum over the joint grid of |psi(x1, x2)|^2 ln |psi(x1, x2)|^2
                double acc = 0.0;
                for (Eigen::Index i = 0; i < p[0].size(); ++i)
                    for (Eigen::Index j = 0; j < p[1].size(); ++j) {
                        const double v = p[0][i] * p[1][j];
                        if (v > 1e-300) acc -= v * std::log(v);
                    }
                return acc * h[0] * h[1];
            }
            // three modes: the joint grid is too large, use additivity for the product density
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += differential_entropy(p[k], h[k]);
            return acc;
        };
        r.position_entropy = joint(px, hx);
        r.momentum_entropy = joint(pp, hp);
    }
    r.residual = r.position_entropy + r.momentum_entropy - n * std::log(pi * std::exp(1.0));
    return r;
}

std::string format_report(const MultimodeEntropyReport& r) {
    return fmt::format("N={} S_x={} S_p={} residual={}", r.modes, format_number(r.position_entropy),
                       format_number(r.momentum_entropy), format_number(r.residual));
}

}  // namespace tomokit
