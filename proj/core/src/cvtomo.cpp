#include "tomokit/cvtomo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace tomokit {

std::string to_string(TomogramBackend b) {
    switch (b) {
        case TomogramBackend::wavefunction: return "wavefunction";
        case TomogramBackend::density_matrix: return "density-matrix";
        case TomogramBackend::wigner: return "wigner";
        case TomogramBackend::classical_density: return "classical-density";
        case TomogramBackend::optical_samples: return "optical-samples";
        case TomogramBackend::composite: return "composite";
    }
    return "unknown";
}

namespace {

// sum_i f_i exp(i s x_i) dx on a uniform grid; the phase is advanced by recurrence
// and re-anchored every 64 samples.
template <class Vec>
cplx fourier_sum(const Vec& f, const Grid1D& g, double s) {
    const int n = g.count();
    const cplx step = std::polar(1.0, s * g.spacing());
    cplx acc = 0.0;
    for (int i0 = 0; i0 < n; i0 += 64) {
        cplx ph = std::polar(1.0, s * g.point(i0));
        const int i1 = std::min(n, i0 + 64);
        for (int i = i0; i < i1; ++i) {
            acc += f[i] * ph;
            ph *= step;
        }
    }
    return acc * g.spacing();
}

double wrap_angle(double theta) {
    double t = std::fmod(theta, 2.0 * pi);
    if (t < 0.0) t += 2.0 * pi;
    return t;
}

}  // namespace

RVector TomogramSource::optical_row(double theta, const Grid1D& xgrid) const {
    RVector r(xgrid.count());
    for (int i = 0; i < xgrid.count(); ++i) r[i] = optical(xgrid.point(i), theta);
    return r;
}

CVector TomogramSource::characteristic_line(double theta, const RVector& s) const {
    const Grid1D g = natural_grid();
    const RVector row = optical_row(theta, g);
    CVector out(s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) out[k] = fourier_sum(row, g, s[k]);
    return out;
}

void direction_polar(double mu, double nu, double& s, double& theta) {
    if (std::abs(mu) < 1e-6 && std::abs(nu) < 1e-6)
        fail_input(fmt::format("undefined direction: mu = {:.10g}, nu = {:.10g}", mu, nu));
    s = std::hypot(mu, nu);
    theta = std::atan2(nu, mu);
}

SymplecticTomogram::SymplecticTomogram(std::shared_ptr<const TomogramSource> src)
    : src_(std::move(src)), grid_(src_->natural_grid()) {}

double SymplecticTomogram::operator()(double X, double mu, double nu) const {
    double s, theta;
    direction_polar(mu, nu, s, theta);
    return src_->optical(X / s, theta) / s;
}

namespace {

class PureSource final : public TomogramSource {
public:
    explicit PureSource(WaveFunction psi) : psi_(std::move(psi)), psit_(fourier_momentum(psi_)), prep_(psi_) {}

    TomogramBackend backend() const override { return TomogramBackend::wavefunction; }
    Grid1D natural_grid() const override { return psi_.grid; }

    // Direct quadrature of the pure-state formula; directions close to the position axis
    // are evaluated in the momentum representation with (mu, nu) -> (nu, -mu).
    double optical(double x, double theta) const override {
        const double c = std::cos(theta), s = std::sin(theta);
        if (std::abs(s) >= 0.5) return amplitude2(psi_, c, s, x) / (2.0 * pi * std::abs(s));
        return amplitude2(psit_, s, -c, x) / (2.0 * pi * std::abs(c));
    }

    RVector optical_row(double theta, const Grid1D& xgrid) const override {
        return propagate_samples(prep_, theta, xgrid).cwiseAbs2();
    }

    const WaveFunction& psi() const { return psi_; }

private:
    static double amplitude2(const WaveFunction& f, double mu, double nu, double x) {
        const Grid1D& g = f.grid;
        cplx acc = 0.0;
        for (int j = 0; j < g.count(); ++j) {
            const double y = g.point(j);
            acc += f.samples[j] * std::polar(1.0, mu / (2.0 * nu) * y * y - x * y / nu);
        }
        return std::norm(acc * g.spacing());
    }

    WaveFunction psi_;
    WaveFunction psit_;
    PreparedWave prep_;
};

// Mixed states in the Fock basis: U(theta) multiplies level n by exp(-i (n + 1/2) theta), so
// each row is sum_k lambda_k |sum_n v_kn e^{-i n theta} psi_n(X)|^2 with the eigenvectors v_k.
class DensitySource final : public TomogramSource {
public:
    DensitySource(const DensityMatrixCV& rho, const Grid1D& xgrid) : grid_(xgrid) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.rho);
        const RVector& ev = es.eigenvalues();
        const double floor = 1e-14 * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < ev.size(); ++k)
            if (ev[k] > floor) keep.push_back(k);
        weights_.resize(static_cast<Eigen::Index>(keep.size()));
        vecs_.resize(rho.cutoff(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) {
            weights_[j] = ev[keep[j]];
            vecs_.col(j) = es.eigenvectors().col(keep[j]);
        }
        basis_ = oscillator_eigenfunctions(rho.cutoff(), grid_);
    }
    TomogramBackend backend() const override { return TomogramBackend::density_matrix; }
    Grid1D natural_grid() const override { return grid_; }
    double optical(double x, double theta) const override {
        const int n = static_cast<int>(vecs_.rows());
        RVector phi(n);
        double prev = 0.0, cur = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
        phi[0] = cur;
        for (int k = 0; k + 1 < n; ++k) {
            const double next = std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
            prev = cur;
            cur = next;
            phi[k + 1] = cur;
        }
        const CVector amp = rotated(theta).transpose() * phi.cast<cplx>();
        return (weights_.array() * amp.array().abs2()).sum();
    }
    RVector optical_row(double theta, const Grid1D& xgrid) const override {
        const CMatrix v = rotated(theta);
        const RMatrix vr = v.real(), vi = v.imag();
        const auto amps = [&](const RMatrix& b) -> RVector {
            const RMatrix re = b * vr, im = b * vi;
            return (re.cwiseAbs2() + im.cwiseAbs2()) * weights_;
        };
        if (xgrid.same_as(grid_)) return amps(basis_);
        return amps(oscillator_eigenfunctions(static_cast<int>(vecs_.rows()), xgrid));
    }

private:
    CMatrix rotated(double theta) const {
        CMatrix v = vecs_;
        for (Eigen::Index n = 0; n < v.rows(); ++n) v.row(n) *= std::polar(1.0, -static_cast<double>(n) * theta);
        return v;
    }

    Grid1D grid_;
    RVector weights_;
    CMatrix vecs_;
    RMatrix basis_;
};

class PhaseSpaceSource final : public TomogramSource {
public:
    PhaseSpaceSource(const Grid1D& qg, const Grid1D& pg, RMatrix values, double factor, TomogramBackend kind)
        : qg_(qg), pg_(pg), v_(std::move(values)), kind_(kind) {
        v_ *= factor;
        vt_ = v_.transpose();
        double r = 0.0;
        for (double q : {qg.lower(), qg.upper()})
            for (double p : {pg.lower(), pg.upper()}) r = std::max(r, std::hypot(q, p));
        const double h = 0.5 * std::min(qg.spacing(), pg.spacing());
        const int half = static_cast<int>(std::ceil(r / h));
        grid_ = make_grid(-half * h, half * h, std::max(8, 2 * half));
    }

    TomogramBackend backend() const override { return kind_; }
    Grid1D natural_grid() const override { return grid_; }

    double optical(double x, double theta) const override {
        const double c = std::cos(theta), s = std::sin(theta);
        double acc = 0.0;
        if (std::abs(c) >= std::abs(s)) {
            // integrate over p nodes, interpolate along q
            for (int j = 0; j < pg_.count(); ++j) {
                const double q = (x - pg_.point(j) * s) / c;
                acc += interp_cubic(v_.col(j).data(), qg_.count(), qg_.index_of(q));
            }
            return acc * pg_.spacing() / std::abs(c);
        }
        for (int i = 0; i < qg_.count(); ++i) {
            const double p = (x - qg_.point(i) * c) / s;
            acc += interp_cubic(vt_.col(i).data(), pg_.count(), pg_.index_of(p));
        }
        return acc * qg_.spacing() / std::abs(s);
    }

    // Direct two-dimensional quadrature, spectrally accurate for smooth densities.
    CVector characteristic_line(double theta, const RVector& s) const override {
        const double c = std::cos(theta), sn = std::sin(theta);
        const int nq = qg_.count(), np = pg_.count(), ns = static_cast<int>(s.size());
        RMatrix epr(np, ns), epi(np, ns);
        CMatrix eq(nq, ns);
        for (int r = 0; r < ns; ++r) {
            exp_ramp(s[r] * sn, pg_, epr.col(r).data(), epi.col(r).data());
            exp_ramp(s[r] * c, qg_, eq.col(r).data());
        }
        const RMatrix tr = v_ * epr, ti = v_ * epi;
        CVector out(ns);
        const double cell = qg_.spacing() * pg_.spacing();
        for (int r = 0; r < ns; ++r) {
            cplx acc = 0.0;
            for (int i = 0; i < nq; ++i) acc += eq(i, r) * cplx(tr(i, r), ti(i, r));
            out[r] = acc * cell;
        }
        return out;
    }

private:
    Grid1D qg_, pg_, grid_;
    RMatrix v_, vt_;
    TomogramBackend kind_;
};

// Interpolation in stored optical data: cubic in X, periodic cubic in theta.
double interpolate_optical(const OpticalTomogram& w, double x, double theta) {
    const Grid1D& tg = w.thetagrid;
    const int nt = tg.count(), nx = w.xgrid.count();
    const double tx = w.xgrid.index_of(x);
    double tt = (wrap_angle(theta) - tg.lower()) / tg.spacing() - 0.5;
    const double fl = std::floor(tt);
    const double f = tt - fl;
    const int i = static_cast<int>(fl);
    const double wts[4] = {-f * (f - 1.0) * (f - 2.0) / 6.0, (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
                           -(f + 1.0) * f * (f - 2.0) / 2.0, (f + 1.0) * f * (f - 1.0) / 6.0};
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (wts[k] == 0.0) continue;
        int j = (i - 1 + k) % nt;
        if (j < 0) j += nt;
        // rows are contiguous in a row-major copy; RMatrix is column-major so gather
        double row[4];
        const double fx = std::floor(tx);
        const int ix = static_cast<int>(fx);
        const double g = tx - fx;
        const double wx[4] = {-g * (g - 1.0) * (g - 2.0) / 6.0, (g + 1.0) * (g - 1.0) * (g - 2.0) / 2.0,
                              -(g + 1.0) * g * (g - 2.0) / 2.0, (g + 1.0) * g * (g - 1.0) / 6.0};
        double v = 0.0;
        for (int m = 0; m < 4; ++m) {
            const int c = ix - 1 + m;
            row[m] = (c >= 0 && c < nx) ? w.values(j, c) : 0.0;
            v += wx[m] * row[m];
        }
        acc += wts[k] * v;
    }
    return acc;
}

class OpticalSource final : public TomogramSource {
public:
    explicit OpticalSource(OpticalTomogram w) : w_(std::move(w)) {}
    TomogramBackend backend() const override { return TomogramBackend::optical_samples; }
    Grid1D natural_grid() const override { return w_.xgrid; }
    std::optional<Grid1D> native_angles() const override { return w_.thetagrid; }
    double optical(double x, double theta) const override {
        if (x <= w_.xgrid.lower() || x >= w_.xgrid.upper()) return 0.0;
        return interpolate_optical(w_, x, theta);
    }

private:
    OpticalTomogram w_;
};

class MixtureSource final : public TomogramSource {
public:
    explicit MixtureSource(std::vector<std::pair<double, SymplecticTomogram>> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) fail_input("mixture needs at least one component");
        double lo = 0.0, hi = 0.0, h = 1e300;
        for (const auto& [w, m] : parts_) {
            lo = std::min(lo, m.grid().lower());
            hi = std::max(hi, m.grid().upper());
            h = std::min(h, m.grid().spacing());
        }
        grid_ = make_grid(lo, hi, std::max(8, static_cast<int>(std::ceil((hi - lo) / h))));
    }
    TomogramBackend backend() const override { return TomogramBackend::composite; }
    Grid1D natural_grid() const override { return grid_; }
    double optical(double x, double theta) const override {
        double acc = 0.0;
        for (const auto& [w, m] : parts_) acc += w * m.optical(x, theta);
        return acc;
    }
    RVector optical_row(double theta, const Grid1D& xgrid) const override {
        RVector acc = RVector::Zero(xgrid.count());
        for (const auto& [w, m] : parts_) acc += w * m.optical_row(theta, xgrid);
        return acc;
    }
    CVector characteristic_line(double theta, const RVector& s) const override {
        CVector acc = CVector::Zero(s.size());
        for (const auto& [w, m] : parts_) acc += w * m.characteristic_line(theta, s);
        return acc;
    }

private:
    std::vector<std::pair<double, SymplecticTomogram>> parts_;
    Grid1D grid_;
};

class RescaledSource final : public TomogramSource {
public:
    RescaledSource(SymplecticTomogram m, double lambda) : m_(std::move(m)), lambda_(lambda) {
        if (lambda == 0.0) fail_input("rescaling factor must be nonzero");
    }
    TomogramBackend backend() const override { return TomogramBackend::composite; }
    Grid1D natural_grid() const override { return m_.grid(); }
    double optical(double x, double theta) const override {
        return std::abs(lambda_) * m_(lambda_ * x, lambda_ * std::cos(theta), lambda_ * std::sin(theta));
    }
    // |l| M(l X, l u) = w(sign(l) X, angle of l u)
    RVector optical_row(double theta, const Grid1D& xgrid) const override {
        if (lambda_ > 0.0) return m_.optical_row(theta, xgrid);
        const RVector r = m_.optical_row(theta + pi, xgrid.mirrored());
        return r.reverse();
    }
    std::optional<Grid1D> native_angles() const override { return m_.native_angles(); }

private:
    SymplecticTomogram m_;
    double lambda_;
};

class ScaledSource final : public TomogramSource {
public:
    ScaledSource(SymplecticTomogram m, double factor) : m_(std::move(m)), f_(factor) {}
    TomogramBackend backend() const override { return TomogramBackend::composite; }
    Grid1D natural_grid() const override { return m_.grid(); }
    double optical(double x, double theta) const override { return f_ * m_.optical(x, theta); }
    RVector optical_row(double theta, const Grid1D& xgrid) const override { return f_ * m_.optical_row(theta, xgrid); }

private:
    SymplecticTomogram m_;
    double f_;
};

class FunctionSource final : public TomogramSource {
public:
    FunctionSource(std::function<double(double, double, double)> f, const Grid1D& g) : f_(std::move(f)), g_(g) {}
    TomogramBackend backend() const override { return TomogramBackend::composite; }
    Grid1D natural_grid() const override { return g_; }
    double optical(double x, double theta) const override { return f_(x, std::cos(theta), std::sin(theta)); }

private:
    std::function<double(double, double, double)> f_;
    Grid1D g_;
};

}  // namespace

SymplecticTomogram symplectic_tomogram(const WaveFunction& psi) {
    require_normalized(psi);
    return SymplecticTomogram(std::make_shared<PureSource>(psi));
}

SymplecticTomogram symplectic_tomogram(const DensityMatrixCV& rho, const Grid1D& xgrid) {
    validate(rho);
    return SymplecticTomogram(std::make_shared<DensitySource>(rho, xgrid));
}

SymplecticTomogram symplectic_tomogram(const WignerFunction& w) {
    return SymplecticTomogram(
        std::make_shared<PhaseSpaceSource>(w.qgrid, w.pgrid, w.values, 1.0 / (2.0 * pi), TomogramBackend::wigner));
}

SymplecticTomogram symplectic_tomogram(const PhaseSpaceDensity& f) {
    validate(f);
    return SymplecticTomogram(
        std::make_shared<PhaseSpaceSource>(f.qgrid, f.pgrid, f.values, 1.0, TomogramBackend::classical_density));
}

SymplecticTomogram symplectic_tomogram(const OpticalTomogram& w) {
    if (w.values.rows() != w.thetagrid.count() || w.values.cols() != w.xgrid.count())
        fail_input("optical tomogram shape does not match its grids");
    return SymplecticTomogram(std::make_shared<OpticalSource>(w));
}

SymplecticTomogram mixture(const std::vector<std::pair<double, SymplecticTomogram>>& parts) {
    return SymplecticTomogram(std::make_shared<MixtureSource>(parts));
}

SymplecticTomogram scaled(const SymplecticTomogram& m, double factor) {
    return SymplecticTomogram(std::make_shared<ScaledSource>(m, factor));
}

SymplecticTomogram rescaled(const SymplecticTomogram& m, double lambda) {
    return SymplecticTomogram(std::make_shared<RescaledSource>(m, lambda));
}

SymplecticTomogram tomogram_from_function(std::function<double(double, double, double)> f, const Grid1D& natural) {
    return SymplecticTomogram(std::make_shared<FunctionSource>(std::move(f), natural));
}

OpticalTomogram optical_tomogram(const SymplecticTomogram& m, const Grid1D& thetagrid, std::optional<Grid1D> xgrid) {
    const Grid1D xg = xgrid.value_or(m.grid());
    RMatrix v(thetagrid.count(), xg.count());
    for (int k = 0; k < thetagrid.count(); ++k) v.row(k) = m.optical_row(thetagrid.point(k), xg).transpose();
    return OpticalTomogram{xg, thetagrid, v};
}

OpticalTomogram optical_tomogram(const WaveFunction& psi, const Grid1D& thetagrid) {
    return optical_tomogram(symplectic_tomogram(psi), thetagrid);
}

OpticalTomogram optical_tomogram(const DensityMatrixCV& rho, const Grid1D& thetagrid, const Grid1D& xgrid) {
    return optical_tomogram(symplectic_tomogram(rho, xgrid), thetagrid);
}

OpticalTomogram optical_tomogram(const PhaseSpaceDensity& f, const Grid1D& thetagrid, std::optional<Grid1D> xgrid) {
    return optical_tomogram(symplectic_tomogram(f), thetagrid, xgrid);
}

double symplectic_from_optical(const OpticalTomogram& w, double X, double mu, double nu) {
    double s, theta;
    direction_polar(mu, nu, s, theta);
    const double x = X / s;
    if (x < w.xgrid.point(0) || x > w.xgrid.point(w.xgrid.count() - 1))
        fail_input(fmt::format("evaluation point X/s = {:.10g} outside the stored X range", x));
    return interpolate_optical(w, x, theta) / s;
}

void write_optical(std::ostream& os, const OpticalTomogram& w) {
    os << fmt::format("#tomokit optical v1 nx={} ntheta={} xmin={:.10g} xmax={:.10g}\n", w.xgrid.count(),
                      w.thetagrid.count(), w.xgrid.lower(), w.xgrid.upper());
    std::string line;
    for (int k = 0; k < w.thetagrid.count(); ++k) {
        const double th = w.thetagrid.point(k);
        for (int i = 0; i < w.xgrid.count(); ++i) {
            line.clear();
            fmt::format_to(std::back_inserter(line), "{:.10g},{:.10g},{:.10g}\n", th, w.xgrid.point(i), w.values(k, i));
            os << line;
        }
    }
}

namespace {

double parse_double(std::string_view sv, const char* what) {
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r')) sv.remove_suffix(1);
    if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || ptr != sv.data() + sv.size()) fail_input(fmt::format("cannot parse {} '{}'", what, sv));
    return v;
}

std::string header_field(const std::string& header, const std::string& key) {
    const std::string tag = " " + key + "=";
    const auto pos = header.find(tag);
    if (pos == std::string::npos) fail_input(fmt::format("optical header lacks '{}'", key));
    const auto start = pos + tag.size();
    const auto end = header.find(' ', start);
    return header.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

OpticalTomogram read_optical(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("#tomokit optical v1", 0) != 0)
        fail_input("not an optical tomogram file (bad header)");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const int nx = static_cast<int>(parse_double(header_field(header, "nx"), "nx"));
    const int nt = static_cast<int>(parse_double(header_field(header, "ntheta"), "ntheta"));
    const double xmin = parse_double(header_field(header, "xmin"), "xmin");
    const double xmax = parse_double(header_field(header, "xmax"), "xmax");
    OpticalTomogram w{make_grid(xmin, xmax, nx), make_grid(0.0, 2.0 * pi, nt), RMatrix(nt, nx)};
    std::string line;
    for (int k = 0; k < nt; ++k)
        for (int i = 0; i < nx; ++i) {
            if (!std::getline(is, line)) fail_input("optical tomogram file is truncated");
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 == std::string::npos ? 0 : c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos) fail_input("malformed optical tomogram row");
            const std::string_view sv(line);
            const double th = parse_double(sv.substr(0, c1), "theta");
            const double x = parse_double(sv.substr(c1 + 1, c2 - c1 - 1), "X");
            const double v = parse_double(sv.substr(c2 + 1), "w");
            if (std::abs(th - w.thetagrid.point(k)) > 1e-8 * (1.0 + std::abs(th)) ||
                std::abs(x - w.xgrid.point(i)) > 1e-8 * (1.0 + std::abs(x)))
                fail_input(fmt::format("optical tomogram row {} is off the declared grid", k * nx + i + 2));
            w.values(k, i) = v;
        }
    return w;
}

void save_optical(const std::string& path, const OpticalTomogram& w) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail_input(fmt::format("cannot open '{}' for writing", path));
    write_optical(os, w);
    if (!os) fail_input(fmt::format("write to '{}' failed", path));
}

OpticalTomogram load_optical(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail_input(fmt::format("cannot open '{}'", path));
    return read_optical(is);
}

bool AxiomReport::ok(double tol, double diff_tol) const {
    for (double e : normalization_error)
        if (e > tol) return false;
    return min_value >= -1e-10 && max_homogeneity_residual <= tol && max_differential_residual <= diff_tol;
}

AxiomReport verify_tomogram_axioms(const SymplecticTomogram& m, const std::vector<std::pair<double, double>>& directions,
                                   const std::vector<double>& lambdas, std::uint64_t seed, double step) {
    if (directions.empty()) fail_input("verify_tomogram_axioms: empty direction list");
    AxiomReport rep;
    rep.min_value = 1e300;
    const Grid1D& g = m.grid();
    for (const auto& [mu, nu] : directions) {
        double s, theta;
        direction_polar(mu, nu, s, theta);
        // int M(X, mu, nu) dX = int w(Y, theta) dY
        const RVector row = m.optical_row(theta);
        rep.min_value = std::min(rep.min_value, row.minCoeff() / s);
        rep.normalization_error.push_back(std::abs(row.sum() * g.spacing() - 1.0));
        for (double lam : lambdas)
            for (int i = 0; i < g.count(); i += std::max(1, g.count() / 16)) {
                const double X = s * g.point(i);
                const double r = std::abs(std::abs(lam) * m(lam * X, lam * mu, lam * nu) - m(X, mu, nu));
                rep.max_homogeneity_residual = std::max(rep.max_homogeneity_residual, r);
            }
    }
    Rng rng = substream(seed, 0x6178696f6dULL);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), ua(0.0, 2.0 * pi), us(0.5, 1.5);
    for (int k = 0; k < 8; ++k) {
        const double X = ux(rng), a = ua(rng), r = us(rng);
        const double mu = r * std::cos(a), nu = r * std::sin(a);
        const double h = step;
        const double dX = (m(X + h, mu, nu) - m(X - h, mu, nu)) / (2 * h);
        const double dmu = (m(X, mu + h, nu) - m(X, mu - h, nu)) / (2 * h);
        const double dnu = (m(X, mu, nu + h) - m(X, mu, nu - h)) / (2 * h);
        const double res = std::abs(X * dX + mu * dmu + nu * dnu + m(X, mu, nu));
        rep.max_differential_residual = std::max(rep.max_differential_residual, res);
    }
    return rep;
}

double tomogram_moments(const SymplecticTomogram& m, int n, Quadrature1D which) {
    if (n < 0 || n > 4) fail_input(fmt::format("moment order {} outside 0..4", n));
    const double theta = which == Quadrature1D::position ? 0.0 : pi / 2;
    const Grid1D& g = m.grid();
    const RVector row = m.optical_row(theta);
    double acc = 0.0;
    for (int i = 0; i < g.count(); ++i) acc += row[i] * std::pow(g.point(i), n);
    return acc * g.spacing();
}

cplx CharacteristicFn::operator()(double k, double mu, double nu) const {
    RVector kv(1);
    kv[0] = k;
    return line(mu, nu, kv)[0];
}

CharacteristicFn characteristic_function(const SymplecticTomogram& m) {
    CharacteristicFn xi;
    xi.line = [m](double mu, double nu, const RVector& k) {
        double s, theta;
        direction_polar(mu, nu, s, theta);
        return m.characteristic_line(theta, (k * s).eval());
    };
    return xi;
}

RVector tomogram_from_characteristic(const CharacteristicFn& xi, double mu, double nu, const Grid1D& xgrid, double kmax,
                                     double dk) {
    const int nk = static_cast<int>(std::lround(2.0 * kmax / dk)) + 1;
    const double h = 2.0 * kmax / (nk - 1);
    RVector k(nk);
    for (int j = 0; j < nk; ++j) k[j] = -kmax + j * h;
    const CVector v = xi.line(mu, nu, k);
    const double edge = std::max(std::abs(v[0]), std::abs(v[nk - 1]));
    if (edge > 1e-6) fail_numerical(fmt::format("characteristic function does not decay: |xi| = {:.10g} at the window edge", edge));
    RVector out(xgrid.count());
    for (int i = 0; i < xgrid.count(); ++i) {
        const double X = xgrid.point(i);
        cplx acc = 0.0;
        for (int j = 0; j < nk; ++j) acc += (j == 0 || j == nk - 1 ? 0.5 : 1.0) * v[j] * std::polar(1.0, -k[j] * X);
        out[i] = (acc * h).real() / (2.0 * pi);
    }
    return out;
}

TomographicSymbol::TomographicSymbol(std::vector<Term> terms) {
    if (terms.empty()) fail_input("symbol needs at least one term");
    for (auto& t : terms) {
        if (!t.psi1.grid.same_as(t.psi2.grid) || !t.psi1.grid.same_as(terms.front().psi1.grid))
            fail_input("symbol terms must share one position grid");
        terms_.push_back(Prepared{t.coef, PreparedWave(t.psi1), PreparedWave(t.psi2)});
    }
}

cplx TomographicSymbol::operator()(double X, double mu, double nu) const {
    double s, theta;
    direction_polar(mu, nu, s, theta);
    const double x = X / s;
    cplx acc = 0.0;
    for (const auto& t : terms_) {
        const cplx a1 = propagate_point(t.w1, theta, x);
        const cplx a2 = propagate_point(t.w2, theta, x);
        acc += t.coef * a1 * std::conj(a2);
    }
    return acc / s;
}

CVector TomographicSymbol::optical_row(double theta, const Grid1D& xgrid) const {
    CVector acc = CVector::Zero(xgrid.count());
    for (const auto& t : terms_) {
        const CVector a1 = propagate_samples(t.w1, theta, xgrid);
        const CVector a2 = propagate_samples(t.w2, theta, xgrid);
        acc += t.coef * (a1.array() * a2.conjugate().array()).matrix();
    }
    return acc;
}

TomographicSymbol operator_symbol(const WaveFunction& psi1, const WaveFunction& psi2) {
    if (psi1.samples.size() != psi1.grid.count() || psi2.samples.size() != psi2.grid.count())
        fail_input("wave function size does not match its grid");
    TomographicSymbol sym({{cplx(1.0, 0.0), psi1, psi2}});
    sym.trace_hint = psi2.samples.dot(psi1.samples) * psi1.grid.spacing();  // <psi2|psi1>
    return sym;
}

TomographicSymbol operator_symbol(const DensityMatrixCV& rho, const Grid1D& xgrid) {
    const CMatrix h = 0.5 * (rho.rho + rho.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const RMatrix basis = oscillator_eigenfunctions(rho.cutoff(), xgrid);
    std::vector<TomographicSymbol::Term> terms;
    for (int k = rho.cutoff() - 1; k >= 0; --k) {
        const double lambda = es.eigenvalues()[k];
        if (std::abs(lambda) <= 1e-14) continue;
        const WaveFunction psi{xgrid, basis.cast<cplx>() * es.eigenvectors().col(k)};
        terms.push_back({cplx(lambda, 0.0), psi, psi});
    }
    if (terms.empty()) fail_input("operator has no spectral weight");
    TomographicSymbol sym(std::move(terms));
    sym.trace_hint = rho.rho.trace();
    return sym;
}

TraceResult symbol_trace(const TomographicSymbol& sym) {
    const Grid1D& g = sym.grid();
    const CVector row = sym.optical_row(0.0);
    TraceResult r;
    r.trace = row.sum() * g.spacing();
    const double eps = 1e-3;
    r.limit_trace = 0.5 * (fourier_sum(row, g, eps) + fourier_sum(row, g, -eps));
    r.discrepancy = std::abs(r.trace - r.limit_trace);
    if (r.discrepancy > 1e-3)
        fail_validation(fmt::format("trace formulas disagree by {:.10g}: symbol is inconsistent", r.discrepancy));
    return r;
}

namespace {

template <class RowA, class RowB>
cplx pair_trace_impl(RowA row_a, const Grid1D& ga, RowB row_b, const Grid1D& gb, int angles, double window) {
    if (angles < 8) fail_input("symbol_pair_trace: need at least 8 angles");
    const int panels = std::max(1, static_cast<int>(std::ceil(window)));
    const Quadrature rad = composite_gauss_legendre(0.0, window, panels, 16);
    const int nr = static_cast<int>(rad.nodes.size());
    auto kernel = [&](const Grid1D& g, double sign) {
        CMatrix e(nr, g.count());
        for (int r = 0; r < nr; ++r)
            for (int i = 0; i < g.count(); ++i) e(r, i) = std::polar(g.spacing(), sign * rad.nodes[r] * g.point(i));
        return e;
    };
    const CMatrix ea = kernel(ga, 1.0), eb = kernel(gb, -1.0);
    cplx acc = 0.0;
    for (int k = 0; k < angles; ++k) {
        const double theta = 2.0 * pi * (k + 0.5) / angles;
        const CVector xa = ea * row_a(theta);
        const CVector xb = eb * row_b(theta);
        for (int r = 0; r < nr; ++r) acc += rad.weights[r] * rad.nodes[r] * xa[r] * xb[r];
    }
    return acc / static_cast<double>(angles);
}

}  // namespace

cplx symbol_pair_trace(const TomographicSymbol& a, const TomographicSymbol& b, int angles, double window) {
    return pair_trace_impl([&](double t) { return a.optical_row(t); }, a.grid(),
                           [&](double t) { return b.optical_row(t); }, b.grid(), angles, window);
}

cplx symbol_pair_trace(const SymplecticTomogram& a, const SymplecticTomogram& b, int angles, double window) {
    return pair_trace_impl([&](double t) { return a.optical_row(t).cast<cplx>().eval(); }, a.grid(),
                           [&](double t) { return b.optical_row(t).cast<cplx>().eval(); }, b.grid(), angles, window);
}

ShiftedTomogram shifted_tomogram(const SymplecticTomogram& m, double a) { return ShiftedTomogram(m, a); }

}  // namespace tomokit
