#include "tomokit/cventropy.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tomokit/error.hpp"
#include "tomokit/report.hpp"

namespace tomokit {

namespace {

constexpr double clip = 1e-300;

void require_density(const RVector& p, double spacing) {
    if (!(spacing > 0.0)) fail_input("spacing must be positive");
    if (p.size() == 0) fail_input("empty density");
    const double total = p.sum() * spacing;
    if (std::abs(total - 1.0) > 1e-4) fail_input(fmt::format("unnormalized density: integral {:.10g}", total));
    if (p.minCoeff() < -1e-10) fail_input(fmt::format("negative density value {:.10g}", p.minCoeff()));
}

double shannon(const RVector& p, double spacing) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > clip) acc -= p[i] * std::log(p[i]);
    return acc * spacing;
}

double renyi(const RVector& p, double spacing, double q) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > clip) acc += std::pow(p[i], q);
    return std::log(acc * spacing) / (1.0 - q);
}

// Row of M(., mu, nu) on the stretched natural grid, with its spacing.
RVector direction_row(const SymplecticTomogram& m, double mu, double nu, double& spacing) {
    double s, theta;
    direction_polar(mu, nu, s, theta);
    const Grid1D& g = m.grid();
    spacing = g.spacing() * s;
    return m.optical_row(theta) / s;
}

}  // namespace

double differential_entropy(const RVector& density, double spacing) {
    require_density(density, spacing);
    return shannon(density, spacing);
}

double renyi_differential_entropy(const RVector& density, double spacing, double q) {
    if (!(q > 0.0)) fail_input(fmt::format("Renyi order {} must be positive", q));
    require_density(density, spacing);
    if (q == 1.0) return shannon(density, spacing);
    return renyi(density, spacing, q);
}

PositionMomentumEntropies position_momentum_entropies(const WaveFunction& psi) {
    require_normalized(psi);
    const WaveFunction mom = fourier_momentum(psi);
    const double h = psi.grid.spacing();
    return {differential_entropy(psi.samples.cwiseAbs2(), h), differential_entropy(mom.samples.cwiseAbs2(), mom.grid.spacing())};
}

double tomographic_entropy(const SymplecticTomogram& m, double mu, double nu) {
    double h;
    const RVector row = direction_row(m, mu, nu, h);
    return differential_entropy(row, h);
}

std::vector<EntropicUrEntry> entropic_ur_check(const SymplecticTomogram& m, const std::vector<double>& thetas) {
    const double bound = std::log(pi * std::exp(1.0));
    std::vector<EntropicUrEntry> out;
    out.reserve(thetas.size());
    for (double t : thetas) {
        EntropicUrEntry e;
        e.theta = t;
        e.entropy = tomographic_entropy(m, t);
        e.entropy_conjugate = tomographic_entropy(m, t + pi / 2);
        e.residual = e.entropy + e.entropy_conjugate - bound;
        out.push_back(e);
    }
    return out;
}

std::vector<RenyiUrEntry> renyi_ur_check(const SymplecticTomogram& m, double theta, const std::vector<double>& q_values) {
    const Grid1D& g = m.grid();
    const RVector w = m.optical_row(theta), wc = m.optical_row(theta + pi / 2);
    require_density(w, g.spacing());
    require_density(wc, g.spacing());
    std::vector<RenyiUrEntry> out;
    for (double q : q_values) {
        if (!(q > 0.0 && q < 1.0)) fail_input(fmt::format("Renyi parameter q = {} outside (0, 1)", q));
        const double alpha = 1.0 / (1.0 - q), beta = 1.0 / (1.0 + q);
        const double lhs = renyi(wc, g.spacing(), alpha) + renyi(w, g.spacing(), beta);
        const double rhs = -std::log(alpha / pi) / (2.0 * (1.0 - alpha)) - std::log(beta / pi) / (2.0 * (1.0 - beta));
        out.push_back({q, lhs - rhs});
    }
    return out;
}

std::string format_entry(const EntropicUrEntry& e) {
    return "theta=" + format_number(e.theta) + " S=" + format_number(e.entropy) +
           " S_conj=" + format_number(e.entropy_conjugate) + " residual=" + format_number(e.residual);
}

std::string format_entry(const RenyiUrEntry& e) {
    return "q=" + format_number(e.q) + " residual=" + format_number(e.residual);
}

PhaseSpaceMarginals phase_space_marginals(const PhaseSpaceDensity& f) {
    validate(f);
    PhaseSpaceMarginals m;
    m.qgrid = f.qgrid;
    m.pgrid = f.pgrid;
    m.position = f.values.rowwise().sum() * f.pgrid.spacing();
    m.momentum = f.values.colwise().sum().transpose() * f.qgrid.spacing();
    m.position_entropy = differential_entropy(m.position, f.qgrid.spacing());
    m.momentum_entropy = differential_entropy(m.momentum, f.pgrid.spacing());
    return m;
}

DispersionMatrix make_dispersion(const RMatrix& sigma) {
    if (sigma.rows() != sigma.cols() || (sigma.rows() != 2 && sigma.rows() != 4))
        fail_input("dispersion matrix must be 2x2 or 4x4");
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + sigma.cwiseAbs().maxCoeff()))
        fail_input("dispersion matrix is not symmetric");
    if (sigma.diagonal().minCoeff() < 0.0) fail_input("dispersion matrix has a negative variance");
    return DispersionMatrix{static_cast<int>(sigma.rows() / 2), sigma};
}

DispersionMatrix dispersion_matrix(const PhaseSpaceDensity& f) {
    validate(f);
    const RVector q = f.qgrid.points(), p = f.pgrid.points();
    const double cell = f.qgrid.spacing() * f.pgrid.spacing();
    const double mass = f.values.sum() * cell;
    const RVector pq = f.values.rowwise().sum() * (f.pgrid.spacing() / mass);
    const RVector pp = f.values.colwise().sum().transpose() * (f.qgrid.spacing() / mass);
    const double mq = q.dot(pq) * f.qgrid.spacing(), mp = p.dot(pp) * f.pgrid.spacing();
    const RVector dq = q.array() - mq, dp = p.array() - mp;
    RMatrix s(2, 2);
    s(0, 0) = dp.cwiseAbs2().dot(pp) * f.pgrid.spacing();
    s(1, 1) = dq.cwiseAbs2().dot(pq) * f.qgrid.spacing();
    s(0, 1) = s(1, 0) = dq.dot(f.values * dp) * cell / mass;
    return make_dispersion(s);
}

DispersionMatrix dispersion_matrix(const DensityMatrixCV& rho) {
    validate(rho);
    // one extra level keeps q^2 and p^2 exact on the truncated space
    const int n = rho.cutoff() + 1;
    CMatrix r = CMatrix::Zero(n, n);
    r.topLeftCorner(n - 1, n - 1) = rho.rho;
    CMatrix a = CMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const CMatrix q = (a + a.adjoint()) / std::sqrt(2.0);
    const CMatrix p = (a - a.adjoint()) / cplx(0.0, std::sqrt(2.0));
    const auto ev = [&](const CMatrix& op) { return (r * op).trace().real(); };
    const double mq = ev(q), mp = ev(p);
    RMatrix s(2, 2);
    s(0, 0) = ev(p * p) - mp * mp;
    s(1, 1) = ev(q * q) - mq * mq;
    s(0, 1) = s(1, 0) = 0.5 * ev(q * p + p * q) - mq * mp;
    return make_dispersion(s);
}

DispersionMatrix dispersion_matrix(const DensityMatrixCV& rho1, const DensityMatrixCV& rho2) {
    RMatrix s = RMatrix::Zero(4, 4);
    s.topLeftCorner(2, 2) = dispersion_matrix(rho1).sigma;
    s.bottomRightCorner(2, 2) = dispersion_matrix(rho2).sigma;
    return make_dispersion(s);
}

bool UncertaintyReport::all_ok() const {
    for (const auto& c : conditions)
        if (!c.ok) return false;
    return true;
}

UncertaintyReport uncertainty_tests(const DispersionMatrix& sigma, StateKind kind) {
    constexpr double tol = 1e-9;
    UncertaintyReport rep;
    const auto add = [&](std::string name, double v) { rep.conditions.push_back({std::move(name), v, v >= -tol}); };
    for (int m = 0; m < sigma.modes; ++m) {
        const std::string tag = sigma.modes > 1 ? fmt::format("mode{}.", m + 1) : std::string();
        const double d = sigma.qq(m) * sigma.pp(m) - sigma.qp(m) * sigma.qp(m);
        if (kind == StateKind::classical) {
            add(tag + "var_q", sigma.qq(m));
            add(tag + "var_p", sigma.pp(m));
            add(tag + "cauchy_schwarz", d);
        } else {
            add(tag + "robertson_schroedinger", d - 0.25);
        }
    }
    if (kind == StateKind::classical) {
        add("det", sigma.sigma.determinant());
        if (sigma.modes == 2) add("minor3", sigma.sigma.topLeftCorner(3, 3).determinant());
    } else if (sigma.modes == 2) {
        CMatrix aug = sigma.sigma.cast<cplx>();
        for (int m = 0; m < 2; ++m) {
            // [p, q] = -i in the (p, q) ordering
            aug(2 * m, 2 * m + 1) += cplx(0.0, -0.5);
            aug(2 * m + 1, 2 * m) += cplx(0.0, 0.5);
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(aug, Eigen::EigenvaluesOnly);
        add("augmented_min_eigenvalue", es.eigenvalues().minCoeff());
    }
    return rep;
}

}  // namespace tomokit
