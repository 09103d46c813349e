#include "tomokit/cvstates.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tomokit {

RMatrix oscillator_eigenfunctions(int count, const Grid1D& grid) {
    if (count < 1) fail_input("oscillator_eigenfunctions: count < 1");
    const int n = grid.count();
    RMatrix out(n, count);
    const double c0 = std::pow(pi, -0.25);
    for (int i = 0; i < n; ++i) {
        const double x = grid.point(i);
        double prev = 0.0;
        double cur = c0 * std::exp(-0.5 * x * x);
        out(i, 0) = cur;
        for (int k = 0; k + 1 < count; ++k) {
            const double next = std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
            prev = cur;
            cur = next;
            out(i, k + 1) = cur;
        }
    }
    return out;
}

WaveFunction oscillator_eigenfunction(int n, const Grid1D& grid) {
    if (n < 0) fail_input(fmt::format("oscillator level {} is negative", n));
    const RMatrix all = oscillator_eigenfunctions(n + 1, grid);
    return WaveFunction{grid, all.col(n).cast<cplx>()};
}

WaveFunction fock_state(int n, const Grid1D& grid) {
    if (n < 0 || n > 10) fail_input(fmt::format("fock level {} outside 0..10", n));
    return oscillator_eigenfunction(n, grid);
}

WaveFunction coherent_state(cplx alpha, const Grid1D& grid) {
    if (std::abs(alpha) > 2.0 + 1e-12) fail_input(fmt::format("coherent amplitude |alpha| = {:.10g} exceeds 2", std::abs(alpha)));
    const double q0 = std::sqrt(2.0) * alpha.real();
    const double p0 = std::sqrt(2.0) * alpha.imag();
    const double c0 = std::pow(pi, -0.25);
    CVector s(grid.count());
    for (int i = 0; i < grid.count(); ++i) {
        const double x = grid.point(i);
        s[i] = std::polar(c0 * std::exp(-0.5 * (x - q0) * (x - q0)), p0 * x - 0.5 * q0 * p0);
    }
    return WaveFunction{grid, s};
}

DensityMatrixCV thermal_state(double nbar, int cutoff) {
    if (!(nbar >= 0.0)) fail_input(fmt::format("thermal occupation {:.10g} is negative", nbar));
    if (cutoff < 8) fail_input(fmt::format("cutoff {} below 8", cutoff));
    const double r = nbar / (1.0 + nbar);
    RVector d(cutoff);
    double w = 1.0;
    for (int n = 0; n < cutoff; ++n) {
        d[n] = w;
        w *= r;
    }
    d /= d.sum();
    return DensityMatrixCV{d.cast<cplx>().asDiagonal()};
}

DensityMatrixCV coherent_density_matrix(cplx alpha, int cutoff) {
    if (cutoff < 1) fail_input("cutoff must be positive");
    CVector c(cutoff);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < cutoff; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    return DensityMatrixCV{c * c.adjoint()};
}

DensityMatrixCV to_density_matrix(const WaveFunction& psi, int cutoff) {
    if (cutoff < 1) fail_input("cutoff must be positive");
    const RMatrix basis = oscillator_eigenfunctions(cutoff, psi.grid);
    const CVector c = basis.transpose().cast<cplx>() * psi.samples * psi.grid.spacing();
    return DensityMatrixCV{c * c.adjoint()};
}

void validate(const DensityMatrixCV& rho, double tol) {
    const CMatrix& m = rho.rho;
    if (m.rows() != m.cols() || m.rows() < 1) fail_input("density matrix must be square and non-empty");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) fail_input("density matrix is not Hermitian");
    if (std::abs(m.trace() - cplx(1.0, 0.0)) > tol) fail_input(fmt::format("density matrix trace {:.10g} != 1", m.trace().real()));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    if (es.eigenvalues().minCoeff() < -tol) fail_input("density matrix has a negative eigenvalue");
}

void validate(const PhaseSpaceDensity& f, double tol) {
    if (f.values.rows() != f.qgrid.count() || f.values.cols() != f.pgrid.count())
        fail_input("phase-space density shape does not match its grids");
    if (f.values.minCoeff() < 0.0) fail_input("phase-space density has negative values");
    const double total = f.values.sum() * f.qgrid.spacing() * f.pgrid.spacing();
    if (std::abs(total - 1.0) > tol) fail_input(fmt::format("phase-space density integrates to {:.10g}", total));
}

std::vector<std::pair<double, WaveFunction>> spectral_wavefunctions(const DensityMatrixCV& rho, const Grid1D& grid,
                                                                    double floor) {
    const CMatrix h = 0.5 * (rho.rho + rho.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const RMatrix basis = oscillator_eigenfunctions(rho.cutoff(), grid);
    std::vector<std::pair<double, WaveFunction>> out;
    for (int k = rho.cutoff() - 1; k >= 0; --k) {
        const double lambda = es.eigenvalues()[k];
        if (lambda <= floor) continue;
        const CVector samples = basis.cast<cplx>() * es.eigenvectors().col(k);
        out.emplace_back(lambda, WaveFunction{grid, samples});
    }
    return out;
}

namespace {

CMatrix psd_sqrt(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    const double cut = 1e-13 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    const RVector s = es.eigenvalues().unaryExpr([cut](double v) { return v > cut ? std::sqrt(v) : 0.0; });
    return es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double state_fidelity(const DensityMatrixCV& a, const DensityMatrixCV& b) {
    if (a.cutoff() != b.cutoff()) fail_input("state_fidelity: cutoff mismatch");
    const CMatrix sa = psd_sqrt(a.rho);
    Eigen::SelfAdjointEigenSolver<CMatrix> eb(0.5 * (b.rho + b.rho.adjoint()));
    const CMatrix bc = eb.eigenvectors() * eb.eigenvalues().cwiseMax(0.0).cast<cplx>().asDiagonal() *
                       eb.eigenvectors().adjoint();
    const CMatrix m = sa * bc * sa;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    const double cut = 1e-15 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    double root = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] > cut) root += std::sqrt(es.eigenvalues()[i]);
    return root * root;
}

PhaseSpaceDensity classical_gaussian_density(double mean_q, double mean_p, const Eigen::Matrix2d& cov,
                                             std::optional<std::pair<Grid1D, Grid1D>> grids) {
    if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-12 * (std::abs(cov(0, 1)) + 1.0)) fail_input("covariance is not symmetric");
    const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(1, 0);
    if (!(cov(0, 0) > 0.0) || !(det > 0.0)) fail_input("covariance is not positive definite");
    Grid1D qg, pg;
    if (grids) {
        qg = grids->first;
        pg = grids->second;
    } else {
        const double hq = 9.0 * std::sqrt(cov(0, 0)), hp = 9.0 * std::sqrt(cov(1, 1));
        qg = make_grid(mean_q - hq, mean_q + hq, 128);
        pg = make_grid(mean_p - hp, mean_p + hp, 128);
    }
    const Eigen::Matrix2d inv = cov.inverse();
    const double norm = 1.0 / (2.0 * pi * std::sqrt(det));
    RMatrix v(qg.count(), pg.count());
    for (int j = 0; j < pg.count(); ++j) {
        const double dp = pg.point(j) - mean_p;
        for (int i = 0; i < qg.count(); ++i) {
            const double dq = qg.point(i) - mean_q;
            const double quad = inv(0, 0) * dq * dq + 2.0 * inv(0, 1) * dq * dp + inv(1, 1) * dp * dp;
            v(i, j) = norm * std::exp(-0.5 * quad);
        }
    }
    const double total = v.sum() * qg.spacing() * pg.spacing();
    if (!(total > 0.5)) fail_input("Gaussian does not fit on the requested grids");
    v /= total;
    return PhaseSpaceDensity{qg, pg, v};
}

namespace {

Grid1D default_wigner_grid() { return make_grid(-8.0, 8.0, 256); }

// Adds weight * W_psi into `out`.
void accumulate_wigner(const WaveFunction& psi, double weight, const Grid1D& qg, const Grid1D& pg, RMatrix& out) {
    const Grid1D& xg = psi.grid;
    const int n = xg.count();
    const double dx = xg.spacing();
    const double x0 = xg.point(0);
    for (int iq = 0; iq < qg.count(); ++iq) {
        const double q = qg.point(iq);
        const double mf = 2.0 * (q - x0) / dx;
        const double mr = std::round(mf);
        if (std::abs(mf - mr) > 1e-6) fail_input("Wigner q grid does not sit on the half-lattice of the position grid");
        const int m = static_cast<int>(mr);
        const int jlo = std::max(0, m - (n - 1));
        const int jhi = std::min(n - 1, m);
        const int len = jhi - jlo + 1;
        if (len < 8) continue;  // edge of the position window, psi is negligible there
        CVector in(len);
        for (int j = jlo; j <= jhi; ++j) in[j - jlo] = psi.samples[j] * std::conj(psi.samples[m - j]) * (2.0 * dx);
        const double y_first = (2.0 * jlo - m) * dx;
        const Grid1D yg = make_grid(y_first - dx, y_first - dx + 2.0 * dx * len, len);
        const CVector row = chirp_z(in, yg, 1.0, pg);
        out.row(iq) += weight * row.real().transpose();
    }
}

}  // namespace

WignerFunction wigner_from_state(const WaveFunction& psi, std::optional<Grid1D> qgrid, std::optional<Grid1D> pgrid) {
    if (psi.samples.size() != psi.grid.count()) fail_input("wave function size does not match its grid");
    const Grid1D qg = qgrid.value_or(default_wigner_grid());
    const Grid1D pg = pgrid.value_or(default_wigner_grid());
    RMatrix w = RMatrix::Zero(qg.count(), pg.count());
    accumulate_wigner(psi, 1.0, qg, pg, w);
    return WignerFunction{qg, pg, w};
}

WignerFunction wigner_from_state(const DensityMatrixCV& rho, std::optional<Grid1D> qgrid, std::optional<Grid1D> pgrid,
                                 const Grid1D& xgrid) {
    const Grid1D qg = qgrid.value_or(default_wigner_grid());
    const Grid1D pg = pgrid.value_or(default_wigner_grid());
    RMatrix w = RMatrix::Zero(qg.count(), pg.count());
    for (const auto& [lambda, psi] : spectral_wavefunctions(rho, xgrid)) accumulate_wigner(psi, lambda, qg, pg, w);
    return WignerFunction{qg, pg, w};
}

}  // namespace tomokit
