#include "tomokit/cvrecon.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tomokit/report.hpp"

namespace tomokit {

double tomogram_support_radius(const SymplecticTomogram& m, double rel_threshold) {
    const Grid1D& g = m.grid();
    double r = 0.0;
    constexpr int probes = 16;
    for (int k = 0; k < probes; ++k) {
        const RVector row = m.optical_row(pi * (k + 0.5) / probes);
        const double cut = rel_threshold * row.cwiseAbs().maxCoeff();
        for (int i = 0; i < g.count(); ++i)
            if (std::abs(row[i]) > cut) r = std::max(r, std::abs(g.point(i)) + g.spacing());
    }
    return r;
}

double characteristic_window(const SymplecticTomogram& m, double threshold) {
    const Grid1D& g = m.grid();
    const double step = 0.25;
    const double smax = 0.9 * pi / g.spacing();
    const int ns = static_cast<int>(smax / step);
    RVector s(ns);
    for (int i = 0; i < ns; ++i) s[i] = (i + 1) * step;
    RVector peak = RVector::Zero(ns);
    constexpr int probes = 16;
    for (int k = 0; k < probes; ++k) {
        const CVector line = m.characteristic_line(pi * (k + 0.5) / probes, s);
        peak = peak.cwiseMax(line.cwiseAbs());
    }
    // first run of four steps below threshold; sampled data alias back up further out
    int run = 0;
    for (int i = 0; i < ns; ++i) {
        run = peak[i] < threshold ? run + 1 : 0;
        if (run == 4) return s[i - 2];
    }
    fail_numerical(fmt::format("characteristic function does not decay below {} within s = {:.10g}", threshold, smax));
}

namespace {

int round_up(int v, int q) { return ((v + q - 1) / q) * q; }

double corner_radius(const Grid1D& qg, const Grid1D& pg) {
    double r = 0.0;
    for (double q : {qg.lower(), qg.upper()})
        for (double p : {pg.lower(), pg.upper()}) r = std::max(r, std::hypot(q, p));
    return r;
}

}  // namespace

PolarCharacteristic sample_characteristic(const SymplecticTomogram& m, const ReconstructionOptions& opt,
                                          double output_radius) {
    PolarCharacteristic pc;
    pc.support = tomogram_support_radius(m);
    if (opt.window) {
        pc.window = *opt.window;
        if (!(pc.window > 0.0)) fail_input("reconstruction window must be positive");
    } else {
        pc.window = characteristic_window(m, opt.decay_threshold);
    }
    const double K = pc.window;
    const double fock_band = opt.cutoff > 0 ? std::sqrt(2.0 * opt.cutoff) + 2.0 : 0.0;

    // Angles: native measurement angles when available, else enough to resolve the
    // angular band K (support + output radius) plus the Fock index range.
    const auto native = m.native_angles();
    if (native && native->count() % 2 == 0 && std::abs(native->lower()) < 1e-12 &&
        std::abs(native->upper() - 2.0 * pi) < 1e-12) {
        const int n_half = native->count() / 2;
        pc.theta.resize(n_half);
        for (int j = 0; j < n_half; ++j) pc.theta[j] = native->point(j);
    } else {
        const double band = K * (pc.support + std::max(output_radius, 0.0));
        const int n_full = round_up(static_cast<int>(std::ceil(band + 10.0 * std::cbrt(band + 1.0))) + opt.cutoff + 16, 16);
        const int n_half = n_full / 2;
        pc.theta.resize(n_half);
        for (int j = 0; j < n_half; ++j) pc.theta[j] = pi * (j + 0.5) / n_half;
    }

    const double omega = pc.support + std::max(output_radius, fock_band) + 2.0;
    const double h = std::min(2.0, 16.0 / omega);
    const int panels = std::max(1, static_cast<int>(std::ceil(K / h)));
    pc.radial = composite_gauss_legendre(0.0, K, panels, 16);

    pc.chi.resize(pc.theta.size(), pc.radial.nodes.size());
    double edge = 0.0;
    RVector kedge(1);
    kedge[0] = K;
    for (Eigen::Index j = 0; j < pc.theta.size(); ++j) {
        pc.chi.row(j) = m.characteristic_line(pc.theta[j], pc.radial.nodes).transpose();
        if (opt.window) edge = std::max(edge, std::abs(m.characteristic_line(pc.theta[j], kedge)[0]));
    }
    if (opt.window && edge > 1e-6)
        fail_numerical(fmt::format("characteristic function does not decay: |chi| = {:.10g} at the window edge", edge));
    return pc;
}

PhaseSpaceDensity reconstruct_phase_space(const PolarCharacteristic& pc, const Grid1D& qg, const Grid1D& pg) {
    const Eigen::Index nh = pc.theta.size(), nr = pc.radial.nodes.size(), nn = nh * nr;
    CVector c(nn);
    RVector mu(nn), nu(nn);
    for (Eigen::Index j = 0; j < nh; ++j)
        for (Eigen::Index r = 0; r < nr; ++r) {
            const double s = pc.radial.nodes[r];
            const Eigen::Index n = j * nr + r;
            c[n] = pc.radial.weights[r] * s * pc.chi(j, r);
            mu[n] = s * std::cos(pc.theta[j]);
            nu[n] = s * std::sin(pc.theta[j]);
        }
    // f = Re[A diag(c) B^T] with A = exp(-i mu q), B = exp(-i nu p), as two real products
    RMatrix ar(qg.count(), nn), ai(qg.count(), nn), br(pg.count(), nn), bi(pg.count(), nn);
    for (Eigen::Index n = 0; n < nn; ++n) {
        exp_ramp(-mu[n], qg, ar.col(n).data(), ai.col(n).data());
        exp_ramp(-nu[n], pg, br.col(n).data(), bi.col(n).data());
        const double cr = c[n].real(), ci = c[n].imag();
        for (int i = 0; i < qg.count(); ++i) {
            const double re = ar(i, n), im = ai(i, n);
            ar(i, n) = re * cr - im * ci;
            ai(i, n) = re * ci + im * cr;
        }
    }
    RMatrix v = ar * br.transpose();
    v.noalias() -= ai * bi.transpose();
    // the conjugate half circle doubles the real part
    v /= 2.0 * pi * static_cast<double>(nh);
    return PhaseSpaceDensity{qg, pg, v};
}

PhaseSpaceDensity reconstruct_phase_space(const SymplecticTomogram& m, const ReconstructionOptions& opt) {
    Grid1D qg, pg;
    if (opt.qgrid && opt.pgrid) {
        qg = *opt.qgrid;
        pg = *opt.pgrid;
    } else {
        const double r = std::max(1.0, 1.05 * tomogram_support_radius(m));
        qg = opt.qgrid.value_or(make_grid(-r, r, opt.output_points));
        pg = opt.pgrid.value_or(make_grid(-r, r, opt.output_points));
    }
    ReconstructionOptions o = opt;
    o.cutoff = 0;
    const PolarCharacteristic pc = sample_characteristic(m, o, corner_radius(qg, pg));
    return reconstruct_phase_space(pc, qg, pg);
}

double displacement_radial(int m, int n, double s) {
    const int lo = std::min(m, n), d = std::abs(m - n);
    const double x = 0.5 * s * s;
    if (s == 0.0) return d == 0 ? 1.0 : 0.0;
    // associated Laguerre L_lo^{(d)}(x) by the three-term recurrence
    double l0 = 1.0, l1 = 1.0 + d - x;
    double lag = lo == 0 ? l0 : l1;
    for (int k = 1; k < lo; ++k) {
        const double l2 = ((2.0 * k + 1.0 + d - x) * l1 - (k + d) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
        lag = l2;
    }
    if (lag == 0.0) return 0.0;
    const double logv = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + d + 1.0)) + d * std::log(s / std::sqrt(2.0)) -
                        0.5 * x + std::log(std::abs(lag));
    if (logv < -700.0) return 0.0;
    double v = std::exp(logv) * (lag < 0 ? -1.0 : 1.0);
    if (m < n && (d % 2 == 1)) v = -v;
    return v;
}

DensityMatrixCV reconstruct_density_matrix(const PolarCharacteristic& pc, int cutoff, bool check_trace) {
    if (cutoff < 1 || cutoff > default_cutoff) fail_input(fmt::format("cutoff {} outside 1..{}", cutoff, default_cutoff));
    const Eigen::Index nh = pc.theta.size(), nr = pc.radial.nodes.size();
    const int nd = 2 * cutoff - 1;
    // G_d(s) = sum over the full circle of chi_theta(s) exp(i d (theta - pi/2))
    CMatrix gsum(nd, nr);
    for (int di = 0; di < nd; ++di) {
        const int d = di - (cutoff - 1);
        const double par = (d % 2 == 0) ? 1.0 : -1.0;
        for (Eigen::Index r = 0; r < nr; ++r) {
            cplx acc = 0.0;
            for (Eigen::Index j = 0; j < nh; ++j) {
                const cplx x = pc.chi(j, r);
                acc += std::polar(1.0, d * (pc.theta[j] - pi / 2)) * (x + par * std::conj(x));
            }
            gsum(di, r) = acc;
        }
    }
    CMatrix rho(cutoff, cutoff);
    for (int m = 0; m < cutoff; ++m)
        for (int n = 0; n < cutoff; ++n) {
            const int di = (m - n) + (cutoff - 1);
            cplx acc = 0.0;
            for (Eigen::Index r = 0; r < nr; ++r) {
                const double s = pc.radial.nodes[r];
                acc += pc.radial.weights[r] * s * displacement_radial(m, n, s) * gsum(di, r);
            }
            rho(m, n) = acc / static_cast<double>(2 * nh);
        }
    const CMatrix herm = 0.5 * (rho + rho.adjoint());
    if (check_trace) {
        const double tr = herm.trace().real();
        if (std::abs(tr - 1.0) > 1e-2)
            fail_numerical(fmt::format("cutoff {} too small: reconstructed trace {:.10g}", cutoff, tr));
    }
    return DensityMatrixCV{herm};
}

DensityMatrixCV reconstruct_density_matrix(const SymplecticTomogram& m, int cutoff, const ReconstructionOptions& opt) {
    ReconstructionOptions o = opt;
    o.cutoff = cutoff;
    const PolarCharacteristic pc = sample_characteristic(m, o, 0.0);
    return reconstruct_density_matrix(pc, cutoff, opt.check_trace);
}

ClassificationResult classify_tomogram(const SymplecticTomogram& m, std::optional<double> tolerance, int cutoff) {
    ReconstructionOptions o;
    o.cutoff = cutoff;
    const double r = std::max(1.0, 1.05 * tomogram_support_radius(m));
    const Grid1D g = make_grid(-r, r, 97);
    const PolarCharacteristic pc = sample_characteristic(m, o, corner_radius(g, g));
    const PhaseSpaceDensity f = reconstruct_phase_space(pc, g, g);
    const DensityMatrixCV rho = reconstruct_density_matrix(pc, cutoff, false);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.rho, Eigen::EigenvaluesOnly);

    ClassificationResult res;
    res.min_phase_space_value = f.values.minCoeff();
    res.min_density_eigenvalue = es.eigenvalues().minCoeff();
    res.trace = rho.rho.trace().real();
    res.tolerance = tolerance.value_or(1e-6 * std::max(f.values.cwiseAbs().maxCoeff(), rho.rho.cwiseAbs().maxCoeff()));
    if (!(res.tolerance > 0.0)) fail_input("classification tolerance must be positive");
    res.classical = res.min_phase_space_value >= -res.tolerance;
    res.quantum = res.min_density_eigenvalue >= -res.tolerance;
    return res;
}

std::string format_classification(const ClassificationResult& r) {
    return "classical=" + format_bool(r.classical) + " quantum=" + format_bool(r.quantum) +
           " min_f=" + format_number(r.min_phase_space_value) + " min_eig=" + format_number(r.min_density_eigenvalue);
}

NeitherFixture neither_fixture(std::uint64_t seed) {
    const SymplecticTomogram fock1 = symplectic_tomogram(fock_state(1));
    Eigen::Matrix2d cov;
    cov << 0.05, 0.0, 0.0, 0.05;
    Rng rng = substream(seed, 0x6e656974686572ULL);
    std::uniform_real_distribution<double> uw(0.2, 0.5), ua(0.0, 2.0 * pi), ur(2.5, 3.0);
    for (int attempt = 0; attempt < 16; ++attempt) {
        const double w = uw(rng), a = ua(rng), dist = ur(rng);
        const double mq = dist * std::cos(a), mp = dist * std::sin(a);
        const Grid1D gq = make_grid(mq - 2.0, mq + 2.0, 128), gp = make_grid(mp - 2.0, mp + 2.0, 128);
        const SymplecticTomogram cl = symplectic_tomogram(classical_gaussian_density(mq, mp, cov, std::pair{gq, gp}));
        const SymplecticTomogram mix = mixture({{1.0 - w, fock1}, {w, cl}});
        const ClassificationResult c = classify_tomogram(mix);
        if (!c.classical && !c.quantum) return NeitherFixture{mix, w, mq, mp, c};
    }
    fail_numerical("no neither-classical-nor-quantum fixture found for this seed");
}

}  // namespace tomokit
