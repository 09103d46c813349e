#include "tomokit/spintomo.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "tomokit/error.hpp"
#include "tomokit/report.hpp"

namespace tomokit {

namespace {

double xlogx(double p) { return p > 1e-300 ? p * std::log(p) : 0.0; }

void check_unitary(const UnitaryMatrix& u, int dim) {
    if (u.rows() != dim || u.cols() != dim)
        fail_input(fmt::format("dimension mismatch: unitary is {}x{}, state has dimension {}", u.rows(), u.cols(), dim));
}

int product(const std::vector<int>& dims) {
    int n = 1;
    for (int d : dims) {
        if (d < 1) fail_input("subsystem dimensions must be positive");
        n *= d;
    }
    return n;
}

}  // namespace

void validate(const DensityMatrixSpin& rho, double tol) {
    const CMatrix& r = rho.entries;
    if (r.rows() < 1 || r.rows() != r.cols()) fail_input("density matrix must be square and nonempty");
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > tol) fail_validation("density matrix is not Hermitian");
    if (std::abs(r.trace() - cplx(1.0)) > tol) fail_validation(fmt::format("trace is {:.10g}", r.trace().real()));
    const double lo = Eigen::SelfAdjointEigenSolver<CMatrix>(r, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (lo < -tol) fail_validation(fmt::format("negative eigenvalue {:.10g}", lo));
}

DensityMatrixSpin spin_state(CMatrix entries) {
    DensityMatrixSpin rho{std::move(entries)};
    validate(rho);
    return rho;
}

DensityMatrixSpin pure_spin_state(const CVector& psi) {
    const double n = psi.norm();
    if (psi.size() < 1 || !(n > 0.0)) fail_input("state vector must be nonzero");
    const CVector v = psi / n;
    return {v * v.adjoint()};
}

DensityMatrixSpin maximally_mixed(int dim) {
    if (dim < 1) fail_input("dimension must be positive");
    return {CMatrix::Identity(dim, dim) / static_cast<double>(dim)};
}

DensityMatrixSpin bell_state() {
    CVector v = CVector::Zero(4);
    v[0] = v[3] = 1.0;
    return pure_spin_state(v);
}

DensityMatrixSpin ghz_state() {
    CVector v = CVector::Zero(8);
    v[0] = v[7] = 1.0;
    return pure_spin_state(v);
}

DensityMatrixSpin haar_pure_state(int dim, Rng& rng) {
    return pure_spin_state(haar_unitary(dim, rng).col(0));
}

DensityMatrixSpin haar_mixed_state(int dim, Rng& rng) {
    const DensityMatrixSpin big = haar_pure_state(dim * dim, rng);
    DensityMatrixSpin r = partial_trace(big, {dim, dim}, {0});
    r.entries = 0.5 * (r.entries + r.entries.adjoint()).eval();
    r.entries /= r.entries.trace().real();
    return r;
}

DensityMatrixSpin tensor(const DensityMatrixSpin& a, const DensityMatrixSpin& b) {
    return {Eigen::kroneckerProduct(a.entries, b.entries).eval()};
}

DensityMatrixSpin partial_trace(const DensityMatrixSpin& rho, const std::vector<int>& dims, const std::vector<int>& keep) {
    const int n = product(dims);
    if (rho.dim() != n) fail_input(fmt::format("dimension mismatch: state has dimension {}, subsystems give {}", rho.dim(), n));
    const int s = static_cast<int>(dims.size());
    std::vector<bool> kept(s, false);
    for (int k : keep) {
        if (k < 0 || k >= s) fail_input("subsystem index out of range");
        kept[k] = true;
    }
    int nk = 1;
    for (int a = 0; a < s; ++a)
        if (kept[a]) nk *= dims[a];
    // split a full index into (kept index, traced index)
    std::vector<int> kidx(n), tidx(n);
    for (int i = 0; i < n; ++i) {
        int rem = i, stride = n, ki = 0, ti = 0;
        for (int a = 0; a < s; ++a) {
            stride /= dims[a];
            const int d = rem / stride;
            rem %= stride;
            if (kept[a]) ki = ki * dims[a] + d;
            else ti = ti * dims[a] + d;
        }
        kidx[i] = ki;
        tidx[i] = ti;
    }
    CMatrix out = CMatrix::Zero(nk, nk);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += rho.entries(i, j);
    return {out};
}

RVector marginal(const RVector& w, const std::vector<int>& dims, const std::vector<int>& keep) {
    const int n = product(dims);
    if (w.size() != n) fail_input("dimension mismatch: distribution and subsystems");
    const int s = static_cast<int>(dims.size());
    std::vector<bool> kept(s, false);
    for (int k : keep) kept.at(k) = true;
    int nk = 1;
    for (int a = 0; a < s; ++a)
        if (kept[a]) nk *= dims[a];
    RVector out = RVector::Zero(nk);
    for (int i = 0; i < n; ++i) {
        int rem = i, stride = n, ki = 0;
        for (int a = 0; a < s; ++a) {
            stride /= dims[a];
            const int d = rem / stride;
            rem %= stride;
            if (kept[a]) ki = ki * dims[a] + d;
        }
        out[ki] += w[i];
    }
    return out;
}

UnitaryMatrix eigenbasis(const DensityMatrixSpin& rho) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.entries);
    if (es.info() != Eigen::Success) fail_numerical("eigensolver failed");
    const int n = rho.dim();
    UnitaryMatrix u(n, n);
    for (int k = 0; k < n; ++k) {
        CVector v = es.eigenvectors().col(n - 1 - k);
        for (int i = 0; i < n; ++i)
            if (std::abs(v[i]) > 1e-12) {
                v *= std::conj(v[i]) / std::abs(v[i]);
                break;
            }
        u.col(k) = v;
    }
    return u;
}

UnitaryMatrix diagonalizing_unitary(const DensityMatrixSpin& rho) { return eigenbasis(rho).adjoint(); }

RVector spin_eigenvalues(const DensityMatrixSpin& rho) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.entries, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail_numerical("eigensolver failed");
    return es.eigenvalues().reverse();
}

SpinTomogram spin_tomogram(const DensityMatrixSpin& rho, const UnitaryMatrix& u) {
    check_unitary(u, rho.dim());
    const CMatrix r = u * rho.entries * u.adjoint();
    return {r.diagonal().real(), u};
}

RVector spin_tomogram_from_eigenbasis(const DensityMatrixSpin& rho, const UnitaryMatrix& u) {
    check_unitary(u, rho.dim());
    const RMatrix k = (u * eigenbasis(rho)).cwiseAbs2();
    return k * spin_eigenvalues(rho);
}

CMatrix qft_matrix(int dim) {
    if (dim < 2) fail_input(fmt::format("QFT dimension must be at least 2, got {}", dim));
    CMatrix f(dim, dim);
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            f(j, k) = std::polar(s, 2.0 * pi * static_cast<double>((j * k) % dim) / dim);
    return f;
}

double shannon_entropy(const RVector& w) {
    double h = 0.0;
    for (double p : w) h -= xlogx(p);
    return h;
}

double renyi_entropy(const RVector& w, double q) {
    if (!(q > 0.0) || q == 1.0) fail_input(fmt::format("invalid Renyi order {:.10g}", q));
    double s = 0.0;
    for (double p : w)
        if (p > 0.0) s += std::pow(p, q);
    return std::log(s) / (1.0 - q);
}

double relative_q_entropy(const RVector& w1, const RVector& w2, double q) {
    if (w1.size() != w2.size()) fail_input("dimension mismatch: tomograms");
    if (!(q > 0.0)) fail_input(fmt::format("invalid deformation parameter {:.10g}", q));
    double acc = 0.0;
    for (Eigen::Index m = 0; m < w1.size(); ++m) {
        if (w1[m] <= 0.0) continue;
        if (w2[m] <= 0.0) fail_input(fmt::format("support violation at index {}", m));
        const double x = w2[m] / w1[m];
        const double lnq = q == 1.0 ? std::log(x) : (std::pow(x, 1.0 - q) - 1.0) / (1.0 - q);
        acc -= w1[m] * lnq;
    }
    return acc;
}

double von_neumann_entropy(const DensityMatrixSpin& rho) { return shannon_entropy(spin_eigenvalues(rho).cwiseMax(0.0)); }

double quantum_renyi_entropy(const DensityMatrixSpin& rho, double q) {
    return renyi_entropy(spin_eigenvalues(rho).cwiseMax(0.0), q);
}

MinimizationResult min_over_unitaries(const DensityMatrixSpin& rho, EntropyMode mode, int samples, std::uint64_t seed) {
    if (samples < 1) fail_input("samples must be at least 1");
    const auto h = [&](const RVector& w) {
        return mode.kind == EntropyMode::Kind::shannon ? shannon_entropy(w) : renyi_entropy(w, mode.q);
    };
    MinimizationResult r;
    r.min_value = mode.kind == EntropyMode::Kind::shannon ? von_neumann_entropy(rho) : quantum_renyi_entropy(rho, mode.q);
    r.argmin = diagonalizing_unitary(rho);
    r.attained = h(spin_tomogram(rho, r.argmin).probabilities);
    r.samples = samples;
    r.sampled_min = 1e300;
    for (int i = 0; i < samples; ++i) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(i));
        const double v = h(spin_tomogram(rho, haar_unitary(rho.dim(), rng)).probabilities);
        r.sampled_min = std::min(r.sampled_min, v);
        if (v < r.min_value - 1e-12)
            fail_validation(fmt::format("sample {} gives {:.10g} below the minimum {:.10g}", i, v, r.min_value));
    }
    return r;
}

MeasurementBounds measurement_bounds(const ObservablePair& pair, const CVector& psi) {
    const int n = static_cast<int>(psi.size());
    check_unitary(pair.basis_a, n);
    check_unitary(pair.basis_b, n);
    if (std::abs(psi.norm() - 1.0) > 1e-10) fail_input("state vector is not normalized");
    const RVector p = (pair.basis_a.adjoint() * psi).cwiseAbs2();
    const RVector q = (pair.basis_b.adjoint() * psi).cwiseAbs2();
    MeasurementBounds r;
    r.h_p = shannon_entropy(p);
    r.h_q = shannon_entropy(q);
    r.overlap = (pair.basis_a.adjoint() * pair.basis_b).cwiseAbs().maxCoeff();
    r.deutsch = r.h_p + r.h_q + 2.0 * std::log((1.0 + r.overlap) / 2.0);
    r.maassen_uffink = r.h_p + r.h_q + 2.0 * std::log(r.overlap);
    r.unbiased = std::abs(r.overlap - 1.0 / std::sqrt(static_cast<double>(n))) <= 1e-12;
    r.mub = r.h_p + r.h_q - std::log(static_cast<double>(n));
    return r;
}

RVector qft_of_sqrt(const RVector& w) {
    const CMatrix f = qft_matrix(static_cast<int>(w.size()));
    return (f * w.cwiseMax(0.0).cwiseSqrt().cast<cplx>()).cwiseAbs2();
}

double QftInequalityReport::min_residual() const {
    return std::min({renyi_sqrt, renyi_rotated, shannon_rotated, shannon_sqrt, von_neumann});
}

QftInequalityReport qft_inequality_check(const DensityMatrixSpin& rho, const UnitaryMatrix& u, double alpha,
                                         double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0) || std::abs(1.0 / alpha + 1.0 / beta - 2.0) > 1e-12)
        fail_input(fmt::format("orders must satisfy 1/alpha + 1/beta = 2, got ({:.10g}, {:.10g})", alpha, beta));
    const int n = rho.dim();
    const double ln_n = std::log(static_cast<double>(n));
    const CMatrix f = qft_matrix(n);
    const RVector w = spin_tomogram(rho, u).probabilities;
    const RVector wf = qft_of_sqrt(w);
    const RVector wfu = spin_tomogram(rho, f * u).probabilities;
    // alpha = beta = 1 is the Shannon limit
    const auto r = [](const RVector& p, double a) { return a == 1.0 ? shannon_entropy(p) : renyi_entropy(p, a); };
    QftInequalityReport out;
    out.renyi_sqrt = r(w, alpha) + r(wf, beta) - ln_n;
    out.renyi_rotated = r(w, alpha) + r(wfu, beta) - ln_n;
    out.shannon_rotated = shannon_entropy(w) + shannon_entropy(wfu) - ln_n;
    out.shannon_sqrt = shannon_entropy(w) + shannon_entropy(wf) - ln_n;
    const UnitaryMatrix u0 = diagonalizing_unitary(rho);
    out.von_neumann = von_neumann_entropy(rho) + shannon_entropy(spin_tomogram(rho, f * u0).probabilities) - ln_n;
    return out;
}

SubadditivityReport bipartite_subadditivity(const DensityMatrixSpin& rho, int dim1, int dim2, const UnitaryMatrix& u) {
    const std::vector<int> dims{dim1, dim2};
    if (rho.dim() != product(dims))
        fail_input(fmt::format("dimension mismatch: state has dimension {}, subsystems give {}", rho.dim(), dim1 * dim2));
    const RVector w = spin_tomogram(rho, u).probabilities;
    SubadditivityReport r;
    r.h12 = shannon_entropy(w);
    r.h1 = shannon_entropy(marginal(w, dims, {0}));
    r.h2 = shannon_entropy(marginal(w, dims, {1}));
    r.residual = r.h1 + r.h2 - r.h12;
    r.von_neumann = von_neumann_entropy(partial_trace(rho, dims, {0})) + von_neumann_entropy(partial_trace(rho, dims, {1})) -
                    von_neumann_entropy(rho);
    return r;
}

StrongSubadditivityReport tripartite_ssa(const DensityMatrixSpin& rho, const std::vector<int>& dims,
                                         const UnitaryMatrix& u) {
    if (dims.size() != 3) fail_input("strong subadditivity needs three subsystems");
    if (rho.dim() != product(dims))
        fail_input(fmt::format("dimension mismatch: state has dimension {}, subsystems give {}", rho.dim(), product(dims)));
    if (rho.dim() > 16) fail_input("tripartite dimension above 16");
    const RVector w = spin_tomogram(rho, u).probabilities;
    StrongSubadditivityReport r;
    r.h123 = shannon_entropy(w);
    r.h12 = shannon_entropy(marginal(w, dims, {0, 1}));
    r.h23 = shannon_entropy(marginal(w, dims, {1, 2}));
    r.h2 = shannon_entropy(marginal(w, dims, {1}));
    r.residual = r.h12 + r.h23 - r.h123 - r.h2;
    r.von_neumann = von_neumann_entropy(partial_trace(rho, dims, {0, 1})) +
                    von_neumann_entropy(partial_trace(rho, dims, {1, 2})) - von_neumann_entropy(rho) -
                    von_neumann_entropy(partial_trace(rho, dims, {1}));
    return r;
}

GroupAverage group_average_entropy(const DensityMatrixSpin& rho, AverageMode mode, int samples, std::uint64_t seed) {
    if (samples < 1000) fail_input(fmt::format("group averages need at least 1000 samples, got {}", samples));
    if (mode.kind == AverageMode::Kind::renyi_pair &&
        (!(mode.alpha > 0.0) || !(mode.beta > 0.0) || std::abs(1.0 / mode.alpha + 1.0 / mode.beta - 2.0) > 1e-12))
        fail_input("orders must satisfy 1/alpha + 1/beta = 2");
    const int n = rho.dim();
    const double ln_n = std::log(static_cast<double>(n));
    double s = 0.0, s2 = 0.0, c = 0.0, c2 = 0.0;
    for (int i = 0; i < samples; ++i) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(i));
        const UnitaryMatrix u = haar_unitary(n, rng);
        const RVector w = spin_tomogram(rho, u).probabilities;
        const double v = mode.kind == AverageMode::Kind::shannon
                             ? shannon_entropy(w)
                             : renyi_entropy(w, mode.alpha) + renyi_entropy(w, mode.beta);
        const double col = shannon_entropy(u.col(0).cwiseAbs2());
        s += v;
        s2 += v * v;
        c += col;
        c2 += col * col;
    }
    const double m = samples;
    GroupAverage g;
    g.samples = samples;
    g.mean = s / m;
    g.std_error = std::sqrt(std::max(0.0, s2 / m - g.mean * g.mean) / (m - 1.0));
    g.bound_residual = g.mean - (mode.kind == AverageMode::Kind::shannon ? 0.5 * ln_n : ln_n);
    g.column_mean = c / m;
    g.column_std_error = std::sqrt(std::max(0.0, c2 / m - g.column_mean * g.column_mean) / (m - 1.0));
    g.column_residual = g.column_mean - 0.5 * ln_n;
    return g;
}

std::string format_report(const MeasurementBounds& r) {
    std::string s = fmt::format("H_p={} H_q={} c={} deutsch={} maassen_uffink={}", format_number(r.h_p),
                                format_number(r.h_q), format_number(r.overlap), format_number(r.deutsch),
                                format_number(r.maassen_uffink));
    if (r.unbiased) s += fmt::format(" mub={}", format_number(r.mub));
    return s;
}

std::string format_report(const QftInequalityReport& r) {
    return fmt::format("renyi_sqrt={} renyi_rotated={} shannon_rotated={} shannon_sqrt={} von_neumann={}",
                       format_number(r.renyi_sqrt), format_number(r.renyi_rotated), format_number(r.shannon_rotated),
                       format_number(r.shannon_sqrt), format_number(r.von_neumann));
}

std::string format_report(const SubadditivityReport& r) {
    return fmt::format("H1={} H2={} H12={} residual={} von_neumann={}", format_number(r.h1), format_number(r.h2),
                       format_number(r.h12), format_number(r.residual), format_number(r.von_neumann));
}

std::string format_report(const StrongSubadditivityReport& r) {
    return fmt::format("H12={} H23={} H123={} H2={} residual={} von_neumann={}", format_number(r.h12),
                       format_number(r.h23), format_number(r.h123), format_number(r.h2), format_number(r.residual),
                       format_number(r.von_neumann));
}

std::string format_report(const GroupAverage& r) {
    return fmt::format("samples={} mean={} stderr={} bound_residual={} column_mean={} column_stderr={} column_residual={}",
                       r.samples, format_number(r.mean), format_number(r.std_error), format_number(r.bound_residual),
                       format_number(r.column_mean), format_number(r.column_std_error),
                       format_number(r.column_residual));
}

}  // namespace tomokit
