#include "tomokit/fidelity.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tomokit/error.hpp"
#include "tomokit/report.hpp"

namespace tomokit {

namespace {

bool covers_full_circle(const Grid1D& g) {
    return std::abs(g.lower()) < 1e-12 && std::abs(g.upper() - 2.0 * pi) < 1e-12;
}

}  // namespace

JointQuadratureDistribution joint_distribution(const OpticalTomogram& w1, const OpticalTomogram& w2) {
    if (!w1.thetagrid.same_as(w2.thetagrid)) fail_input("grid mismatch: theta grids differ");
    if (!covers_full_circle(w1.thetagrid)) fail_input("grid mismatch: theta grid must cover [0, 2pi)");
    if (w1.values.rows() != w1.thetagrid.count() || w2.values.rows() != w2.thetagrid.count() ||
        w1.values.cols() != w1.xgrid.count() || w2.values.cols() != w2.xgrid.count())
        fail_input("grid mismatch: values do not match their grids");
    JointQuadratureDistribution p{w1.xgrid, w2.xgrid, RMatrix()};
    p.values.noalias() = w1.values.transpose() * w2.values;
    p.values *= w1.thetagrid.spacing() / (2.0 * pi);
    return p;
}

RotatedMarginal rotated_marginal(const JointQuadratureDistribution& p12) {
    if (std::abs(p12.xgrid.spacing() - p12.ygrid.spacing()) > 1e-12 * p12.xgrid.spacing())
        fail_input("grid mismatch: x and y spacings differ");
    const int nx = p12.xgrid.count(), ny = p12.ygrid.count();
    const double h = p12.xgrid.spacing();
    const double db = h / std::sqrt(2.0);
    // b at diagonal l = i - j, offset by the grid origins
    const double b0 = (p12.xgrid.point(0) - p12.ygrid.point(ny - 1)) / std::sqrt(2.0);
    const int nb = nx + ny - 1;
    RotatedMarginal m;
    m.bgrid = make_grid(b0 - 0.5 * db, b0 + (nb - 0.5) * db, nb);
    m.values = RVector::Zero(nb);
    // along a diagonal, consecutive nodes are sqrt(2) h apart in a = (x + y)/sqrt(2)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) m.values[i - j + ny - 1] += p12.values(i, j);
    m.values *= std::sqrt(2.0) * h;
    return m;
}

cplx RotatedMarginal::characteristic(double lambda) const {
    cplx acc = 0.0;
    for (int k = 0; k < bgrid.count(); ++k) acc += values[k] * std::polar(1.0, lambda * bgrid.point(k));
    return acc * bgrid.spacing();
}

CVector RotatedMarginal::characteristic(const RVector& lambda) const {
    const int nb = bgrid.count();
    CVector out(lambda.size());
    CVector ramp(nb);
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        exp_ramp(lambda[k], bgrid, ramp.data());
        out[k] = (ramp.array() * values.array().cast<cplx>()).sum() * bgrid.spacing();
    }
    return out;
}

FidelityResult fidelity_from_tomograms(const OpticalTomogram& w1, const OpticalTomogram& w2, double lambda_max,
                                       bool enforce_bounds) {
    if (!(lambda_max > 0.0)) fail_input("lambda_max must be positive");
    const RotatedMarginal m = rotated_marginal(joint_distribution(w1, w2));
    const double edge = lambda_max * std::abs(m.characteristic(lambda_max));
    if (edge >= 1e-8)
        fail_numerical(fmt::format("slow decay: |lambda xi(lambda)| = {:.10g} at lambda = {:.10g}", edge, lambda_max));
    // xi oscillates at most at the b extent; two panels per unit of lambda * b_max/8 keeps 16-point GL exact
    const double bmax = std::max(std::abs(m.bgrid.lower()), std::abs(m.bgrid.upper()));
    const int panels = std::max(8, static_cast<int>(std::ceil(lambda_max * bmax / 8.0)));
    const Quadrature q = composite_gauss_legendre(0.0, lambda_max, panels, 16);
    const CVector xi = m.characteristic(q.nodes);
    cplx acc = 0.0;
    for (Eigen::Index k = 0; k < xi.size(); ++k) acc += q.weights[k] * q.nodes[k] * xi[k];
    FidelityResult r;
    r.fidelity = 0.5 * acc.real();
    r.im_residual = 0.5 * std::abs(acc.imag());
    r.bounds_ok = r.fidelity >= -1e-3 && r.fidelity <= 1.0 + 1e-3;
    if (enforce_bounds && !r.bounds_ok)
        fail_validation(fmt::format("fidelity {:.10g} outside [0, 1]: corrupt input tomograms", r.fidelity));
    return r;
}

std::string format_fidelity(const FidelityResult& r) {
    return "F=" + format_number(r.fidelity) + " im_residual=" + format_number(r.im_residual) +
           " bounds_ok=" + format_bool(r.bounds_ok);
}

}  // namespace tomokit
