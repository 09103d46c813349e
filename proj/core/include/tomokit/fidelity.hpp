#pragma once

#include "tomokit/cvtomo.hpp"
#include "tomokit/numkernel.hpp"

namespace tomokit {

// Phase-averaged joint distribution of two quadratures, P(x, y) = (1/2pi) int w1(x,t) w2(y,t) dt.
struct JointQuadratureDistribution {
    Grid1D xgrid;
    Grid1D ygrid;
    RMatrix values;  // (ix, iy)
};

// Distribution of b = (x - y)/sqrt(2). The b grid has spacing dx/sqrt(2) so every node is an
// exact diagonal of the joint grid.
struct RotatedMarginal {
    Grid1D bgrid;
    RVector values;
    cplx characteristic(double lambda) const;
    CVector characteristic(const RVector& lambda) const;
};

struct FidelityResult {
    double fidelity = 0.0;
    double im_residual = 0.0;
    bool bounds_ok = false;
};

JointQuadratureDistribution joint_distribution(const OpticalTomogram& w1, const OpticalTomogram& w2);
RotatedMarginal rotated_marginal(const JointQuadratureDistribution& p12);

// F = (1/2) int_0^lambda_max lambda Re xi(lambda) dlambda. Throws when |lambda xi| has not
// decayed below 1e-8 at lambda_max, and (if enforce_bounds) when F leaves [0, 1] by more than 1e-3.
FidelityResult fidelity_from_tomograms(const OpticalTomogram& w1, const OpticalTomogram& w2,
                                       double lambda_max = 40.0, bool enforce_bounds = true);

std::string format_fidelity(const FidelityResult& r);

}  // namespace tomokit
