#pragma once

// Fixed-parameter inclusion/exclusion regions around an approximate zero z of
// H(., p): componentwise bounds, the scaled radius pair (lambda_i, lambda_e)
// and the boxes R_i = [z - lambda_i v, z + lambda_i v],
// R_e = [z - lambda_e v, z + lambda_e v] (intersected with the search box).
//
// All derived quantities are carried as intervals computed from the frozen
// double bounds; the rigorous endpoint per use is lambda_e.lo / lambda_i.hi.

#include <optional>

#include "paramex/verify.hpp"

namespace paramex {

struct FixedBounds {
    RealVector b_bar;   // >= |C H(z,p)| componentwise
    RealMatrix B0;      // >= |C H'_x(z,p) - identity|
    RealTensor3 B_bar;  // >= |C . second-order x-slope of H| over xbox
};

FixedBounds fixed_bounds(const System& sys, const RealVector& z, const RealVector& p,
                         const RealMatrix& C, const Box& xbox);

struct LambdaPair {
    Box w;  // (identity - B0) v
    Box a;  // v' B_bar v
    Box D;  // w^2 - 4 a b_bar, componentwise
    Box lambda_e_j;
    Box lambda_i_j;
    Interval lambda_e;  // min_j lambda_e_j
    Interval lambda_i;  // max_j lambda_i_j
};

// Throws NonpositiveDiscriminantError when some D_j cannot be verified
// positive (or the contraction margin w_j is not verified positive).
LambdaPair lambda_pair(const FixedBounds& bounds, const RealVector& v);

struct FixedCertificate {
    RealVector z;
    RealVector p;
    RealMatrix C;
    RealVector v;
    Box xbox;
    FixedBounds bounds;
    LambdaPair lam;
    Box R_i;  // inclusion region, outward rounded
    Box R_e;  // exclusion region, inward rounded and clipped to xbox
};

// Builds the full fixed-parameter certificate.  C defaults to the midpoint
// inverse of H'_x(z,p).  Throws LambdaOrderError when lambda_e <= lambda_i and
// RegionDomainError when the inclusion region leaves xbox.
FixedCertificate fixed_regions(const System& sys, const RealVector& z, const RealVector& p,
                               const std::optional<RealMatrix>& C, const RealVector& v,
                               const Box& xbox);

}  // namespace paramex
