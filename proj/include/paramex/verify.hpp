#pragma once

// Approximate-solution refinement and the classical Krawczyk existence /
// uniqueness test.  Newton iteration runs in plain binary64; rigor enters
// only through the interval certificates built on top of it.

#include "paramex/slope.hpp"

namespace paramex {

struct LuFactors {
    RealMatrix lu;
    std::vector<int> perm;
    bool singular = false;
};

LuFactors lu_factor(RealMatrix a);
RealVector lu_solve(const LuFactors& f, RealVector b);

// Inverse by LU with partial pivoting; throws SingularMatrixError when the
// 1-norm reciprocal condition estimate falls below rcond_min.
RealMatrix invert(const RealMatrix& a, double rcond_min = 1e-12);
double rcond_estimate(const RealMatrix& a, const RealMatrix& a_inv);

struct NewtonResult {
    RealVector z;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

NewtonResult newton_refine(const System& sys, const RealVector& s, RealVector x0,
                           double tol = 1e-12, int max_iter = 50);

// K(zbox, xbox) = z - C H(z,s) - (C S[zbox,xbox]H_x - I)(xbox - z), z = mid(zbox).
Box krawczyk(const System& sys, const RealVector& s, const Box& zbox, const Box& xbox,
             const RealMatrix& C);

enum class KahanOutcome { exists, exists_unique, inconclusive };

KahanOutcome kahan_test(const System& sys, const RealVector& s, const Box& zbox,
                        const Box& xbox, const RealMatrix& C);

const char* to_string(KahanOutcome o);

}  // namespace paramex
