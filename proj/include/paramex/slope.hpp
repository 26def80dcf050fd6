#pragma once

// Recursive slope arithmetic over expression DAGs.
//
// A first-order slope matrix S satisfies F(y) - F(c) = S (y - c) for all y in
// the evaluation box; a second-order slope tensor T satisfies
// S[c1,y] = S[c1,c2] + T (y - c2) componentwise.  Both centers may be boxes.
// Columns are ordered (x_1..x_n, s_1..s_p).

#include "paramex/expr.hpp"
#include "paramex/linalg.hpp"

namespace paramex {

struct SlopeEval {
    Box value_center;      // F(center)
    Box value_box;         // F over the box
    IntervalMatrix slope;  // n x (n+p)
};

struct ScalarSlope {
    Interval value_center;
    Interval value_box;
    std::vector<Interval> row;  // length n+p
};

struct SecondSlopeEval {
    Box value_center1;
    Box value_center2;
    Box value_box;
    IntervalMatrix slope_c1_c2;   // S[c1,c2], n x m
    IntervalMatrix slope_c2_box;  // S[c2,box], n x m
    IntervalTensor3 second;       // n x m x m
};

SlopeEval slope_first(const System& sys, const Box& x_center, const Box& s_center,
                      const Box& x_box, const Box& s_box);

ScalarSlope slope_first_expr(const ExprPtr& e, int n, int p, const Box& x_center,
                             const Box& s_center, const Box& x_box, const Box& s_box);

SecondSlopeEval slope_second(const System& sys, const Box& x_c1, const Box& s_c1,
                             const Box& x_c2, const Box& s_c2, const Box& x_box,
                             const Box& s_box);

// Slope of the state-Jacobian map y -> H'_x(y): tensor n x n x (n+p) with
// H'_x(y) contained in H'_x(center) + result * (y - center) over the box.
IntervalTensor3 jacobian_slope(const System& sys, const Box& x_center, const Box& s_center,
                               const Box& x_box, const Box& s_box);

// Slope of g(s) = (xhat(s), s) for an affine approximation xhat with matrix
// theta: the top block is theta, the bottom p x p block is exactly the identity.
struct GSlope {
    IntervalMatrix theta;  // n x p
    IntervalMatrix full;   // (n+p) x p
};

GSlope make_gslope(const RealMatrix& theta);

// S[g(p), g(s)]H * S[p,s]g, a valid slope for H composed with g.
IntervalMatrix chain_slope(const IntervalMatrix& outer, const GSlope& g);

// Column block 0..n-1 (the state part) of a slope matrix.
IntervalMatrix state_columns(const IntervalMatrix& slope, int n);
// Sub-tensor with both trailing indices restricted to the state part.
IntervalTensor3 state_slab(const IntervalTensor3& t, int n);

}  // namespace paramex
