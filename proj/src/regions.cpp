#include "paramex/regions.hpp"

namespace paramex {

namespace {

Box interval_vector_w(const RealMatrix& B0, const RealVector& v) {
    Box w(B0.rows);
    for (int j = 0; j < B0.rows; ++j) {
        Interval acc(v[j]);
        for (int k = 0; k < B0.cols; ++k) acc = acc - Interval(B0.at(j, k)) * Interval(v[k]);
        w[j] = acc;
    }
    return w;
}

}  // namespace

FixedBounds fixed_bounds(const System& sys, const RealVector& z, const RealVector& p,
                         const RealMatrix& C, const Box& xbox) {
    detail::require(int(z.size()) == sys.n && int(p.size()) == sys.p,
                    "fixed_bounds: center dimension mismatch");
    detail::require(C.rows == sys.n && C.cols == sys.n, "fixed_bounds: preconditioner shape");
    if (!contains(xbox, z)) throw RegionDomainError("center z lies outside the reference box");
    if (!contains(sys.X, xbox)) throw RegionDomainError("reference box leaves the domain X");

    IntervalMatrix Ci = to_intervals(C);
    Box zb(z), pb(p);

    FixedBounds fb;
    Box hz = eval_system_point(sys, z, p);
    fb.b_bar = absv(Ci * hz);

    SlopeEval se = slope_first(sys, zb, pb, zb, pb);
    IntervalMatrix jac_x = state_columns(se.slope, sys.n);
    fb.B0 = absv(Ci * jac_x - IntervalMatrix::identity(sys.n));

    SecondSlopeEval sec = slope_second(sys, zb, pb, zb, pb, xbox, pb);
    IntervalTensor3 t_xx = state_slab(sec.second, sys.n);
    fb.B_bar = absv(mat_tensor(Ci, t_xx));
    return fb;
}

LambdaPair lambda_pair(const FixedBounds& bounds, const RealVector& v) {
    int n = int(bounds.b_bar.size());
    detail::require(int(v.size()) == n, "lambda_pair: scaling vector dimension mismatch");
    for (double vj : v)
        if (!(vj > 0.0)) throw DomainError("scaling vector v must be positive");

    LambdaPair lp;
    lp.w = interval_vector_w(bounds.B0, v);
    lp.a = quad_form(v, to_intervals(bounds.B_bar), v);
    lp.D = Box(n);
    lp.lambda_e_j = Box(n);
    lp.lambda_i_j = Box(n);

    for (int j = 0; j < n; ++j) {
        Interval bj(bounds.b_bar[j]);
        lp.D[j] = pow_int(lp.w[j], 2) - Interval(4.0) * lp.a[j] * bj;
        if (!(lp.w[j].lo() > 0.0))
            throw NonpositiveDiscriminantError("contraction margin w_j not verified positive", j);
        if (!(lp.D[j].lo() > 0.0))
            throw NonpositiveDiscriminantError("discriminant D_j not verified positive", j);

        Interval den = lp.w[j] + sqrt(lp.D[j]);
        // stable small root: b/(a lambda_e) = 2 b / (w + sqrt(D)); exact for a = 0 too
        lp.lambda_i_j[j] = Interval(2.0) * bj / den;
        if (lp.a[j].hi() == 0.0) {
            lp.lambda_e_j[j] = Interval(rnd::kInf, rnd::kInf);
        } else if (lp.a[j].lo() > 0.0) {
            lp.lambda_e_j[j] = den / (Interval(2.0) * lp.a[j]);
        } else {
            double lo = rnd::div_down(den.lo(), rnd::mul_up(2.0, lp.a[j].hi()));
            lp.lambda_e_j[j] = Interval(lo, rnd::kInf);
        }
    }

    lp.lambda_e = lp.lambda_e_j[0];
    lp.lambda_i = lp.lambda_i_j[0];
    for (int j = 1; j < n; ++j) {
        lp.lambda_e = Interval(std::min(lp.lambda_e.lo(), lp.lambda_e_j[j].lo()),
                               std::min(lp.lambda_e.hi(), lp.lambda_e_j[j].hi()));
        lp.lambda_i = Interval(std::max(lp.lambda_i.lo(), lp.lambda_i_j[j].lo()),
                               std::max(lp.lambda_i.hi(), lp.lambda_i_j[j].hi()));
    }
    return lp;
}

FixedCertificate fixed_regions(const System& sys, const RealVector& z, const RealVector& p,
                               const std::optional<RealMatrix>& C, const RealVector& v,
                               const Box& xbox) {
    FixedCertificate fc;
    fc.z = z;
    fc.p = p;
    fc.v = v;
    fc.xbox = xbox;
    if (C) {
        fc.C = *C;
    } else {
        Box zb(z), pb(p);
        SlopeEval se = slope_first(sys, zb, pb, zb, pb);
        IntervalMatrix jac_x = state_columns(se.slope, sys.n);
        RealMatrix mid(sys.n, sys.n);
        for (int i = 0; i < sys.n; ++i)
            for (int j = 0; j < sys.n; ++j) mid.at(i, j) = midpoint(jac_x.at(i, j));
        fc.C = invert(mid);
    }
    fc.bounds = fixed_bounds(sys, z, p, fc.C, xbox);
    fc.lam = lambda_pair(fc.bounds, v);

    if (!(fc.lam.lambda_e.lo() > fc.lam.lambda_i.hi()))
        throw LambdaOrderError("exclusion radius not verified above inclusion radius");

    double li = fc.lam.lambda_i.hi();
    double le = fc.lam.lambda_e.lo();
    fc.R_i = Box(sys.n);
    fc.R_e = Box(sys.n);
    for (int j = 0; j < sys.n; ++j) {
        Interval ri = Interval(z[j]) + Interval(-li, li) * Interval(v[j]);
        fc.R_i[j] = ri;
        Interval lo_side = Interval(z[j]) - Interval(le) * Interval(v[j]);
        Interval hi_side = Interval(z[j]) + Interval(le) * Interval(v[j]);
        fc.R_e[j] = intersect(Interval(lo_side.hi(), hi_side.lo()), xbox[j]);
    }
    if (!contains(xbox, fc.R_i))
        throw RegionDomainError("inclusion region leaves the reference box");
    return fc;
}

}  // namespace paramex
