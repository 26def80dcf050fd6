#include "paramex/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace paramex {

namespace {

Interval abs_interval(const Interval& a) { return Interval(mig(a), mag(a)); }

Box param_box(const RealVector& p, const RealVector& y, double nu) {
    Box r(int(p.size()));
    for (size_t j = 0; j < p.size(); ++j)
        r[int(j)] = Interval(p[j]) + Interval(-nu, nu) * Interval(y[j]);
    return r;
}

// Interval matrix of entrywise upper bounds |M| |N| for nonnegative real
// factors; the .hi entries are the rigorous bounds.
IntervalMatrix mag_product(const RealMatrix& m, const RealMatrix& n) {
    return to_intervals(m) * to_intervals(n);
}

struct StableRoots {
    Interval small_root;  // via c / (den) with den = b_half + sqrt(rad)
    Interval large_root;  // via den / a, +inf when a vanishes
};

// Roots of a t^2 - 2 b_half t + c = 0 with a, c >= 0, evaluated in the
// cancellation-free form: large = (b_half + sqrt(rad))/a, small = c/(a*large)
// = c/(b_half + sqrt(rad)).  Degenerate a = 0 yields the linear limit.
StableRoots stable_quadratic_roots(const Interval& a, const Interval& b_half, const Interval& c,
                                   const Interval& rad) {
    Interval sq = sqrt(Interval(std::max(0.0, rad.lo()), rad.hi()));
    Interval den = b_half + sq;
    StableRoots r{Interval(0.0), Interval(rnd::kInf, rnd::kInf)};
    if (den.lo() > 0.0) {
        r.small_root = c / den;
    } else if (den.hi() > 0.0) {
        r.small_root = Interval(rnd::div_down(c.lo(), den.hi()), rnd::kInf);
    } else {
        r.small_root = Interval(rnd::kInf, rnd::kInf);  // no positive crossing
    }
    if (a.hi() == 0.0) {
        r.large_root = Interval(rnd::kInf, rnd::kInf);
    } else if (a.lo() > 0.0) {
        r.large_root = den / a;
    } else {
        r.large_root = Interval(rnd::div_down(den.lo(), a.hi()), rnd::kInf);
    }
    return r;
}

}  // namespace

const char* to_string(ApproxFn::Kind k) {
    switch (k) {
        case ApproxFn::Kind::tangent: return "tangent";
        case ApproxFn::Kind::secant: return "secant";
        case ApproxFn::Kind::custom_linear: return "linear";
    }
    return "linear";
}

Box ApproxFn::eval_box(const Box& sbox) const {
    detail::require(sbox.dim() == theta.cols, "approximation: parameter dimension mismatch");
    Box ds = sbox - Box(p);
    Box r(int(z.size()));
    for (size_t i = 0; i < z.size(); ++i) {
        Interval acc(z[i]);
        for (int j = 0; j < theta.cols; ++j) acc = acc + Interval(theta.at(int(i), j)) * ds[j];
        r[int(i)] = acc;
    }
    return r;
}

Box ApproxFn::eval_enclosure(const RealVector& s) const { return eval_box(Box(s)); }

RealVector ApproxFn::eval_point(const RealVector& s) const {
    RealVector r = z;
    for (size_t i = 0; i < z.size(); ++i)
        for (int j = 0; j < theta.cols; ++j) r[i] += theta.at(int(i), j) * (s[j] - p[j]);
    return r;
}

ApproxFn make_approx(const System& sys, const RealVector& z, const RealVector& p,
                     ApproxFn::Kind kind, const std::optional<RealVector>& x1,
                     const std::optional<RealVector>& s1) {
    detail::require(int(z.size()) == sys.n && int(p.size()) == sys.p,
                    "make_approx: dimension mismatch");
    ApproxFn a;
    a.kind = kind;
    a.z = z;
    a.p = p;
    a.theta = RealMatrix(sys.n, sys.p);

    if (kind == ApproxFn::Kind::tangent) {
        Box zb(z), pb(p);
        SlopeEval se = slope_first(sys, zb, pb, zb, pb);
        RealMatrix hx(sys.n, sys.n), hs(sys.n, sys.p);
        for (int i = 0; i < sys.n; ++i) {
            for (int j = 0; j < sys.n; ++j) hx.at(i, j) = midpoint(se.slope.at(i, j));
            for (int j = 0; j < sys.p; ++j) hs.at(i, j) = midpoint(se.slope.at(i, sys.n + j));
        }
        LuFactors f = lu_factor(hx);
        if (f.singular) throw SingularMatrixError("tangent requires a regular state Jacobian");
        RealVector col(sys.n);
        for (int j = 0; j < sys.p; ++j) {
            for (int i = 0; i < sys.n; ++i) col[i] = -hs.at(i, j);
            RealVector t = lu_solve(f, col);
            for (int i = 0; i < sys.n; ++i) a.theta.at(i, j) = t[i];
        }
        return a;
    }
    if (kind == ApproxFn::Kind::secant) {
        if (sys.p != 1) throw ShapeError("secant approximation supports p = 1 only");
        if (!x1 || !s1 || int(x1->size()) != sys.n || s1->size() != 1)
            throw ShapeError("secant approximation requires a second point (x1, s1)");
        double ds = (*s1)[0] - p[0];
        if (ds == 0.0) throw DomainError("secant requires s1 distinct from p");
        for (int i = 0; i < sys.n; ++i) a.theta.at(i, 0) = ((*x1)[i] - z[i]) / ds;
        a.secant_x1 = x1;
        a.secant_s1 = s1;
        return a;
    }
    throw ShapeError("custom linear approximation requires an explicit matrix");
}

ApproxFn make_linear_approx(const RealVector& z, const RealVector& p, const RealMatrix& theta) {
    detail::require(theta.rows == int(z.size()) && theta.cols == int(p.size()),
                    "make_linear_approx: matrix shape mismatch");
    ApproxFn a;
    a.kind = ApproxFn::Kind::custom_linear;
    a.z = z;
    a.p = p;
    a.theta = theta;
    return a;
}

GSlope gslope(const ApproxFn& approx, const RealVector& p, const Box& sbox) {
    detail::require(int(p.size()) == approx.theta.cols && sbox.dim() == approx.theta.cols,
                    "gslope: parameter dimension mismatch");
    return make_gslope(approx.theta);
}

double cover_radius(const Box& sref, const RealVector& p, const RealVector& y) {
    double r = 0.0;
    for (int j = 0; j < sref.dim(); ++j) {
        double lo = rnd::sub_up(p[j], sref[j].lo());
        double hi = rnd::sub_up(sref[j].hi(), p[j]);
        r = std::max(r, rnd::div_up(std::max({lo, hi, 0.0}), y[j]));
    }
    return r;
}

ParamBounds param_bounds(const System& sys, const FixedCertificate& fc, const ApproxFn& approx,
                         const Box& sref, const Box& xref, const RealVector& y) {
    detail::require(int(y.size()) == sys.p, "param_bounds: scaling y dimension mismatch");
    for (double yj : y)
        if (!(yj > 0.0)) throw DomainError("scaling vector y must be positive");
    if (!contains(sref, fc.p))
        throw RegionDomainError("reference parameter box must contain p");

    ParamBounds pb;
    pb.y = y;
    pb.sref = sref;
    pb.xref = xref;

    Box xhat_ref = approx.eval_box(sref);
    if (!contains(xref, xhat_ref))
        throw CertificationError("approx_leaves_domain",
                                 "approximation range leaves the reference box");

    IntervalMatrix Ci = to_intervals(fc.C);
    GSlope gs = make_gslope(approx.theta);
    RealMatrix g_mag = absv(gs.full);
    Box zb(fc.z), pbx(fc.p);

    // first-order slope of H along g over sref
    SlopeEval se = slope_first(sys, zb, pbx, xhat_ref, sref);
    RealMatrix cs_mag = absv(Ci * se.slope);
    IntervalMatrix g0 = mag_product(cs_mag, g_mag);
    pb.G0_bar = RealMatrix(sys.n, sys.p);
    for (int i = 0; i < sys.n; ++i)
        for (int j = 0; j < sys.p; ++j) pb.G0_bar.at(i, j) = g0.at(i, j).hi();

    // slope of the state Jacobian along g
    IntervalTensor3 tj = jacobian_slope(sys, zb, pbx, xhat_ref, sref);
    RealTensor3 ctj_mag = absv(mat_tensor(Ci, tj));
    IntervalTensor3 a_t = tensor_mat(to_intervals(ctj_mag), to_intervals(g_mag));
    pb.A_bar = RealTensor3(sys.n, sys.n, sys.p);
    for (int i = 0; i < sys.n; ++i)
        for (int j = 0; j < sys.n; ++j)
            for (int k = 0; k < sys.p; ++k) pb.A_bar.at(i, j, k) = a_t.at(i, j, k).hi();

    // second-order bound over (xref, sref) with interval centers g(sref)
    SecondSlopeEval sec = slope_second(sys, xhat_ref, sref, xhat_ref, sref, xref, sref);
    IntervalTensor3 t_xx = state_slab(sec.second, sys.n);
    pb.B2_bar = absv(mat_tensor(Ci, t_xx));

    pb.a_bar = quad_form(fc.v, to_intervals(pb.B2_bar), fc.v);
    pb.G0y = to_intervals(pb.G0_bar) * Box(y);
    IntervalMatrix ay = tensor_vec(to_intervals(pb.A_bar), Box(y));
    pb.alpha = ay * Box(fc.v);

    pb.beta = Box(sys.n);
    pb.gamma = Box(sys.n);
    for (int j = 0; j < sys.n; ++j) {
        Interval bj(fc.bounds.b_bar[j]);
        pb.beta[j] = pb.alpha[j] * fc.lam.w[j] + Interval(2.0) * pb.a_bar[j] * pb.G0y[j];
        pb.gamma[j] = pow_int(fc.lam.w[j], 2) - Interval(4.0) * pb.a_bar[j] * bj;
    }
    return pb;
}

MuRoots mu_roots(const ParamBounds& bounds) {
    int n = bounds.alpha.dim();
    MuRoots r;
    r.mu_upper_j = Box(n);
    r.mu_lower_j = Box(n);
    r.mu_bar = rnd::kInf;
    for (int j = 0; j < n; ++j) {
        Interval alpha2 = pow_int(bounds.alpha[j], 2);
        Interval rad = pow_int(bounds.beta[j], 2) - alpha2 * bounds.gamma[j];
        if (rad.hi() < 0.0)
            throw NonpositiveDiscriminantError(
                "inner discriminant beta^2 - alpha^2 gamma is negative", j);
        StableRoots roots = stable_quadratic_roots(alpha2, bounds.beta[j], bounds.gamma[j], rad);
        r.mu_upper_j[j] = roots.large_root;
        if (bounds.gamma[j].lo() <= 0.0) {
            // D(0) <= 0 possible: the feasibility limit collapses to zero
            r.mu_lower_j[j] = Interval(0.0);
        } else {
            // beta <= 0 with gamma > 0 leaves D positive for all nu >= 0; the
            // stable form returns [inf,inf] for that case by itself
            r.mu_lower_j[j] = roots.small_root;
        }
        double cand = r.mu_lower_j[j].lo();
        if (cand < r.mu_bar) {
            r.mu_bar = cand;
            r.binding = j;
        }
    }
    return r;
}

LambdaAt lambda_at(double nu, const ParamBounds& bounds, const FixedCertificate& fc) {
    int n = bounds.alpha.dim();
    detail::require(nu >= 0.0, "lambda_at: nu must be nonnegative");
    LambdaAt la;
    la.b_frak = Box(n);
    la.w_nu = Box(n);
    la.D = Box(n);
    la.lambda_e_j = Box(n);
    la.lambda_i_j = Box(n);
    Interval nui(nu);
    Interval nu2 = pow_int(nui, 2);

    for (int j = 0; j < n; ++j) {
        la.b_frak[j] = Interval(fc.bounds.b_bar[j]) + nui * bounds.G0y[j];
        la.w_nu[j] = fc.lam.w[j] - nui * bounds.alpha[j];
        la.D[j] = pow_int(bounds.alpha[j], 2) * nu2 - Interval(2.0) * bounds.beta[j] * nui +
                  bounds.gamma[j];
        if (!(la.D[j].lo() > 0.0) || !(la.w_nu[j].lo() > 0.0)) {
            la.bad_component = j;
            return la;
        }
        StableRoots roots =
            stable_quadratic_roots(bounds.a_bar[j], la.w_nu[j] * Interval(0.5),
                                   la.b_frak[j], la.D[j] * Interval(0.25));
        la.lambda_i_j[j] = roots.small_root;
        la.lambda_e_j[j] = roots.large_root;
    }
    la.defined = true;
    la.lambda_e = la.lambda_e_j[0];
    la.lambda_i = la.lambda_i_j[0];
    for (int j = 1; j < n; ++j) {
        la.lambda_e = Interval(std::min(la.lambda_e.lo(), la.lambda_e_j[j].lo()),
                               std::min(la.lambda_e.hi(), la.lambda_e_j[j].hi()));
        la.lambda_i = Interval(std::max(la.lambda_i.lo(), la.lambda_i_j[j].lo()),
                               std::max(la.lambda_i.hi(), la.lambda_i_j[j].hi()));
    }
    la.order_ok = la.lambda_e.lo() > la.lambda_i.hi();
    return la;
}

namespace {

template <class Pred>
double bisect_max(double ub, double tol_rel, Pred&& pred) {
    if (pred(ub)) return ub;
    double lo = 0.0, hi = ub;
    double tol = tol_rel * std::max(ub, std::numeric_limits<double>::min());
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

double find_eta(const ParamBounds& bounds, const FixedCertificate& fc, double ub, double tol_eta) {
    auto pred = [&](double nu) {
        LambdaAt la = lambda_at(nu, bounds, fc);
        return la.defined && la.order_ok;
    };
    if (!pred(0.0))
        throw CertificationError("no_feasible_eta",
                                 "radius ordering fails already at the center parameter");
    if (ub <= 0.0) return 0.0;
    return bisect_max(ub, tol_eta, pred);
}

namespace {

bool sigma_predicate(double nu, const ParamBounds& bounds, const ApproxFn& approx,
                     const FixedCertificate& fc, const Box& xbox) {
    LambdaAt la = lambda_at(nu, bounds, fc);
    if (!la.defined) return false;
    double li = la.lambda_i.hi();
    Box sb = param_box(fc.p, bounds.y, nu);
    Box xh = approx.eval_box(sb);
    for (int j = 0; j < xh.dim(); ++j) {
        Interval grown = xh[j] + Interval(-li, li) * Interval(fc.v[j]);
        if (!contains(xbox[j], grown)) return false;
    }
    return true;
}

}  // namespace

double find_sigma(const ParamBounds& bounds, const ApproxFn& approx, const FixedCertificate& fc,
                  const Box& xbox, double ub, double tol_sigma) {
    auto pred = [&](double nu) { return sigma_predicate(nu, bounds, approx, fc, xbox); };
    if (!pred(0.0))
        throw CertificationError("no_feasible_sigma",
                                 "inclusion box leaves the reference box at the center parameter");
    if (ub <= 0.0) return 0.0;
    return bisect_max(ub, tol_sigma, pred);
}

ParamCertificate certify_parameter_box(const System& sys, const FixedCertificate& fc,
                                       const ApproxFn& approx, const Box& sref, const Box& xref,
                                       const RealVector& y, const Tolerances& tols) {
    ParamCertificate cert;
    cert.approx = approx;
    auto fail = [&](const std::string& cond) -> ParamCertificate& {
        cert.status = CertifyStatus::failed;
        cert.failing_condition = cond;
        return cert;
    };

    try {
        cert.bounds = param_bounds(sys, fc, approx, sref, xref, y);
    } catch (const CertificationError& e) {
        return fail(e.condition);
    }
    try {
        cert.roots = mu_roots(cert.bounds);
    } catch (const NonpositiveDiscriminantError&) {
        return fail("negative_inner_discriminant");
    }

    cert.search_ub = std::min(cert.roots.mu_bar, cover_radius(sref, fc.p, y));
    try {
        cert.eta = find_eta(cert.bounds, fc, cert.search_ub, tols.tol_eta);
        cert.sigma = find_sigma(cert.bounds, approx, fc, xref, cert.search_ub, tols.tol_sigma);
    } catch (const CertificationError& e) {
        return fail(e.condition);
    }

    cert.mu = std::min(cert.eta, cert.sigma);
    if (!(cert.mu > 0.0)) return fail("mu_not_positive");

    // verify both conditions at mu itself rather than relying on monotonicity
    cert.at_mu = lambda_at(cert.mu, cert.bounds, fc);
    if (!cert.at_mu.defined) return fail("discriminant_nonpositive");
    if (!cert.at_mu.order_ok) return fail("lambda_order");
    if (!sigma_predicate(cert.mu, cert.bounds, approx, fc, xref))
        return fail("inclusion_feasibility");

    int p = sys.p;
    cert.s_tilde = Box(p);
    cert.s_tilde_outer = Box(p);
    for (int j = 0; j < p; ++j) {
        Interval radius = Interval(cert.mu) * Interval(y[j]);
        Interval lo_side = Interval(fc.p[j]) - radius;
        Interval hi_side = Interval(fc.p[j]) + radius;
        cert.s_tilde[j] = Interval(lo_side.hi(), hi_side.lo());
        cert.s_tilde_outer[j] = Interval(lo_side.lo(), hi_side.hi());
    }

    double li = cert.at_mu.lambda_i.hi();
    Box xh_tilde = approx.eval_box(cert.s_tilde_outer);
    Box xh_ref = approx.eval_box(sref);
    cert.enclosure_s_tilde = Box(sys.n);
    cert.enclosure_s_ref = Box(sys.n);
    for (int j = 0; j < sys.n; ++j) {
        Interval pad = Interval(-li, li) * Interval(fc.v[j]);
        cert.enclosure_s_tilde[j] = xh_tilde[j] + pad;
        cert.enclosure_s_ref[j] = xh_ref[j] + pad;
    }

    cert.status = CertifyStatus::ok;
    return cert;
}

EnclosureAtS regions_at_s(const System& sys, const FixedCertificate& fc, const ApproxFn& approx,
                          const RealVector& s, const ParamBounds& bounds) {
    detail::require(int(s.size()) == sys.p, "regions_at_s: parameter dimension mismatch");
    EnclosureAtS out;
    out.s = s;
    if (!contains(bounds.sref, s))
        throw RegionDomainError("parameter point outside the reference box");

    out.x_hat = approx.eval_enclosure(s);
    if (!in_interior(bounds.xref, out.x_hat)) {  // theorem wants xhat(s) interior to x
        out.failing_condition = "approx_leaves_domain";
        return out;
    }

    Box ytilde(sys.p);
    for (int j = 0; j < sys.p; ++j)
        ytilde[j] = abs_interval(Interval(s[j]) - Interval(fc.p[j]));

    IntervalMatrix Ci = to_intervals(fc.C);
    GSlope gs = make_gslope(approx.theta);
    RealMatrix g_mag = absv(gs.full);
    Box zb(fc.z), pbx(fc.p), sb(s);

    SlopeEval se = slope_first(sys, zb, pbx, out.x_hat, sb);
    IntervalMatrix g0_s = mag_product(absv(Ci * se.slope), g_mag);
    IntervalTensor3 tj = jacobian_slope(sys, zb, pbx, out.x_hat, sb);
    IntervalTensor3 a_s = tensor_mat(to_intervals(absv(mat_tensor(Ci, tj))), to_intervals(g_mag));

    int n = sys.n;
    out.b_frak = Box(n);
    out.B0_s = IntervalMatrix(n, n);
    for (int i = 0; i < n; ++i) {
        Interval acc(fc.bounds.b_bar[i]);
        for (int j = 0; j < sys.p; ++j) acc = acc + g0_s.at(i, j) * ytilde[j];
        out.b_frak[i] = acc;
        for (int j = 0; j < n; ++j) {
            Interval m(fc.bounds.B0.at(i, j));
            for (int k = 0; k < sys.p; ++k) m = m + a_s.at(i, j, k) * ytilde[k];
            out.B0_s.at(i, j) = m;
        }
    }

    out.a_s = bounds.a_bar;
    out.w_s = Box(n);
    out.D_s = Box(n);
    out.lambda_e_j = Box(n);
    out.lambda_i_j = Box(n);
    for (int j = 0; j < n; ++j) {
        Interval acc(fc.v[j]);
        for (int k = 0; k < n; ++k) acc = acc - out.B0_s.at(j, k) * Interval(fc.v[k]);
        out.w_s[j] = acc;
        out.D_s[j] = pow_int(out.w_s[j], 2) - Interval(4.0) * out.a_s[j] * out.b_frak[j];
        if (!(out.D_s[j].lo() > 0.0) || !(out.w_s[j].lo() > 0.0)) {
            out.failing_condition = "discriminant_nonpositive";
            return out;
        }
        StableRoots roots = stable_quadratic_roots(out.a_s[j], out.w_s[j] * Interval(0.5),
                                                   out.b_frak[j], out.D_s[j] * Interval(0.25));
        out.lambda_i_j[j] = roots.small_root;
        out.lambda_e_j[j] = roots.large_root;
    }
    out.lambda_e = out.lambda_e_j[0];
    out.lambda_i = out.lambda_i_j[0];
    for (int j = 1; j < n; ++j) {
        out.lambda_e = Interval(std::min(out.lambda_e.lo(), out.lambda_e_j[j].lo()),
                                std::min(out.lambda_e.hi(), out.lambda_e_j[j].hi()));
        out.lambda_i = Interval(std::max(out.lambda_i.lo(), out.lambda_i_j[j].lo()),
                                std::max(out.lambda_i.hi(), out.lambda_i_j[j].hi()));
    }
    if (!(out.lambda_e.lo() > out.lambda_i.hi())) {
        out.failing_condition = "lambda_order";
        return out;
    }

    double li = out.lambda_i.hi();
    double le = out.lambda_e.lo();
    out.R_i = Box(n);
    out.R_e = Box(n);
    for (int j = 0; j < n; ++j) {
        out.R_i[j] = out.x_hat[j] + Interval(-li, li) * Interval(fc.v[j]);
        Interval lo_side = out.x_hat[j] - Interval(le) * Interval(fc.v[j]);
        Interval hi_side = out.x_hat[j] + Interval(le) * Interval(fc.v[j]);
        // inner approximation of the exclusion box; honest empty when the
        // xhat enclosure width eats the whole radius
        if (lo_side.hi() > hi_side.lo())
            out.R_e[j] = Interval::empty();
        else
            out.R_e[j] = intersect(Interval(lo_side.hi(), hi_side.lo()), bounds.xref[j]);
    }
    if (!contains(bounds.xref, out.R_i)) {
        out.failing_condition = "inclusion_feasibility";
        return out;
    }
    out.feasible = true;
    return out;
}

}  // namespace paramex
