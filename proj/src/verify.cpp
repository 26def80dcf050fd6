#include "paramex/verify.hpp"

#include <cmath>

namespace paramex {

namespace {

double norm_inf(const RealVector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double norm1_cols(const RealMatrix& a) {
    double m = 0.0;
    for (int j = 0; j < a.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < a.rows; ++i) s += std::fabs(a.at(i, j));
        m = std::max(m, s);
    }
    return m;
}

}  // namespace

LuFactors lu_factor(RealMatrix a) {
    detail::require(a.rows == a.cols, "LU factorization requires a square matrix");
    int n = a.rows;
    LuFactors f;
    f.perm.resize(n);
    for (int i = 0; i < n; ++i) f.perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(a.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            double cand = std::fabs(a.at(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) {
            f.singular = true;
            f.lu = std::move(a);
            return f;
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            double l = a.at(i, k) / a.at(k, k);
            a.at(i, k) = l;
            for (int j = k + 1; j < n; ++j) a.at(i, j) -= l * a.at(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

RealVector lu_solve(const LuFactors& f, RealVector b) {
    if (f.singular) throw SingularMatrixError("LU solve on singular factorization");
    int n = f.lu.rows;
    RealVector y(n);
    for (int i = 0; i < n; ++i) y[i] = b[f.perm[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) y[i] -= f.lu.at(i, j) * y[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) y[i] -= f.lu.at(i, j) * y[j];
        y[i] /= f.lu.at(i, i);
    }
    return y;
}

double rcond_estimate(const RealMatrix& a, const RealMatrix& a_inv) {
    double na = norm1_cols(a);
    double ni = norm1_cols(a_inv);
    if (na == 0.0 || ni == 0.0 || !std::isfinite(na) || !std::isfinite(ni)) return 0.0;
    return 1.0 / (na * ni);
}

RealMatrix invert(const RealMatrix& a, double rcond_min) {
    LuFactors f = lu_factor(a);
    if (f.singular) throw SingularMatrixError("matrix is numerically singular");
    int n = a.rows;
    RealMatrix inv(n, n);
    RealVector e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        RealVector col = lu_solve(f, e);
        e[j] = 0.0;
        for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
    }
    if (rcond_estimate(a, inv) < rcond_min)
        throw SingularMatrixError("reciprocal condition estimate below threshold");
    return inv;
}

NewtonResult newton_refine(const System& sys, const RealVector& s, RealVector x0, double tol,
                           int max_iter) {
    detail::require(int(s.size()) == sys.p, "newton_refine: parameter dimension mismatch");
    detail::require(int(x0.size()) == sys.n, "newton_refine: state dimension mismatch");
    NewtonResult res;
    res.z = std::move(x0);
    RealVector h = eval_system_double(sys, res.z, s);
    res.residual_norm = norm_inf(h);
    for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
        if (res.residual_norm <= tol) {
            res.converged = true;
            return res;
        }
        RealMatrix j = eval_jacobian_x_double(sys, res.z, s);
        LuFactors f = lu_factor(j);
        if (f.singular) throw SingularMatrixError("Jacobian singular during Newton refinement");
        RealVector rhs(sys.n);
        for (int i = 0; i < sys.n; ++i) rhs[i] = -h[i];
        RealVector step = lu_solve(f, rhs);
        // damping: halve until the residual actually drops
        double damp = 1.0;
        RealVector z_next(sys.n);
        RealVector h_next;
        double r_next = 0.0;
        bool improved = false;
        for (int halvings = 0; halvings <= 30; ++halvings) {
            for (int i = 0; i < sys.n; ++i) z_next[i] = res.z[i] + damp * step[i];
            h_next = eval_system_double(sys, z_next, s);
            r_next = norm_inf(h_next);
            if (std::isfinite(r_next) && r_next < res.residual_norm) {
                improved = true;
                break;
            }
            damp *= 0.5;
        }
        if (!improved) break;
        res.z = z_next;
        h = h_next;
        res.residual_norm = r_next;
    }
    res.converged = res.residual_norm <= tol;
    return res;
}

Box krawczyk(const System& sys, const RealVector& s, const Box& zbox, const Box& xbox,
             const RealMatrix& C) {
    detail::require(zbox.dim() == sys.n && xbox.dim() == sys.n, "krawczyk: box dimension mismatch");
    detail::require(C.rows == sys.n && C.cols == sys.n, "krawczyk: preconditioner shape mismatch");
    RealVector z = midpoint(zbox);
    Box s_point(s);

    Box hz = eval_system_point(sys, z, s);
    SlopeEval se = slope_first(sys, zbox, s_point, xbox, s_point);
    IntervalMatrix slope_x = state_columns(se.slope, sys.n);
    IntervalMatrix cs = to_intervals(C) * slope_x;
    IntervalMatrix a = cs - IntervalMatrix::identity(sys.n);

    Box ch = to_intervals(C) * hz;
    Box dx = xbox - Box(z);
    Box corr = a * dx;
    Box k(sys.n);
    for (int i = 0; i < sys.n; ++i) k[i] = Interval(z[i]) - ch[i] - corr[i];
    return k;
}

KahanOutcome kahan_test(const System& sys, const RealVector& s, const Box& zbox, const Box& xbox,
                        const RealMatrix& C) {
    if (!contains(xbox, zbox)) return KahanOutcome::inconclusive;  // theorem needs zbox inside xbox
    Box k = krawczyk(sys, s, zbox, xbox, C);
    if (!contains(xbox, k)) return KahanOutcome::inconclusive;
    Box k_full = krawczyk(sys, s, xbox, xbox, C);
    if (in_interior(xbox, k_full)) return KahanOutcome::exists_unique;
    return KahanOutcome::exists;
}

const char* to_string(KahanOutcome o) {
    switch (o) {
        case KahanOutcome::exists: return "exists";
        case KahanOutcome::exists_unique: return "exists_unique";
        case KahanOutcome::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

}  // namespace paramex
