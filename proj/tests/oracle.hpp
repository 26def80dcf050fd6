#pragma once

// Test-only oracles, kept independent of the library's rigorous paths:
// exact rational expression evaluation (binary64 inputs are dyadic
// rationals), a long-double Newton solver with its own elimination, and a
// brute-force grid range scan.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "paramex/expr.hpp"

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using paramex::Box;
using paramex::Expr;
using paramex::ExprPtr;
using paramex::Interval;
using paramex::RealVector;
using paramex::System;

inline Rational rat(double v) { return Rational(v); }  // exact for finite doubles

inline Rational rat_pow(const Rational& q, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= q;
    return r;
}

// Exact value at a rational point; requires all constants degenerate.
inline Rational eval_rational(const ExprPtr& e, const std::vector<Rational>& x,
                              const std::vector<Rational>& s) {
    switch (e->kind) {
        case Expr::Kind::Constant:
            if (!e->value.is_degenerate())
                throw std::runtime_error("rational oracle needs exact constants");
            return rat(e->value.lo());
        case Expr::Kind::Variable:
            return e->var_class == paramex::VarClass::state ? x[e->index] : s[e->index];
        case Expr::Kind::Neg: return -eval_rational(e->a, x, s);
        case Expr::Kind::Add: return eval_rational(e->a, x, s) + eval_rational(e->b, x, s);
        case Expr::Kind::Sub: return eval_rational(e->a, x, s) - eval_rational(e->b, x, s);
        case Expr::Kind::Mul: return eval_rational(e->a, x, s) * eval_rational(e->b, x, s);
        case Expr::Kind::Div: return eval_rational(e->a, x, s) / eval_rational(e->b, x, s);
        case Expr::Kind::Pow: return rat_pow(eval_rational(e->a, x, s), e->exponent);
    }
    throw std::runtime_error("unreachable");
}

inline bool rational_in(const Interval& box, const Rational& v) {
    if (box.is_empty()) return false;
    return rat(box.lo()) <= v && v <= rat(box.hi());
}

// ---------------------------------------------------------------------------
// Long-double Newton, independent of the library's solvers.
// ---------------------------------------------------------------------------

inline long double eval_ld(const ExprPtr& e, const std::vector<long double>& x,
                           const std::vector<long double>& s) {
    switch (e->kind) {
        case Expr::Kind::Constant: return (long double)paramex::midpoint(e->value);
        case Expr::Kind::Variable:
            return e->var_class == paramex::VarClass::state ? x[e->index] : s[e->index];
        case Expr::Kind::Neg: return -eval_ld(e->a, x, s);
        case Expr::Kind::Add: return eval_ld(e->a, x, s) + eval_ld(e->b, x, s);
        case Expr::Kind::Sub: return eval_ld(e->a, x, s) - eval_ld(e->b, x, s);
        case Expr::Kind::Mul: return eval_ld(e->a, x, s) * eval_ld(e->b, x, s);
        case Expr::Kind::Div: return eval_ld(e->a, x, s) / eval_ld(e->b, x, s);
        case Expr::Kind::Pow: {
            long double b = eval_ld(e->a, x, s);
            long double r = 1.0L;
            for (int i = 0; i < e->exponent; ++i) r *= b;
            return r;
        }
    }
    throw std::runtime_error("unreachable");
}

struct NewtonOracle {
    std::vector<long double> z;
    bool converged = false;
    long double residual = 0.0L;
};

inline NewtonOracle newton(const System& sys, const RealVector& s_pt, const RealVector& x0,
                           long double tol = 1e-16L, int max_iter = 200) {
    int n = sys.n;
    NewtonOracle res;
    res.z.assign(x0.begin(), x0.end());
    std::vector<long double> s(s_pt.begin(), s_pt.end());
    for (int it = 0; it < max_iter; ++it) {
        std::vector<long double> h(n);
        long double rn = 0.0L;
        for (int i = 0; i < n; ++i) {
            h[i] = eval_ld(sys.equations[i], res.z, s);
            long double ab = h[i] < 0 ? -h[i] : h[i];
            if (ab > rn) rn = ab;
        }
        res.residual = rn;
        if (rn <= tol) {
            res.converged = true;
            return res;
        }
        // Jacobian by the stored derivative expressions, solved by plain
        // Gaussian elimination with partial pivoting in long double
        std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a[i][j] = eval_ld(sys.jac_x[i][j], res.z, s);
            a[i][n] = -h[i];
        }
        for (int k = 0; k < n; ++k) {
            int piv = k;
            for (int i = k + 1; i < n; ++i)
                if (std::fabs((double)a[i][k]) > std::fabs((double)a[piv][k])) piv = i;
            std::swap(a[k], a[piv]);
            if (a[k][k] == 0.0L) return res;
            for (int i = k + 1; i < n; ++i) {
                long double f = a[i][k] / a[k][k];
                for (int j = k; j <= n; ++j) a[i][j] -= f * a[k][j];
            }
        }
        std::vector<long double> step(n);
        for (int i = n - 1; i >= 0; --i) {
            long double acc = a[i][n];
            for (int j = i + 1; j < n; ++j) acc -= a[i][j] * step[j];
            step[i] = acc / a[i][i];
        }
        for (int i = 0; i < n; ++i) res.z[i] += step[i];
    }
    std::vector<long double> h(n);
    long double rn = 0.0L;
    for (int i = 0; i < n; ++i) {
        h[i] = eval_ld(sys.equations[i], res.z, s);
        rn = std::max(rn, h[i] < 0 ? -h[i] : h[i]);
    }
    res.residual = rn;
    res.converged = rn <= tol;
    return res;
}

inline bool point_in_box(const Box& b, const std::vector<long double>& pt, long double slack = 0.0L) {
    for (int i = 0; i < b.dim(); ++i) {
        if (b[i].is_empty()) return false;
        if (pt[i] < (long double)b[i].lo() - slack) return false;
        if (pt[i] > (long double)b[i].hi() + slack) return false;
    }
    return true;
}

// Brute-force range scan of an expression over a box on a regular grid.
inline std::pair<double, double> grid_range(const ExprPtr& e, const Box& xb, const Box& sb,
                                            int steps) {
    int n = xb.dim(), p = sb.dim();
    std::vector<long double> x(n), s(p);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<int> idx(n + p, 0);
    while (true) {
        for (int i = 0; i < n; ++i)
            x[i] = xb[i].lo() + (xb[i].hi() - xb[i].lo()) * idx[i] / double(steps - 1);
        for (int j = 0; j < p; ++j)
            s[j] = sb[j].lo() + (sb[j].hi() - sb[j].lo()) * idx[n + j] / double(steps - 1);
        double v = (double)eval_ld(e, x, s);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        int k = 0;
        while (k < n + p && ++idx[k] == steps) idx[k++] = 0;
        if (k == n + p) break;
    }
    return {lo, hi};
}

// The worked two-equation example used across the test suite.
inline System example_system() {
    auto eqs = paramex::parse_equations("x1^2 + x2^2 - 26 + s1^2 ; x1*x2 - 13 + s1", 2, 1);
    Box X{Interval(0.0, 5.0), Interval(0.0, 5.0)};
    Box S{Interval(0.0, 2.0)};
    return paramex::make_system(2, 1, std::move(eqs), X, S);
}

inline double rand_in(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

}  // namespace oracle
