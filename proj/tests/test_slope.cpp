#include <doctest.h>

#include "oracle.hpp"
#include "paramex/parametric.hpp"

using namespace paramex;

namespace {

bool close(const Interval& a, double v, double tol = 1e-12) {
    return a.lo() <= v + tol && a.hi() >= v - tol && width(a) <= 2 * tol + 1e-9;
}

System cubic_system() {
    auto eqs = parse_equations("x1^3 - 2*x1*x2 + x2^2 - s1 ; x1^2*x2 - 3*x2 + s1^2", 2, 1);
    return make_system(2, 1, eqs, Box{Interval(0.25, 2.0), Interval(0.25, 2.0)},
                       Box{Interval(0.0, 1.0)});
}

System rational_system() {
    auto eqs = parse_equations("(x1*x2 + 1)/(x1 + 2) - s1 ; x1 - x2/(x2 + 3) - 1", 2, 1);
    return make_system(2, 1, eqs, Box{Interval(0.0, 2.0), Interval(0.0, 2.0)},
                       Box{Interval(0.0, 1.0)});
}

System linear_system() {
    auto eqs = parse_equations("2*x1 + 3*x2 - s1 - 4 ; x1 - x2 + 2*s1", 2, 1);
    return make_system(2, 1, eqs, Box{Interval(-5.0, 5.0), Interval(-5.0, 5.0)},
                       Box{Interval(-1.0, 1.0)});
}

System quartic_system() {
    auto eqs = parse_equations("x1^4 - 3*x1^2 + 1", 1, 0);
    return make_system(1, 0, eqs, Box{Interval(0.1, 1.5)}, Box(0));
}

}  // namespace

TEST_CASE("first-order slope of the worked example matches the closed form") {
    System sys = oracle::example_system();
    Box zc{Interval(3.0), Interval(4.0)};
    Box pc{Interval(1.0)};

    // at a sample point (x, s) the slope rows are (x1+3, x2+4, s+1; x2, 3, 1)
    double xv1 = 3.7, xv2 = 4.2, sv = 1.3;
    SlopeEval se = slope_first(sys, zc, pc, Box{Interval(xv1), Interval(xv2)}, Box{Interval(sv)});
    CHECK(close(se.slope.at(0, 0), xv1 + 3.0));
    CHECK(close(se.slope.at(0, 1), xv2 + 4.0));
    CHECK(close(se.slope.at(0, 2), sv + 1.0));
    CHECK(close(se.slope.at(1, 0), xv2));
    CHECK(close(se.slope.at(1, 1), 3.0));
    CHECK(close(se.slope.at(1, 2), 1.0));
}

TEST_CASE("slope over the degenerate box is the Jacobian") {
    System sys = oracle::example_system();
    Box zc{Interval(3.0), Interval(4.0)};
    Box pc{Interval(1.0)};
    SlopeEval se = slope_first(sys, zc, pc, zc, pc);
    double expect[2][3] = {{6.0, 8.0, 2.0}, {4.0, 3.0, 1.0}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) CHECK(close(se.slope.at(i, j), expect[i][j]));
}

TEST_CASE("constant expressions have zero slope") {
    auto eqs = parse_equations("26 - 13", 1, 0);
    System sys = make_system(1, 0, eqs, Box{Interval(-1.0, 1.0)}, Box(0));
    SlopeEval se = slope_first(sys, Box{Interval(0.0)}, Box(0), Box{Interval(-1.0, 1.0)}, Box(0));
    CHECK(se.slope.at(0, 0) == Interval(0.0));
    CHECK(se.value_center[0] == Interval(13.0));
}

TEST_CASE("slope identity holds at exact rational points for five systems") {
    System systems[] = {oracle::example_system(), cubic_system(), rational_system(),
                        linear_system(), quartic_system()};
    std::mt19937_64 rng(2024);
    for (const System& sys : systems) {
        int checked = 0;
        while (checked < 200) {
            RealVector z(sys.n), x(sys.n), s(sys.p);
            std::vector<oracle::Rational> zr(sys.n), xr(sys.n), sr(sys.p);
            for (int i = 0; i < sys.n; ++i) {
                z[i] = oracle::rand_in(rng, sys.X[i].lo(), sys.X[i].hi());
                x[i] = oracle::rand_in(rng, sys.X[i].lo(), sys.X[i].hi());
                zr[i] = oracle::rat(z[i]);
                xr[i] = oracle::rat(x[i]);
            }
            for (int j = 0; j < sys.p; ++j) {
                s[j] = oracle::rand_in(rng, sys.S[j].lo(), sys.S[j].hi());
                sr[j] = oracle::rat(s[j]);
            }
            Box xhull(sys.n), shull(sys.p);
            for (int i = 0; i < sys.n; ++i) xhull[i] = hull(Interval(z[i]), Interval(x[i]));
            for (int j = 0; j < sys.p; ++j) shull[j] = Interval(s[j]);
            SlopeEval se = slope_first(sys, Box(z), Box(s), xhull, shull);
            for (int i = 0; i < sys.n; ++i) {
                // exact F(x) - F(z): x-part varies, s fixed
                oracle::Rational lhs = oracle::eval_rational(sys.equations[i], xr, sr) -
                                       oracle::eval_rational(sys.equations[i], zr, sr);
                Interval rhs(0.0);
                for (int j = 0; j < sys.n; ++j)
                    rhs = rhs + se.slope.at(i, j) * (Interval(x[j]) - Interval(z[j]));
                CHECK(oracle::rational_in(rhs, lhs));
            }
            ++checked;
        }
    }
}

TEST_CASE("slope over a degenerate box contains the finite-difference Jacobian") {
    System sys = cubic_system();
    std::mt19937_64 rng(31);
    for (int t = 0; t < 50; ++t) {
        RealVector z{oracle::rand_in(rng, 0.3, 1.9), oracle::rand_in(rng, 0.3, 1.9)};
        RealVector s{oracle::rand_in(rng, 0.0, 1.0)};
        SlopeEval se = slope_first(sys, Box(z), Box(s), Box(z), Box(s));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double h = 1e-7;
                RealVector zp = z, zm = z;
                zp[j] += h;
                zm[j] -= h;
                double fd = (eval_double(sys.equations[i], zp, s) -
                             eval_double(sys.equations[i], zm, s)) /
                            (2 * h);
                Interval enc = se.slope.at(i, j);
                CHECK(enc.lo() - 1e-6 <= fd);
                CHECK(fd <= enc.hi() + 1e-6);
            }
    }
}

TEST_CASE("second-order slope of the example reproduces the preconditioned tensor") {
    System sys = oracle::example_system();
    Box zc{Interval(3.0), Interval(4.0)};
    Box pc{Interval(1.0)};
    Box xb{Interval(0.0, 5.0), Interval(0.0, 5.0)};

    SecondSlopeEval sec = slope_second(sys, zc, pc, zc, pc, xb, pc);
    IntervalTensor3 t_xx = state_slab(sec.second, 2);
    RealMatrix C(2, 2);
    C.at(0, 0) = -3.0 / 14.0;
    C.at(0, 1) = 8.0 / 14.0;
    C.at(1, 0) = 4.0 / 14.0;
    C.at(1, 1) = -6.0 / 14.0;
    RealTensor3 b_bar = absv(mat_tensor(to_intervals(C), t_xx));
    // slab 1: (1/14)(3 0; 4 0), slab 2: (1/14)(8 3; 6 4)
    CHECK(b_bar.at(0, 0, 0) == doctest::Approx(3.0 / 14).epsilon(1e-12));
    CHECK(b_bar.at(0, 1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b_bar.at(1, 0, 0) == doctest::Approx(4.0 / 14).epsilon(1e-12));
    CHECK(b_bar.at(1, 1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b_bar.at(0, 0, 1) == doctest::Approx(8.0 / 14).epsilon(1e-12));
    CHECK(b_bar.at(0, 1, 1) == doctest::Approx(3.0 / 14).epsilon(1e-12));
    CHECK(b_bar.at(1, 0, 1) == doctest::Approx(6.0 / 14).epsilon(1e-12));
    CHECK(b_bar.at(1, 1, 1) == doctest::Approx(4.0 / 14).epsilon(1e-12));
}

TEST_CASE("linear systems have zero second-order slope") {
    System sys = linear_system();
    Box c{Interval(0.0), Interval(0.0)};
    Box pc{Interval(0.0)};
    Box xb{Interval(-5.0, 5.0), Interval(-5.0, 5.0)};
    Box sb{Interval(-1.0, 1.0)};
    SecondSlopeEval sec = slope_second(sys, c, pc, c, pc, xb, sb);
    for (const Interval& e : sec.second.e) CHECK(mag(e) == 0.0);
}

TEST_CASE("quadratic second-order slopes do not depend on the box") {
    System sys = oracle::example_system();
    Box zc{Interval(3.0), Interval(4.0)};
    Box pc{Interval(1.0)};
    Box xb1{Interval(0.0, 5.0), Interval(0.0, 5.0)};
    Box xb2{Interval(2.0, 4.0), Interval(3.5, 4.5)};
    SecondSlopeEval a = slope_second(sys, zc, pc, zc, pc, xb1, pc);
    SecondSlopeEval b = slope_second(sys, zc, pc, zc, pc, xb2, pc);
    for (size_t i = 0; i < a.second.e.size(); ++i) CHECK(a.second.e[i] == b.second.e[i]);
}

TEST_CASE("first-order slope sits inside the second-order reconstruction") {
    System sys = cubic_system();
    std::mt19937_64 rng(17);
    for (int t = 0; t < 100; ++t) {
        RealVector z{oracle::rand_in(rng, 0.4, 1.8), oracle::rand_in(rng, 0.4, 1.8)};
        RealVector s{oracle::rand_in(rng, 0.1, 0.9)};
        Box xb(2), sb{Interval(s[0])};
        for (int i = 0; i < 2; ++i) {
            double r = oracle::rand_in(rng, 0.01, 0.2);
            xb[i] = intersect(Interval(z[i] - r, z[i] + r), sys.X[i]);
        }
        SlopeEval first = slope_first(sys, Box(z), sb, xb, sb);
        SecondSlopeEval sec = slope_second(sys, Box(z), sb, Box(z), sb, xb, sb);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) {
                Interval recon = sec.slope_c1_c2.at(i, j);
                for (int k = 0; k < 2; ++k)
                    recon = recon + sec.second.at(i, j, k) * (xb[k] - Interval(z[k]));
                // absorb rounding noise on the tight side
                Interval inflated(recon.lo() - 1e-11, recon.hi() + 1e-11);
                CHECK(contains(inflated, first.slope.at(i, j)));
            }
    }
}

TEST_CASE("gslope stacks theta over the identity") {
    System sys = oracle::example_system();
    ApproxFn tangent = make_approx(sys, {3.0, 4.0}, {1.0}, ApproxFn::Kind::tangent);
    CHECK(tangent.theta.at(0, 0) == doctest::Approx(-1.0 / 7).epsilon(1e-14));
    CHECK(tangent.theta.at(1, 0) == doctest::Approx(-1.0 / 7).epsilon(1e-14));

    GSlope g = gslope(tangent, {1.0}, Box{Interval(0.0, 2.0)});
    CHECK(g.full.rows == 3);
    CHECK(g.full.cols == 1);
    CHECK(g.full.at(2, 0) == Interval(1.0));

    ApproxFn secant = make_approx(sys, {3.0, 4.0}, {1.0}, ApproxFn::Kind::secant,
                                  RealVector{std::sqrt(13.0), std::sqrt(13.0)}, RealVector{0.0});
    CHECK(secant.theta.at(0, 0) == doctest::Approx(3.0 - std::sqrt(13.0)).epsilon(1e-14));
    CHECK(secant.theta.at(1, 0) == doctest::Approx(4.0 - std::sqrt(13.0)).epsilon(1e-14));

    ApproxFn flat = make_linear_approx({3.0, 4.0}, {1.0}, RealMatrix(2, 1));
    GSlope gf = gslope(flat, {1.0}, Box{Interval(0.0, 2.0)});
    CHECK(gf.theta.at(0, 0) == Interval(0.0));
}

TEST_CASE("tangent chain slope vanishes at the center parameter") {
    System sys = oracle::example_system();
    Box zc{Interval(3.0), Interval(4.0)};
    Box pc{Interval(1.0)};
    ApproxFn tangent = make_approx(sys, {3.0, 4.0}, {1.0}, ApproxFn::Kind::tangent);
    SlopeEval se = slope_first(sys, zc, pc, zc, pc);
    IntervalMatrix chain = chain_slope(se.slope, make_gslope(tangent.theta));
    for (int i = 0; i < 2; ++i) CHECK(mag(chain.at(i, 0)) <= 1e-12);

    // identity outer slope with theta = 0 picks out the identity rows
    IntervalMatrix outer = IntervalMatrix::identity(3);
    IntervalMatrix sel = chain_slope(outer, make_gslope(RealMatrix(2, 1)));
    CHECK(sel.at(0, 0) == Interval(0.0));
    CHECK(sel.at(1, 0) == Interval(0.0));
    CHECK(sel.at(2, 0) == Interval(1.0));
}

TEST_CASE("jacobian slope of the example has the two constant slabs") {
    System sys = oracle::example_system();
    Box zc{Interval(3.0), Interval(4.0)};
    Box pc{Interval(1.0)};
    Box xb{Interval(0.0, 5.0), Interval(0.0, 5.0)};
    Box sb{Interval(0.0, 2.0)};
    IntervalTensor3 t = jacobian_slope(sys, zc, pc, xb, sb);
    double slab1[2][2] = {{2, 0}, {0, 1}};
    double slab2[2][2] = {{0, 2}, {1, 0}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(close(t.at(i, j, 0), slab1[i][j]));
            CHECK(close(t.at(i, j, 1), slab2[i][j]));
            CHECK(close(t.at(i, j, 2), 0.0));
        }

    System lin = linear_system();
    IntervalTensor3 tl = jacobian_slope(lin, Box{Interval(0.0), Interval(0.0)}, Box{Interval(0.0)},
                                        Box{Interval(-5.0, 5.0), Interval(-5.0, 5.0)},
                                        Box{Interval(-1.0, 1.0)});
    for (const Interval& e : tl.e) CHECK(mag(e) == 0.0);
}
