#include <doctest.h>

#include "oracle.hpp"
#include "paramex/verify.hpp"

using namespace paramex;

namespace {

RealMatrix example_preconditioner() {
    RealMatrix c(2, 2);
    c.at(0, 0) = -3.0 / 14.0;
    c.at(0, 1) = 8.0 / 14.0;
    c.at(1, 0) = 4.0 / 14.0;
    c.at(1, 1) = -6.0 / 14.0;
    return c;
}

Box box_around(const RealVector& z, double r) {
    Box b(int(z.size()));
    for (size_t i = 0; i < z.size(); ++i) b[int(i)] = Interval(z[i] - r, z[i] + r);
    return b;
}

}  // namespace

TEST_CASE("newton refines to the known zero") {
    System sys = oracle::example_system();
    NewtonResult nr = newton_refine(sys, {1.0}, {2.5, 4.5});
    CHECK(nr.converged);
    CHECK(nr.residual_norm <= 1e-12);
    CHECK(std::fabs(nr.z[0] - 3.0) <= 1e-9);
    CHECK(std::fabs(nr.z[1] - 4.0) <= 1e-9);
}

TEST_CASE("newton stops immediately on an exact zero") {
    System sys = oracle::example_system();
    NewtonResult nr = newton_refine(sys, {1.0}, {3.0, 4.0});
    CHECK(nr.converged);
    CHECK(nr.iterations <= 1);
    CHECK(nr.residual_norm == 0.0);
}

TEST_CASE("newton finds the branch point at s = 0") {
    System sys = oracle::example_system();
    NewtonResult nr = newton_refine(sys, {0.0}, {3.5, 3.7});
    CHECK(nr.converged);
    CHECK(nr.residual_norm <= 1e-12);
    // (sqrt(13), sqrt(13)) is a double root: linear convergence limits the
    // attainable distance at this residual tolerance
    double r13 = std::sqrt(13.0);
    CHECK(std::fabs(nr.z[0] - r13) <= 1e-5);
    CHECK(std::fabs(nr.z[1] - r13) <= 1e-5);
}

TEST_CASE("inverse rejects singular matrices") {
    RealMatrix m(2, 2);
    m.at(0, 0) = 1.0;
    m.at(0, 1) = 2.0;
    m.at(1, 0) = 2.0;
    m.at(1, 1) = 4.0;
    CHECK_THROWS_AS(invert(m), SingularMatrixError);
    RealMatrix good(2, 2);
    good.at(0, 0) = 6.0;
    good.at(0, 1) = 8.0;
    good.at(1, 0) = 4.0;
    good.at(1, 1) = 3.0;
    RealMatrix inv = invert(good);
    CHECK(inv.at(0, 0) == doctest::Approx(-3.0 / 14).epsilon(1e-14));
    CHECK(inv.at(1, 1) == doctest::Approx(-6.0 / 14).epsilon(1e-14));
}

TEST_CASE("krawczyk contracts a good box into its interior") {
    System sys = oracle::example_system();
    RealVector z{3.0, 4.0};
    Box zbox(z);
    Box xbox = box_around(z, 0.1);
    Box k = krawczyk(sys, {1.0}, zbox, xbox, example_preconditioner());
    CHECK(in_interior(xbox, k));
    CHECK(kahan_test(sys, {1.0}, zbox, xbox, example_preconditioner()) ==
          KahanOutcome::exists_unique);
}

TEST_CASE("krawczyk at the exact zero with a degenerate box returns the point") {
    System sys = oracle::example_system();
    RealVector z{3.0, 4.0};
    Box zbox(z);
    Box k = krawczyk(sys, {1.0}, zbox, zbox, example_preconditioner());
    for (int i = 0; i < 2; ++i) {
        CHECK(k[i].lo() == doctest::Approx(z[i]).epsilon(1e-14));
        CHECK(width(k[i]) <= 1e-13);
    }
    CHECK(kahan_test(sys, {1.0}, zbox, zbox, example_preconditioner()) != KahanOutcome::inconclusive);
}

TEST_CASE("a huge box is inconclusive") {
    System sys = oracle::example_system();
    RealVector z{3.0, 4.0};
    Box xbox{Interval(0.0, 5.0), Interval(0.0, 5.0)};
    Box k = krawczyk(sys, {1.0}, Box(z), xbox, example_preconditioner());
    CHECK(!contains(xbox, k));
    CHECK(kahan_test(sys, {1.0}, Box(z), xbox, example_preconditioner()) ==
          KahanOutcome::inconclusive);
}

TEST_CASE("a box far from any zero is inconclusive") {
    System sys = oracle::example_system();
    RealVector c{0.0, 1.0};
    Box xbox = box_around(c, 0.1);
    CHECK(kahan_test(sys, {1.0}, Box(c), xbox, example_preconditioner()) ==
          KahanOutcome::inconclusive);
}

TEST_CASE("kahan existence is sound against the oracle on randomized boxes") {
    System sys = oracle::example_system();
    std::mt19937_64 rng(12345);
    int positives = 0;
    for (int t = 0; t < 60; ++t) {
        double s = oracle::rand_in(rng, 0.3, 1.7);
        NewtonResult nr = newton_refine(sys, {s}, {2.5, 4.5});
        REQUIRE(nr.converged);
        RealVector c = nr.z;
        // random off-center and radius
        for (int i = 0; i < 2; ++i) c[i] += oracle::rand_in(rng, -0.02, 0.02);
        double r = oracle::rand_in(rng, 0.03, 0.3);
        Box xbox = box_around(c, r);
        RealMatrix cm = invert(eval_jacobian_x_double(sys, c, {s}));
        KahanOutcome out = kahan_test(sys, {s}, Box(c), xbox, cm);
        if (out == KahanOutcome::exists || out == KahanOutcome::exists_unique) {
            ++positives;
            // oracle: a fine grid of Newton starts must locate a zero in xbox
            bool found = false;
            for (int gi = 0; gi < 5 && !found; ++gi)
                for (int gj = 0; gj < 5 && !found; ++gj) {
                    RealVector start{xbox[0].lo() + width(xbox[0]) * gi / 4.0,
                                     xbox[1].lo() + width(xbox[1]) * gj / 4.0};
                    auto on = oracle::newton(sys, {s}, start, 1e-15L);
                    if (on.converged && oracle::point_in_box(xbox, on.z, 1e-12L)) found = true;
                }
            CHECK(found);
        }
    }
    CHECK(positives >= 20);
}

TEST_CASE("krawczyk image shrinks with the box near a regular zero") {
    System sys = oracle::example_system();
    RealVector z{3.0, 4.0};
    RealMatrix cm = example_preconditioner();
    double prev_width = 1e9;
    for (double r : {0.4, 0.2, 0.1, 0.05}) {
        Box k = krawczyk(sys, {1.0}, Box(z), box_around(z, r), cm);
        double w = 0.0;
        for (int i = 0; i < 2; ++i) w = std::max(w, width(k[i]));
        CHECK(w < prev_width);
        prev_width = w;
    }
}
