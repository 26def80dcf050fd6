#pragma once

// Outward-rounded interval arithmetic on binary64 endpoints.
//
// Directed rounding is done in software: every elementary result is computed
// with round-to-nearest and then nudged one ulp in the unsafe direction unless
// the residual (two-sum / fma) proves the result exact.  No FPU rounding-mode
// switches, so all operations are pure and safe to run concurrently.

#include <cmath>
#include <limits>

#include "paramex/errors.hpp"

namespace paramex {

namespace rnd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kMaxFinite = std::numeric_limits<double>::max();
inline constexpr double kMinNormal = std::numeric_limits<double>::min();

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

// Residual of the rounded sum s = RN(a+b); exact for finite s (Knuth two-sum).
inline double sum_residual(double a, double b, double s) {
    double bv = s - a;
    double av = s - bv;
    double br = b - bv;
    double ar = a - av;
    return ar + br;
}

inline double add_down(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a + b;
    double s = a + b;
    if (std::isinf(s)) return s > 0 ? kMaxFinite : s;
    double r = sum_residual(a, b, s);
    return (r < 0.0 || std::isnan(r)) ? next_down(s) : s;
}

inline double add_up(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a + b;
    double s = a + b;
    if (std::isinf(s)) return s < 0 ? -kMaxFinite : s;
    double r = sum_residual(a, b, s);
    return (r > 0.0 || std::isnan(r)) ? next_up(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

// Endpoint products use the convention 0 * inf = 0: an exact zero factor
// annihilates even an unbounded one when bounding products of reals.
inline double mul_down(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    if (std::isinf(a) || std::isinf(b)) return a * b;
    double p = a * b;
    if (std::isinf(p)) return p > 0 ? kMaxFinite : p;
    if (std::fabs(p) < kMinNormal) return next_down(p);
    double r = std::fma(a, b, -p);
    return (r < 0.0 || std::isnan(r)) ? next_down(p) : p;
}

inline double mul_up(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    if (std::isinf(a) || std::isinf(b)) return a * b;
    double p = a * b;
    if (std::isinf(p)) return p < 0 ? -kMaxFinite : p;
    if (std::fabs(p) < kMinNormal) return next_up(p);
    double r = std::fma(a, b, -p);
    return (r > 0.0 || std::isnan(r)) ? next_up(p) : p;
}

inline double div_down(double a, double b) {
    if (a == 0.0) return 0.0;
    if (std::isinf(b)) return 0.0;
    if (std::isinf(a)) return (a > 0) == (b > 0) ? kInf : -kInf;
    double q = a / b;
    if (std::isinf(q)) return q > 0 ? kMaxFinite : q;
    // the residual q*b - a is exact only when q and a are normal
    if (std::fabs(q) < kMinNormal || std::fabs(a) < kMinNormal) return next_down(q);
    double r = std::fma(q, b, -a);
    bool q_high = (r > 0.0) == (b > 0.0) && r != 0.0;
    return (q_high || std::isnan(r)) ? next_down(q) : q;
}

inline double div_up(double a, double b) {
    if (a == 0.0) return 0.0;
    if (std::isinf(b)) return 0.0;
    if (std::isinf(a)) return (a > 0) == (b > 0) ? kInf : -kInf;
    double q = a / b;
    if (std::isinf(q)) return q < 0 ? -kMaxFinite : q;
    if (std::fabs(q) < kMinNormal || std::fabs(a) < kMinNormal) return next_up(q);
    double r = std::fma(q, b, -a);
    bool q_low = (r < 0.0) == (b > 0.0) && r != 0.0;
    return (q_low || std::isnan(r)) ? next_up(q) : q;
}

inline double sqrt_down(double x) {
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;
    double s = std::sqrt(x);
    if (x < kMinNormal) return next_down(s);
    double r = std::fma(s, s, -x);
    return r > 0.0 ? next_down(s) : s;
}

inline double sqrt_up(double x) {
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;
    double s = std::sqrt(x);
    if (x < kMinNormal) return next_up(s);
    double r = std::fma(s, s, -x);
    return r < 0.0 ? next_up(s) : s;
}

}  // namespace rnd

class Interval {
  public:
    Interval() : lo_(0.0), hi_(0.0), empty_(false) {}
    Interval(double v) : lo_(v), hi_(v), empty_(false) {  // NOLINT(google-explicit-constructor)
        if (std::isnan(v)) throw DomainError("interval endpoint is NaN");
    }
    Interval(double lo, double hi) : lo_(lo), hi_(hi), empty_(false) {
        if (std::isnan(lo) || std::isnan(hi)) throw DomainError("interval endpoint is NaN");
        if (lo > hi) throw DomainError("interval lower bound exceeds upper bound");
    }

    static Interval empty() {
        Interval r;
        r.empty_ = true;
        r.lo_ = std::numeric_limits<double>::quiet_NaN();
        r.hi_ = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    static Interval entire() { return Interval(-rnd::kInf, rnd::kInf); }

    bool is_empty() const { return empty_; }
    double lo() const {
        if (empty_) throw DomainError("lower bound of empty interval");
        return lo_;
    }
    double hi() const {
        if (empty_) throw DomainError("upper bound of empty interval");
        return hi_;
    }

    bool is_degenerate() const { return !empty_ && lo_ == hi_; }
    bool contains_zero() const { return !empty_ && lo_ <= 0.0 && 0.0 <= hi_; }

    bool operator==(const Interval& o) const {
        if (empty_ || o.empty_) return empty_ == o.empty_;
        return lo_ == o.lo_ && hi_ == o.hi_;
    }
    bool operator!=(const Interval& o) const { return !(*this == o); }

  private:
    double lo_, hi_;
    bool empty_;
};

inline double width(const Interval& a) { return a.is_empty() ? 0.0 : rnd::sub_up(a.hi(), a.lo()); }
inline double midpoint(const Interval& a) {
    double m = 0.5 * (a.lo() + a.hi());
    if (std::isinf(m) || std::isnan(m)) m = 0.5 * a.lo() + 0.5 * a.hi();
    return m;
}

// Upper bound on |t| over the interval; exact in binary64.
inline double mag(const Interval& a) { return std::max(std::fabs(a.lo()), std::fabs(a.hi())); }
// Lower bound on |t| over the interval.
inline double mig(const Interval& a) {
    if (a.contains_zero()) return 0.0;
    return std::min(std::fabs(a.lo()), std::fabs(a.hi()));
}

inline Interval operator-(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    return Interval(-a.hi(), -a.lo());
}

inline Interval operator+(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    return Interval(rnd::add_down(a.lo(), b.lo()), rnd::add_up(a.hi(), b.hi()));
}

inline Interval operator-(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    return Interval(rnd::sub_down(a.lo(), b.hi()), rnd::sub_up(a.hi(), b.lo()));
}

inline Interval operator*(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    double cand_lo[4] = {rnd::mul_down(a.lo(), b.lo()), rnd::mul_down(a.lo(), b.hi()),
                         rnd::mul_down(a.hi(), b.lo()), rnd::mul_down(a.hi(), b.hi())};
    double cand_hi[4] = {rnd::mul_up(a.lo(), b.lo()), rnd::mul_up(a.lo(), b.hi()),
                         rnd::mul_up(a.hi(), b.lo()), rnd::mul_up(a.hi(), b.hi())};
    double lo = cand_lo[0], hi = cand_hi[0];
    for (int i = 1; i < 4; ++i) {
        lo = std::min(lo, cand_lo[i]);
        hi = std::max(hi, cand_hi[i]);
    }
    return Interval(lo, hi);
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    if (b.contains_zero()) throw DomainError("division by an interval containing zero");
    double cand_lo[4] = {rnd::div_down(a.lo(), b.lo()), rnd::div_down(a.lo(), b.hi()),
                         rnd::div_down(a.hi(), b.lo()), rnd::div_down(a.hi(), b.hi())};
    double cand_hi[4] = {rnd::div_up(a.lo(), b.lo()), rnd::div_up(a.lo(), b.hi()),
                         rnd::div_up(a.hi(), b.lo()), rnd::div_up(a.hi(), b.hi())};
    double lo = cand_lo[0], hi = cand_hi[0];
    for (int i = 1; i < 4; ++i) {
        lo = std::min(lo, cand_lo[i]);
        hi = std::max(hi, cand_hi[i]);
    }
    return Interval(lo, hi);
}

namespace detail {
// x^k for x >= 0 by repeated directed multiplication; monotone in x.
inline double pow_nonneg_down(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = rnd::mul_down(r, x);
    return r;
}
inline double pow_nonneg_up(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = rnd::mul_up(r, x);
    return r;
}
}  // namespace detail

// Tight integer power (treats the base as a single variable, unlike a*a*...*a).
inline Interval pow_int(const Interval& a, int k) {
    if (k < 0) throw DomainError("pow_int requires a nonnegative exponent");
    if (a.is_empty()) return Interval::empty();
    if (k == 0) return Interval(1.0);
    if (k == 1) return a;
    bool even = (k % 2 == 0);
    if (a.lo() >= 0.0) {
        return Interval(detail::pow_nonneg_down(a.lo(), k), detail::pow_nonneg_up(a.hi(), k));
    }
    if (a.hi() <= 0.0) {
        double lo_abs = -a.hi(), hi_abs = -a.lo();
        if (even) return Interval(detail::pow_nonneg_down(lo_abs, k), detail::pow_nonneg_up(hi_abs, k));
        return Interval(-detail::pow_nonneg_up(hi_abs, k), -detail::pow_nonneg_down(lo_abs, k));
    }
    if (even) return Interval(0.0, detail::pow_nonneg_up(mag(a), k));
    return Interval(-detail::pow_nonneg_up(-a.lo(), k), detail::pow_nonneg_up(a.hi(), k));
}

inline Interval sqrt(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    if (a.lo() < 0.0) throw DomainError("sqrt of an interval with negative lower bound");
    return Interval(rnd::sqrt_down(a.lo()), rnd::sqrt_up(a.hi()));
}

inline Interval hull(const Interval& a, const Interval& b) {
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

inline Interval intersect(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    double lo = std::max(a.lo(), b.lo());
    double hi = std::min(a.hi(), b.hi());
    if (lo > hi) return Interval::empty();
    return Interval(lo, hi);
}

inline bool contains(const Interval& outer, double v) {
    return !outer.is_empty() && outer.lo() <= v && v <= outer.hi();
}
inline bool contains(const Interval& outer, const Interval& inner) {
    if (inner.is_empty()) return true;
    if (outer.is_empty()) return false;
    return outer.lo() <= inner.lo() && inner.hi() <= outer.hi();
}
inline bool in_interior(const Interval& outer, const Interval& inner) {
    if (inner.is_empty()) return true;
    if (outer.is_empty()) return false;
    return outer.lo() < inner.lo() && inner.hi() < outer.hi();
}
inline bool disjoint(const Interval& a, const Interval& b) {
    return intersect(a, b).is_empty();
}

}  // namespace paramex
