#pragma once

// Parameter-dependent certification: propagate the fixed-parameter bounds
// along an affine approximation xhat(s) = z + Theta (s - p), compute the
// feasible parameter radius mu via the stable quadratic roots, and certify
// that every parameter in the interior of s_tilde = [p - mu y, p + mu y]
// admits a solution inside its inclusion box.

#include <optional>
#include <string>

#include "paramex/regions.hpp"

namespace paramex {

struct CertificationError : Error {
    std::string condition;
    CertificationError(std::string cond, const std::string& msg)
        : Error(msg), condition(std::move(cond)) {}
};

struct ApproxFn {
    enum class Kind { tangent, secant, custom_linear };

    Kind kind = Kind::tangent;
    RealVector z;      // xhat(p) = z exactly
    RealVector p;
    RealMatrix theta;  // n x p
    std::optional<RealVector> secant_x1;  // second point for the secant
    std::optional<RealVector> secant_s1;

    // Outward enclosure of xhat over a parameter box.
    Box eval_box(const Box& sbox) const;
    // Tight enclosure at a single parameter point.
    Box eval_enclosure(const RealVector& s) const;
    // Plain binary64 value.
    RealVector eval_point(const RealVector& s) const;
};

const char* to_string(ApproxFn::Kind k);

ApproxFn make_approx(const System& sys, const RealVector& z, const RealVector& p,
                     ApproxFn::Kind kind, const std::optional<RealVector>& x1 = std::nullopt,
                     const std::optional<RealVector>& s1 = std::nullopt);

ApproxFn make_linear_approx(const RealVector& z, const RealVector& p, const RealMatrix& theta);

// Slope of g(s) = (xhat(s), s); constant for affine xhat.
GSlope gslope(const ApproxFn& approx, const RealVector& p, const Box& sbox);

struct ParamBounds {
    RealMatrix G0_bar;   // n x p, >= |C S[g(p),g(s)]H| |S[p,s]g| over sref
    RealTensor3 A_bar;   // n x n x p, slope bound for the state Jacobian
    RealTensor3 B2_bar;  // n x n x n, second-order bound over (xref, sref)
    RealVector y;        // parameter scaling
    Box alpha;           // ((A_bar y) v)_j
    Box beta;            // alpha_j w_j + 2 a_bar_j (G0_bar y)_j
    Box gamma;           // w_j^2 - 4 a_bar_j b_bar_j
    Box a_bar;           // v' B2_bar v
    Box G0y;             // G0_bar y
    Box sref;
    Box xref;
};

ParamBounds param_bounds(const System& sys, const FixedCertificate& fc, const ApproxFn& approx,
                         const Box& sref, const Box& xref, const RealVector& y);

struct MuRoots {
    Box mu_upper_j;  // larger root of alpha_j^2 mu^2 - 2 beta_j mu + gamma_j
    Box mu_lower_j;  // smaller root, the per-component feasibility limit
    double mu_bar = 0.0;  // min_j mu_lower_j, rounded down
    int binding = -1;
};

MuRoots mu_roots(const ParamBounds& bounds);

struct LambdaAt {
    bool defined = false;   // all discriminants verified positive
    bool order_ok = false;  // lambda_e > lambda_i verified
    int bad_component = -1;
    Box b_frak;  // b_bar + nu G0_bar y
    Box w_nu;    // w - nu alpha
    Box D;       // alpha^2 nu^2 - 2 beta nu + gamma
    Box lambda_e_j;
    Box lambda_i_j;
    Interval lambda_e{0.0};
    Interval lambda_i{0.0};
};

LambdaAt lambda_at(double nu, const ParamBounds& bounds, const FixedCertificate& fc);

// Largest verified nu with lambda_e(nu) > lambda_i(nu), by bisection on
// [0, ub]; throws CertificationError("no_feasible_eta") when nu = 0 fails.
double find_eta(const ParamBounds& bounds, const FixedCertificate& fc, double ub, double tol_eta);

// Largest verified nu with xhat([p - nu y, p + nu y]) + [-1,1] lambda_i(nu) v
// inside xbox; throws CertificationError("no_feasible_sigma") when nu = 0 fails.
double find_sigma(const ParamBounds& bounds, const ApproxFn& approx, const FixedCertificate& fc,
                  const Box& xbox, double ub, double tol_sigma);

struct Tolerances {
    double newton_tol = 1e-12;
    double tol_eta = 1e-9;    // relative bisection tolerance
    double tol_sigma = 1e-9;  // relative bisection tolerance
};

enum class CertifyStatus { ok, failed };

struct ParamCertificate {
    ApproxFn approx;
    ParamBounds bounds;
    MuRoots roots;
    double search_ub = 0.0;  // min(mu_bar, radius covering sref)
    double eta = 0.0;
    double sigma = 0.0;
    double mu = 0.0;
    Box s_tilde;        // inward-rounded certified parameter box
    Box s_tilde_outer;  // outward version, used for enclosures
    LambdaAt at_mu;
    Box enclosure_s_tilde;  // xhat(s_tilde) + [-1,1] lambda_i(mu) v
    Box enclosure_s_ref;    // xhat(sref) + [-1,1] lambda_i(mu) v
    CertifyStatus status = CertifyStatus::failed;
    std::string failing_condition;  // empty when status == ok
};

ParamCertificate certify_parameter_box(const System& sys, const FixedCertificate& fc,
                                       const ApproxFn& approx, const Box& sref, const Box& xref,
                                       const RealVector& y, const Tolerances& tols = {});

struct EnclosureAtS {
    RealVector s;
    Box x_hat;
    bool feasible = false;
    std::string failing_condition;
    Box b_frak;            // b_bar + G0(s) |s-p|
    IntervalMatrix B0_s;   // B0 + A(s) |s-p|
    Box w_s, a_s, D_s;
    Box lambda_e_j, lambda_i_j;
    Interval lambda_e{0.0};
    Interval lambda_i{0.0};
    Box R_i;  // outward
    Box R_e;  // inward, clipped to xbox
};

// Per-parameter regions with the exact-s bounds G0(s), A(s) instead of the
// box-wide ones; valid for s inside bounds.sref.
EnclosureAtS regions_at_s(const System& sys, const FixedCertificate& fc, const ApproxFn& approx,
                          const RealVector& s, const ParamBounds& bounds);

// Radius nu (rounded up) at which [p - nu y, p + nu y] covers sref.
double cover_radius(const Box& sref, const RealVector& p, const RealVector& y);

}  // namespace paramex
