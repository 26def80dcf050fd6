#pragma once

// Chains parameter-box certificates along a scalar parameter range.  Each
// segment certifies an open box around its center; the next center sits on
// the previous box boundary, so the shared endpoint is interior to the next
// segment.  The sweep stops when the range is covered, a step certificate
// fails, or the certified radius decays below the floor (the step-size
// collapse seen when a feasibility boundary is approached).

#include "paramex/parametric.hpp"

namespace paramex {

enum class StopReason { covered, mu_below_floor, certification_failed, newton_failed };

const char* to_string(StopReason r);

struct SweepPolicy {
    RealVector v;  // empty: all ones
    RealVector y;  // empty: all ones
    ApproxFn::Kind approx_kind = ApproxFn::Kind::tangent;
    Tolerances tols;
    double mu_floor = -1.0;  // < 0: default 1e-6 * width(range)
    int max_segments = 256;
    int newton_max_iter = 50;
};

struct SweepSegment {
    double center = 0.0;
    RealVector z;
    bool ok = false;
    std::string note;  // failure detail when not ok
    FixedCertificate fixed;
    ParamCertificate cert;
};

struct SweepResult {
    std::vector<SweepSegment> segments;
    // closures of the certified open parameter intervals, merged
    std::vector<std::pair<double, double>> covered;
    std::vector<std::pair<double, double>> gaps;
    StopReason stop_reason = StopReason::certification_failed;
};

SweepResult sweep(const System& sys, const Interval& s_range, double start_p,
                  const RealVector& start_guess, const SweepPolicy& policy = {});

}  // namespace paramex
