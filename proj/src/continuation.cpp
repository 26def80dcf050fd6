#include "paramex/continuation.hpp"

#include <algorithm>
#include <cmath>

namespace paramex {

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::covered: return "covered";
        case StopReason::mu_below_floor: return "mu_below_floor";
        case StopReason::certification_failed: return "certification_failed";
        case StopReason::newton_failed: return "newton_failed";
    }
    return "certification_failed";
}

namespace {

struct OpenInterval {
    double lo, hi;
};

// Merge open intervals and convert to the closed covered/gap partition of
// [range.lo, range.hi]; open endpoints are excluded via one-ulp shifts.
void coverage(const Interval& range, std::vector<OpenInterval> opens,
              std::vector<std::pair<double, double>>& covered,
              std::vector<std::pair<double, double>>& gaps) {
    covered.clear();
    gaps.clear();
    std::sort(opens.begin(), opens.end(),
              [](const OpenInterval& a, const OpenInterval& b) { return a.lo < b.lo; });
    std::vector<OpenInterval> merged;
    for (const auto& o : opens) {
        if (o.hi <= o.lo) continue;
        if (!merged.empty() && o.lo < merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, o.hi);
        else
            merged.push_back(o);
    }
    for (const auto& o : merged) {
        double lo = o.lo < range.lo() ? range.lo() : rnd::next_up(o.lo);
        double hi = o.hi > range.hi() ? range.hi() : rnd::next_down(o.hi);
        lo = std::max(lo, range.lo());
        hi = std::min(hi, range.hi());
        if (lo <= hi) covered.emplace_back(lo, hi);
    }
    double cursor = range.lo();
    for (const auto& c : covered) {
        if (cursor < c.first) gaps.emplace_back(cursor, rnd::next_down(c.first));
        cursor = rnd::next_up(c.second);
        if (cursor > range.hi()) break;
    }
    if (cursor <= range.hi() && (covered.empty() || covered.back().second < range.hi()))
        gaps.emplace_back(cursor, range.hi());
}

}  // namespace

SweepResult sweep(const System& sys, const Interval& s_range, double start_p,
                  const RealVector& start_guess, const SweepPolicy& policy) {
    detail::require(sys.p == 1, "sweep supports scalar parameters only");
    if (!contains(s_range, start_p)) throw RegionDomainError("start parameter outside the range");
    if (!contains(sys.S[0], s_range)) throw RegionDomainError("sweep range leaves the domain S");

    RealVector v = policy.v.empty() ? RealVector(sys.n, 1.0) : policy.v;
    RealVector y = policy.y.empty() ? RealVector(1, 1.0) : policy.y;
    double mu_floor =
        policy.mu_floor >= 0.0 ? policy.mu_floor : 1e-6 * width(s_range);

    SweepResult result;
    std::vector<OpenInterval> opens;
    StopReason failure = StopReason::covered;
    bool failed = false;

    struct Prev {
        RealVector z;
        double p = 0.0;
        bool valid = false;
    };
    Prev prev;

    auto attempt = [&](double pc, const RealVector& seed) -> SweepSegment {
        SweepSegment seg;
        seg.center = pc;
        RealVector pvec{pc};
        NewtonResult nr;
        try {
            nr = newton_refine(sys, pvec, seed, policy.tols.newton_tol, policy.newton_max_iter);
        } catch (const SingularMatrixError& e) {
            seg.note = std::string("newton: ") + e.what();
            return seg;
        }
        if (!nr.converged) {
            seg.note = "newton did not converge";
            return seg;
        }
        seg.z = nr.z;
        try {
            seg.fixed = fixed_regions(sys, nr.z, pvec, std::nullopt, v, sys.X);
        } catch (const Error& e) {
            seg.note = std::string("fixed certificate: ") + e.what();
            return seg;
        }

        ApproxFn approx;
        try {
            if (policy.approx_kind == ApproxFn::Kind::secant && prev.valid) {
                approx = make_approx(sys, nr.z, pvec, ApproxFn::Kind::secant, prev.z,
                                     RealVector{prev.p});
            } else {
                approx = make_approx(sys, nr.z, pvec, ApproxFn::Kind::tangent);
            }
        } catch (const Error& e) {
            seg.note = std::string("approximation: ") + e.what();
            return seg;
        }

        double radius = width(s_range);
        for (int shrink = 0; shrink < 7; ++shrink, radius *= 0.5) {
            // reference box may extend past the requested range (inside S) so
            // that certified open boxes can straddle the range endpoints
            Box sref(1);
            sref[0] = intersect(Interval(rnd::sub_down(pc, radius), rnd::add_up(pc, radius)),
                                sys.S[0]);
            ParamCertificate cert;
            try {
                cert = certify_parameter_box(sys, seg.fixed, approx, sref, sys.X, y, policy.tols);
            } catch (const Error& e) {
                seg.note = std::string("certificate: ") + e.what();
                return seg;
            }
            if (cert.status == CertifyStatus::ok && cert.mu >= mu_floor) {
                seg.cert = std::move(cert);
                seg.ok = true;
                seg.note.clear();
                return seg;
            }
            seg.cert = std::move(cert);
            seg.note = seg.cert.status == CertifyStatus::ok ? "mu below floor"
                                                            : seg.cert.failing_condition;
        }
        return seg;
    };

    auto record = [&](SweepSegment&& seg) -> bool {
        bool ok = seg.ok;
        if (ok) {
            // claimed set is interior(s_tilde) intersected with the closed
            // sref; the one-ulp widening of the sref clamp encodes closedness
            const Interval& st = seg.cert.s_tilde[0];
            const Interval& sr = seg.cert.bounds.sref[0];
            opens.push_back({std::max(st.lo(), rnd::next_down(sr.lo())),
                             std::min(st.hi(), rnd::next_up(sr.hi()))});
            prev.z = seg.z;
            prev.p = seg.center;
            prev.valid = true;
        }
        result.segments.push_back(std::move(seg));
        return ok;
    };

    auto classify = [&](const SweepSegment& seg) {
        if (seg.note.rfind("newton", 0) == 0) return StopReason::newton_failed;
        if (seg.note == "mu below floor") return StopReason::mu_below_floor;
        return StopReason::certification_failed;
    };

    // center segment
    SweepSegment first = attempt(start_p, start_guess);
    if (!record(std::move(first))) {
        failed = true;
        failure = classify(result.segments.back());
    } else {
        const ParamCertificate& c0 = result.segments.back().cert;
        double right = c0.s_tilde[0].hi();
        double left = c0.s_tilde[0].lo();
        ApproxFn seed_approx = c0.approx;

        // rightward
        while (!failed && right < s_range.hi() && int(result.segments.size()) < policy.max_segments) {
            RealVector seed = seed_approx.eval_point(RealVector{right});
            SweepSegment seg = attempt(right, seed);
            if (!record(std::move(seg))) {
                failed = true;
                failure = classify(result.segments.back());
                break;
            }
            const ParamCertificate& c = result.segments.back().cert;
            seed_approx = c.approx;
            double new_right = c.s_tilde[0].hi();
            if (new_right <= right) {  // no forward progress
                failed = true;
                failure = StopReason::mu_below_floor;
                break;
            }
            right = new_right;
        }

        // leftward
        prev.valid = false;
        seed_approx = result.segments.front().cert.approx;
        while (!failed && left > s_range.lo() && int(result.segments.size()) < policy.max_segments) {
            RealVector seed = seed_approx.eval_point(RealVector{left});
            SweepSegment seg = attempt(left, seed);
            if (!record(std::move(seg))) {
                failed = true;
                failure = classify(result.segments.back());
                break;
            }
            const ParamCertificate& c = result.segments.back().cert;
            seed_approx = c.approx;
            double new_left = c.s_tilde[0].lo();
            if (new_left >= left) {
                failed = true;
                failure = StopReason::mu_below_floor;
                break;
            }
            left = new_left;
        }

        if (!failed && int(result.segments.size()) >= policy.max_segments &&
            (right < s_range.hi() || left > s_range.lo())) {
            failed = true;
            failure = StopReason::certification_failed;
            result.segments.back().note = "segment budget exhausted";
        }
    }

    coverage(s_range, opens, result.covered, result.gaps);
    result.stop_reason = result.gaps.empty() ? StopReason::covered : failure;
    if (!result.gaps.empty() && failure == StopReason::covered)
        result.stop_reason = StopReason::certification_failed;
    return result;
}

}  // namespace paramex
