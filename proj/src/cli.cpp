#include "paramex/cli.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>

namespace paramex {

namespace {

std::string fmt_interval(const Interval& a) {
    std::ostringstream ss;
    ss.precision(10);
    if (a.is_empty()) return "(empty)";
    ss << "[" << a.lo() << ", " << a.hi() << "]";
    return ss.str();
}

std::string fmt_box(const Box& b) {
    std::string s;
    for (int i = 0; i < b.dim(); ++i) {
        if (i) s += " x ";
        s += fmt_interval(b[i]);
    }
    return s;
}

std::string fmt_point(const RealVector& v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) ss << ", ";
        ss << v[i];
    }
    ss << ")";
    return ss.str();
}

ApproxFn build_approx(const System& sys, const Problem& prob, const RunConfig& cfg,
                      const RealVector& z, const RealVector& p) {
    ApproxSpec spec = prob.approx;
    if (cfg.approx_override) {
        if (*cfg.approx_override == "tangent") {
            spec.kind = ApproxFn::Kind::tangent;
        } else if (*cfg.approx_override == "secant") {
            spec.kind = ApproxFn::Kind::secant;
        } else if (*cfg.approx_override == "linear") {
            spec.kind = ApproxFn::Kind::custom_linear;
        } else {
            throw ParseError("unknown approximation '" + *cfg.approx_override + "'");
        }
    }
    switch (spec.kind) {
        case ApproxFn::Kind::tangent: return make_approx(sys, z, p, ApproxFn::Kind::tangent);
        case ApproxFn::Kind::secant:
            if (!spec.x1 || !spec.s1)
                throw ParseError("secant approximation needs 'x1'/'s1' in the problem file");
            return make_approx(sys, z, p, ApproxFn::Kind::secant, spec.x1, spec.s1);
        case ApproxFn::Kind::custom_linear:
            if (!spec.theta)
                throw ParseError("linear approximation needs 'theta' in the problem file");
            return make_linear_approx(z, p, *spec.theta);
    }
    throw ParseError("unknown approximation kind");
}

struct ReportSink {
    OrderedJson root;
    explicit ReportSink(const Problem& prob, const std::string& command) {
        root["tool"] = "paramex";
        root["command"] = command;
        if (!prob.name.empty()) root["problem_name"] = prob.name;
        root["problem"] = OrderedJson::parse(prob.source_text);
    }
    void write(const std::optional<std::string>& path) const {
        if (path) write_text_file(*path, root.dump(2) + "\n");
    }
};

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Problem prob;
    try {
        prob = load_problem_file(cfg.problem_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const System& sys = prob.sys;
    RealVector v = cfg.v ? *cfg.v : (prob.v ? *prob.v : RealVector(sys.n, 1.0));
    RealVector y = cfg.y ? *cfg.y : (prob.y ? *prob.y : RealVector(sys.p, 1.0));
    Tolerances tols;
    tols.newton_tol = cfg.newton_tol;
    tols.tol_eta = cfg.tol_eta;
    tols.tol_sigma = cfg.tol_sigma;

    try {
        if (cfg.command == "sweep") {
            if (sys.p != 1) {
                err << "error: sweep requires p = 1\n";
                return 1;
            }
            Interval range = cfg.range ? Interval(cfg.range->first, cfg.range->second) : sys.S[0];
            RealVector guess =
                prob.guess_z ? *prob.guess_z : midpoint(sys.X);
            SweepPolicy policy;
            policy.v = v;
            policy.y = y;
            policy.tols = tols;
            policy.mu_floor = cfg.mu_floor;
            if (cfg.approx_override && *cfg.approx_override == "secant")
                policy.approx_kind = ApproxFn::Kind::secant;
            else if (prob.approx.kind == ApproxFn::Kind::secant && !cfg.approx_override)
                policy.approx_kind = ApproxFn::Kind::secant;

            SweepResult res = sweep(sys, range, prob.center_p[0], guess, policy);

            ReportSink sink(prob, "sweep");
            sink.root["range"] = interval_json(range);
            sink.root["sweep"] = sweep_json(res);
            sink.write(cfg.report_path);
            if (cfg.plot_path) write_text_file(*cfg.plot_path, sweep_csv(res));

            out << "sweep over " << fmt_interval(range) << ": " << to_string(res.stop_reason)
                << ", " << res.segments.size() << " segment(s)\n";
            for (const auto& pr : res.covered)
                out << "  covered [" << std::setprecision(10) << pr.first << ", " << pr.second
                    << "]\n";
            for (const auto& pr : res.gaps)
                out << "  gap     [" << std::setprecision(10) << pr.first << ", " << pr.second
                    << "]\n";
            return res.stop_reason == StopReason::covered ? 0 : 2;
        }

        // common to fixed / certify / regions-at: refine z at center_p
        RealVector x0 = prob.guess_z ? *prob.guess_z : midpoint(sys.X);
        NewtonResult nr = newton_refine(sys, prob.center_p, x0, tols.newton_tol, 50);
        if (!nr.converged) {
            err << "error: Newton refinement did not converge (residual " << nr.residual_norm
                << ")\n";
            return 2;
        }

        ReportSink sink(prob, cfg.command);
        sink.root["newton"] = OrderedJson{{"z", real_vector_json(nr.z)},
                                          {"residual_norm", nr.residual_norm},
                                          {"iterations", nr.iterations}};

        FixedCertificate fc;
        try {
            fc = fixed_regions(sys, nr.z, prob.center_p, std::nullopt, v, sys.X);
        } catch (const Error& e) {
            sink.root["fixed"] = OrderedJson{{"status", "failed"}, {"reason", e.what()}};
            sink.write(cfg.report_path);
            err << "fixed certificate failed: " << e.what() << "\n";
            return 2;
        }
        sink.root["fixed"] = fixed_certificate_json(fc);
        sink.root["fixed"]["status"] = "ok";

        if (cfg.command == "fixed") {
            sink.write(cfg.report_path);
            out << "fixed certificate at p = " << fmt_point(prob.center_p) << "\n";
            out << "  z        = " << fmt_point(nr.z) << "\n";
            out << "  lambda_e = " << fmt_interval(fc.lam.lambda_e) << "\n";
            out << "  lambda_i = " << fmt_interval(fc.lam.lambda_i) << "\n";
            out << "  R_e      = " << fmt_box(fc.R_e) << "\n";
            out << "  R_i      = " << fmt_box(fc.R_i) << "\n";
            return 0;
        }

        ApproxFn approx = build_approx(sys, prob, cfg, nr.z, prob.center_p);

        if (cfg.command == "regions-at") {
            if (!cfg.at_s || int(cfg.at_s->size()) != sys.p) {
                err << "error: regions-at requires --at with " << sys.p << " value(s)\n";
                return 1;
            }
            ParamBounds bounds = param_bounds(sys, fc, approx, sys.S, sys.X, y);
            EnclosureAtS enc = regions_at_s(sys, fc, approx, *cfg.at_s, bounds);
            sink.root["regions_at"] = enclosure_at_s_json(enc);
            sink.write(cfg.report_path);
            out << "regions at s = " << fmt_point(*cfg.at_s) << ": "
                << (enc.feasible ? "feasible" : "infeasible (" + enc.failing_condition + ")")
                << "\n";
            if (enc.feasible) {
                out << "  R_i = " << fmt_box(enc.R_i) << "\n";
                out << "  R_e = " << fmt_box(enc.R_e) << "\n";
            }
            return enc.feasible ? 0 : 2;
        }

        if (cfg.command == "certify") {
            ParamCertificate cert = certify_parameter_box(sys, fc, approx, sys.S, sys.X, y, tols);
            sink.root["parametric"] = param_certificate_json(cert, fc);
            if (cert.status == CertifyStatus::ok && cfg.enclosure != "both") {
                OrderedJson& encl = sink.root["parametric"]["enclosure"];
                if (cfg.enclosure == "s_mu") encl.erase("over_s_ref");
                if (cfg.enclosure == "s_ref") encl.erase("over_s_tilde");
            }
            sink.write(cfg.report_path);
            if (cfg.plot_path && cert.status == CertifyStatus::ok) {
                double span = std::isinf(cert.roots.mu_bar) ? cert.search_ub
                                                            : cert.roots.mu_bar;
                write_text_file(*cfg.plot_path, lambda_curve_csv(cert.bounds, fc, span));
            }

            if (cert.status != CertifyStatus::ok) {
                err << "certification failed: " << cert.failing_condition << "\n";
                return 2;
            }
            out << "certified parameter box (" << to_string(approx.kind) << ")\n";
            out << "  mu       = " << std::setprecision(10) << cert.mu << "\n";
            out << "  s_tilde  = " << fmt_box(cert.s_tilde) << "\n";
            out << "  lambda_e = " << fmt_interval(cert.at_mu.lambda_e) << "\n";
            out << "  lambda_i = " << fmt_interval(cert.at_mu.lambda_i) << "\n";
            if (cfg.enclosure != "s_ref")
                out << "  enclosure over s_tilde = " << fmt_box(cert.enclosure_s_tilde) << "\n";
            if (cfg.enclosure != "s_mu")
                out << "  enclosure over S       = " << fmt_box(cert.enclosure_s_ref) << "\n";
            return 0;
        }

        err << "error: unknown command '" << cfg.command << "'\n";
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace paramex
