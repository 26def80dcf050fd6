#include "paramex/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace paramex {

namespace {

OrderedJson bound_json(double v) {
    if (std::isinf(v)) return v > 0 ? OrderedJson("inf") : OrderedJson("-inf");
    return OrderedJson(v);
}

double bound_from_json(const OrderedJson& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf") return rnd::kInf;
        if (s == "-inf") return -rnd::kInf;
        throw ParseError("bad interval endpoint '" + s + "'");
    }
    return j.get<double>();
}

std::string csv_num(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

}  // namespace

OrderedJson interval_json(const Interval& a) {
    if (a.is_empty()) return OrderedJson("empty");
    return OrderedJson::array({bound_json(a.lo()), bound_json(a.hi())});
}

Interval interval_from_json(const OrderedJson& j) {
    if (j.is_string() && j.get<std::string>() == "empty") return Interval::empty();
    if (!j.is_array() || j.size() != 2) throw ParseError("interval must be a [lo,hi] pair");
    return Interval(bound_from_json(j[0]), bound_from_json(j[1]));
}

OrderedJson box_json(const Box& b) {
    OrderedJson out = OrderedJson::array();
    for (int i = 0; i < b.dim(); ++i) out.push_back(interval_json(b[i]));
    return out;
}

Box box_from_json(const OrderedJson& j) {
    if (!j.is_array()) throw ParseError("box must be an array of intervals");
    Box b(int(j.size()));
    for (size_t i = 0; i < j.size(); ++i) b[int(i)] = interval_from_json(j[i]);
    return b;
}

OrderedJson real_vector_json(const RealVector& v) {
    OrderedJson out = OrderedJson::array();
    for (double x : v) out.push_back(x);
    return out;
}

OrderedJson real_matrix_json(const RealMatrix& m) {
    OrderedJson out = OrderedJson::array();
    for (int i = 0; i < m.rows; ++i) {
        OrderedJson row = OrderedJson::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
        out.push_back(row);
    }
    return out;
}

OrderedJson real_tensor_json(const RealTensor3& t) {
    OrderedJson out = OrderedJson::array();
    for (int i = 0; i < t.d1; ++i) {
        OrderedJson plane = OrderedJson::array();
        for (int j = 0; j < t.d2; ++j) {
            OrderedJson row = OrderedJson::array();
            for (int k = 0; k < t.d3; ++k) row.push_back(t.at(i, j, k));
            plane.push_back(row);
        }
        out.push_back(plane);
    }
    return out;
}

OrderedJson fixed_certificate_json(const FixedCertificate& fc) {
    OrderedJson j;
    j["z"] = real_vector_json(fc.z);
    j["p"] = real_vector_json(fc.p);
    j["C"] = real_matrix_json(fc.C);
    j["v"] = real_vector_json(fc.v);
    j["xbox"] = box_json(fc.xbox);
    j["b_bar"] = real_vector_json(fc.bounds.b_bar);
    j["B0"] = real_matrix_json(fc.bounds.B0);
    j["B_bar"] = real_tensor_json(fc.bounds.B_bar);
    j["w"] = box_json(fc.lam.w);
    j["a"] = box_json(fc.lam.a);
    j["D"] = box_json(fc.lam.D);
    j["lambda_e_j"] = box_json(fc.lam.lambda_e_j);
    j["lambda_i_j"] = box_json(fc.lam.lambda_i_j);
    j["lambda_e"] = interval_json(fc.lam.lambda_e);
    j["lambda_i"] = interval_json(fc.lam.lambda_i);
    j["R_i"] = box_json(fc.R_i);
    j["R_e"] = box_json(fc.R_e);
    return j;
}

OrderedJson param_certificate_json(const ParamCertificate& cert, const FixedCertificate& fc) {
    OrderedJson j;
    j["approx"] = OrderedJson{{"kind", to_string(cert.approx.kind)},
                              {"z", real_vector_json(cert.approx.z)},
                              {"p", real_vector_json(cert.approx.p)},
                              {"theta", real_matrix_json(cert.approx.theta)}};
    if (cert.approx.secant_x1) j["approx"]["x1"] = real_vector_json(*cert.approx.secant_x1);
    if (cert.approx.secant_s1) j["approx"]["s1"] = real_vector_json(*cert.approx.secant_s1);
    j["status"] = cert.status == CertifyStatus::ok ? "ok" : "failed";
    if (cert.status != CertifyStatus::ok) {
        j["failing_condition"] = cert.failing_condition;
    }
    j["y"] = real_vector_json(cert.bounds.y);
    j["fixed_b_bar"] = real_vector_json(fc.bounds.b_bar);
    j["fixed_w"] = box_json(fc.lam.w);
    j["sref"] = box_json(cert.bounds.sref);
    j["xref"] = box_json(cert.bounds.xref);
    j["G0_bar"] = real_matrix_json(cert.bounds.G0_bar);
    j["A_bar"] = real_tensor_json(cert.bounds.A_bar);
    j["B2_bar"] = real_tensor_json(cert.bounds.B2_bar);
    j["a_bar"] = box_json(cert.bounds.a_bar);
    j["alpha"] = box_json(cert.bounds.alpha);
    j["beta"] = box_json(cert.bounds.beta);
    j["gamma"] = box_json(cert.bounds.gamma);
    j["mu_lower_j"] = box_json(cert.roots.mu_lower_j);
    j["mu_upper_j"] = box_json(cert.roots.mu_upper_j);
    j["mu_bar"] = bound_json(cert.roots.mu_bar);
    j["search_ub"] = bound_json(cert.search_ub);
    j["eta"] = cert.eta;
    j["sigma"] = cert.sigma;
    j["mu"] = cert.mu;
    if (cert.status == CertifyStatus::ok) {
        j["s_tilde"] = box_json(cert.s_tilde);
        j["lambda_e_mu"] = interval_json(cert.at_mu.lambda_e);
        j["lambda_i_mu"] = interval_json(cert.at_mu.lambda_i);
        j["lambda_e_mu_j"] = box_json(cert.at_mu.lambda_e_j);
        j["lambda_i_mu_j"] = box_json(cert.at_mu.lambda_i_j);
        // two evaluation conventions for the solution enclosure: over the
        // certified box s_tilde (tight) and over the full reference box sref
        j["enclosure"] = OrderedJson{{"over_s_tilde", box_json(cert.enclosure_s_tilde)},
                                     {"over_s_ref", box_json(cert.enclosure_s_ref)}};
    }
    return j;
}

OrderedJson enclosure_at_s_json(const EnclosureAtS& e) {
    OrderedJson j;
    j["s"] = real_vector_json(e.s);
    j["feasible"] = e.feasible;
    if (!e.feasible) j["failing_condition"] = e.failing_condition;
    j["x_hat"] = box_json(e.x_hat);
    if (e.feasible) {
        j["b_frak"] = box_json(e.b_frak);
        j["w"] = box_json(e.w_s);
        j["a"] = box_json(e.a_s);
        j["D"] = box_json(e.D_s);
        j["lambda_e"] = interval_json(e.lambda_e);
        j["lambda_i"] = interval_json(e.lambda_i);
        j["R_i"] = box_json(e.R_i);
        j["R_e"] = box_json(e.R_e);
    }
    return j;
}

OrderedJson sweep_json(const SweepResult& r) {
    OrderedJson j;
    j["stop_reason"] = to_string(r.stop_reason);
    OrderedJson segs = OrderedJson::array();
    for (const auto& seg : r.segments) {
        OrderedJson s;
        s["center"] = seg.center;
        s["ok"] = seg.ok;
        if (!seg.note.empty()) s["note"] = seg.note;
        if (!seg.z.empty()) s["z"] = real_vector_json(seg.z);
        if (seg.ok) {
            s["mu"] = seg.cert.mu;
            s["s_tilde"] = box_json(seg.cert.s_tilde);
            s["fixed"] = fixed_certificate_json(seg.fixed);
            s["certificate"] = param_certificate_json(seg.cert, seg.fixed);
        }
        segs.push_back(s);
    }
    j["segments"] = segs;
    auto pairs = [](const std::vector<std::pair<double, double>>& v) {
        OrderedJson out = OrderedJson::array();
        for (const auto& pr : v) out.push_back(OrderedJson::array({pr.first, pr.second}));
        return out;
    };
    j["covered"] = pairs(r.covered);
    j["gaps"] = pairs(r.gaps);
    return j;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

bool intersects(const Interval& a, const Interval& b) { return !intersect(a, b).is_empty(); }

RealVector vector_from_json(const OrderedJson& j) {
    RealVector v;
    for (const auto& e : j) v.push_back(e.get<double>());
    return v;
}

RealMatrix matrix_from_json(const OrderedJson& j) {
    RealMatrix m(int(j.size()), j.empty() ? 0 : int(j[0].size()));
    for (int i = 0; i < m.rows; ++i)
        for (int c = 0; c < m.cols; ++c) m.at(i, c) = j[i][c].get<double>();
    return m;
}

RealTensor3 tensor_from_json(const OrderedJson& j) {
    int d1 = int(j.size());
    int d2 = d1 ? int(j[0].size()) : 0;
    int d3 = d2 ? int(j[0][0].size()) : 0;
    RealTensor3 t(d1, d2, d3);
    for (int i = 0; i < d1; ++i)
        for (int a = 0; a < d2; ++a)
            for (int b = 0; b < d3; ++b) t.at(i, a, b) = j[i][a][b].get<double>();
    return t;
}

}  // namespace

std::vector<std::string> validate_fixed_report(const OrderedJson& j) {
    std::vector<std::string> problems;
    auto complain = [&](const std::string& msg) { problems.push_back(msg); };
    try {
        RealVector v = vector_from_json(j.at("v"));
        RealVector b_bar = vector_from_json(j.at("b_bar"));
        RealMatrix B0 = matrix_from_json(j.at("B0"));
        RealTensor3 B_bar = tensor_from_json(j.at("B_bar"));
        Box w = box_from_json(j.at("w"));
        Box a = box_from_json(j.at("a"));
        Box D = box_from_json(j.at("D"));
        Box xbox = box_from_json(j.at("xbox"));
        Box R_i = box_from_json(j.at("R_i"));
        Interval lambda_e = interval_from_json(j.at("lambda_e"));
        Interval lambda_i = interval_from_json(j.at("lambda_i"));
        int n = int(v.size());

        Box a_check = quad_form(v, to_intervals(B_bar), v);
        for (int i = 0; i < n; ++i) {
            Interval w_check(v[i]);
            for (int k = 0; k < n; ++k)
                w_check = w_check - Interval(B0.at(i, k)) * Interval(v[k]);
            if (!intersects(w_check, w[i])) complain("stored w inconsistent with B0 and v");
            if (!intersects(a_check[i], a[i])) complain("stored a inconsistent with B_bar and v");
            Interval d_check = pow_int(w[i], 2) - Interval(4.0) * a[i] * Interval(b_bar[i]);
            if (!intersects(d_check, D[i])) complain("stored D inconsistent with w, a, b_bar");
            if (!(D[i].lo() > 0.0)) complain("discriminant not positive");
        }
        if (!(lambda_e.lo() > lambda_i.hi())) complain("radius ordering violated");
        if (!contains(xbox, R_i)) complain("inclusion region leaves the box");
    } catch (const std::exception& e) {
        complain(std::string("malformed fixed certificate: ") + e.what());
    }
    return problems;
}

std::vector<std::string> validate_param_report(const OrderedJson& j) {
    std::vector<std::string> problems;
    auto complain = [&](const std::string& msg) { problems.push_back(msg); };
    try {
        if (j.at("status").get<std::string>() != "ok") {
            if (!j.contains("failing_condition")) complain("failed certificate lacks a condition");
            return problems;
        }
        double mu = j.at("mu").get<double>();
        double eta = j.at("eta").get<double>();
        double sigma = j.at("sigma").get<double>();
        if (!(mu > 0.0)) complain("mu not positive");
        if (mu > eta || mu > sigma) complain("mu exceeds eta or sigma");
        Box s_tilde = box_from_json(j.at("s_tilde"));
        RealVector p = vector_from_json(j.at("approx").at("p"));
        RealVector y = vector_from_json(j.at("y"));
        for (size_t k = 0; k < p.size(); ++k) {
            Interval expect = Interval(p[k]) + Interval(-mu, mu) * Interval(y[k]);
            if (!contains(expect, s_tilde[int(k)]))
                complain("s_tilde wider than p +/- mu y");
        }
        Interval le = interval_from_json(j.at("lambda_e_mu"));
        Interval li = interval_from_json(j.at("lambda_i_mu"));
        if (!(le.lo() > li.hi())) complain("radius ordering violated at mu");
        Box alpha = box_from_json(j.at("alpha"));
        Box beta = box_from_json(j.at("beta"));
        Box gamma = box_from_json(j.at("gamma"));
        Box a_bar = box_from_json(j.at("a_bar"));
        Box g0y = to_intervals(matrix_from_json(j.at("G0_bar"))) * Box(y);
        RealVector b_bar = vector_from_json(j.at("fixed_b_bar"));
        Box w = box_from_json(j.at("fixed_w"));
        for (int k = 0; k < alpha.dim(); ++k) {
            Interval beta_check =
                alpha[k] * w[k] + Interval(2.0) * a_bar[k] * g0y[k];
            if (!intersects(beta_check, beta[k])) complain("stored beta inconsistent");
            Interval gamma_check =
                pow_int(w[k], 2) - Interval(4.0) * a_bar[k] * Interval(b_bar[k]);
            if (!intersects(gamma_check, gamma[k])) complain("stored gamma inconsistent");
        }
    } catch (const std::exception& e) {
        complain(std::string("malformed certificate: ") + e.what());
    }
    return problems;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

std::string lambda_curve_csv(const ParamBounds& bounds, const FixedCertificate& fc, double ub) {
    std::ostringstream ss;
    int n = bounds.alpha.dim();
    ss << "nu,lambda_e,lambda_i";
    for (int jc = 1; jc <= n; ++jc) ss << ",lambda_e_" << jc;
    for (int jc = 1; jc <= n; ++jc) ss << ",lambda_i_" << jc;
    ss << "\n";
    const int samples = 201;
    for (int k = 0; k < samples; ++k) {
        double nu = ub * double(k) / double(samples - 1);
        LambdaAt la = lambda_at(nu, bounds, fc);
        ss << csv_num(nu);
        if (!la.defined) {
            ss << ",,";
            for (int jc = 0; jc < 2 * n; ++jc) ss << ",";
        } else {
            ss << "," << csv_num(la.lambda_e.lo()) << "," << csv_num(la.lambda_i.hi());
            for (int jc = 0; jc < n; ++jc) ss << "," << csv_num(la.lambda_e_j[jc].lo());
            for (int jc = 0; jc < n; ++jc) ss << "," << csv_num(la.lambda_i_j[jc].hi());
        }
        ss << "\n";
    }
    return ss.str();
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream ss;
    ss << "segment,component,s_lo,s_hi,xhat_lo,xhat_hi,incl_lo,incl_hi,excl_lo,excl_hi\n";
    int idx = 0;
    for (const auto& seg : r.segments) {
        if (!seg.ok) {
            ++idx;
            continue;
        }
        const ParamCertificate& c = seg.cert;
        Box xh = c.approx.eval_box(c.s_tilde_outer);
        double li = c.at_mu.lambda_i.hi();
        double le = c.at_mu.lambda_e.lo();
        int n = xh.dim();
        for (int jc = 0; jc < n; ++jc) {
            double vj = seg.fixed.v[jc];
            Interval incl = xh[jc] + Interval(-li, li) * Interval(vj);
            Interval excl_lo = xh[jc] - Interval(le) * Interval(vj);
            Interval excl_hi = xh[jc] + Interval(le) * Interval(vj);
            ss << idx << "," << (jc + 1) << "," << csv_num(c.s_tilde[0].lo()) << ","
               << csv_num(c.s_tilde[0].hi()) << "," << csv_num(xh[jc].lo()) << ","
               << csv_num(xh[jc].hi()) << "," << csv_num(incl.lo()) << "," << csv_num(incl.hi())
               << "," << csv_num(excl_lo.lo()) << "," << csv_num(excl_hi.hi()) << "\n";
        }
        ++idx;
    }
    return ss.str();
}

}  // namespace paramex
