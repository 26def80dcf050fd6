#include "paramex/problem.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace paramex {

namespace {

using nlohmann::json;

RealVector parse_number_vector(const json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError("'" + what + "' must be an array of numbers");
    RealVector v;
    v.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) throw ParseError("'" + what + "' must contain numbers only");
        v.push_back(e.get<double>());
    }
    return v;
}

// Numbers, or constant-expression strings such as "sqrt(13)".
RealVector parse_const_vector(const json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError("'" + what + "' must be an array");
    RealVector v;
    v.reserve(j.size());
    for (const auto& e : j) {
        if (e.is_number()) {
            v.push_back(e.get<double>());
        } else if (e.is_string()) {
            ExprPtr c = parse_expression(e.get<std::string>(), 0, 0);
            Interval val = eval_box(c, Box(0), Box(0));
            v.push_back(midpoint(val));
        } else {
            throw ParseError("'" + what + "' entries must be numbers or constant strings");
        }
    }
    return v;
}

Box parse_box(const json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError("'" + what + "' must be an array of [lo,hi] pairs");
    Box b(int(j.size()));
    int i = 0;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ParseError("'" + what + "' entries must be [lo,hi] number pairs");
        double lo = e[0].get<double>();
        double hi = e[1].get<double>();
        if (lo > hi) throw ParseError("'" + what + "' entry has lo > hi");
        b[i++] = Interval(lo, hi);
    }
    return b;
}

ApproxSpec parse_approx(const json& j) {
    ApproxSpec a;
    if (!j.is_object()) throw ParseError("'approx' must be an object");
    std::string kind = j.value("kind", "tangent");
    if (kind == "tangent") {
        a.kind = ApproxFn::Kind::tangent;
    } else if (kind == "secant") {
        a.kind = ApproxFn::Kind::secant;
        if (!j.contains("x1") || !j.contains("s1"))
            throw ParseError("secant approximation requires 'x1' and 's1'");
        a.x1 = parse_const_vector(j.at("x1"), "approx.x1");
        a.s1 = parse_const_vector(j.at("s1"), "approx.s1");
    } else if (kind == "linear") {
        a.kind = ApproxFn::Kind::custom_linear;
        if (!j.contains("theta")) throw ParseError("linear approximation requires 'theta'");
        const json& t = j.at("theta");
        if (!t.is_array() || t.empty()) throw ParseError("'approx.theta' must be a matrix");
        int rows = int(t.size());
        int cols = int(t[0].size());
        RealMatrix theta(rows, cols);
        for (int i = 0; i < rows; ++i) {
            RealVector row = parse_const_vector(t[i], "approx.theta");
            if (int(row.size()) != cols) throw ParseError("'approx.theta' rows differ in length");
            for (int c = 0; c < cols; ++c) theta.at(i, c) = row[c];
        }
        a.theta = theta;
    } else {
        throw ParseError("unknown approximation kind '" + kind + "'");
    }
    return a;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("problem file is not valid JSON: ") + e.what());
    }
}

System system_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("p") || !j.contains("equations") || !j.contains("X") ||
        !j.contains("S"))
        throw ParseError("problem requires 'n', 'p', 'equations', 'X' and 'S'");
    int n = j.at("n").get<int>();
    int p = j.at("p").get<int>();
    std::vector<ExprPtr> eqs;
    const json& eq_json = j.at("equations");
    if (eq_json.is_string()) {
        eqs = parse_equations(eq_json.get<std::string>(), n, p);
    } else if (eq_json.is_array()) {
        for (const auto& e : eq_json) {
            if (!e.is_string()) throw ParseError("'equations' must contain strings");
            auto part = parse_equations(e.get<std::string>(), n, p);
            eqs.insert(eqs.end(), part.begin(), part.end());
        }
    } else {
        throw ParseError("'equations' must be a string or an array of strings");
    }
    return make_system(n, p, std::move(eqs), parse_box(j.at("X"), "X"), parse_box(j.at("S"), "S"));
}

}  // namespace

System parse_system(const std::string& json_text) {
    return system_from_json(parse_json(json_text));
}

Problem load_problem(const std::string& json_text) {
    json j = parse_json(json_text);
    Problem prob;
    prob.sys = system_from_json(j);
    prob.source_text = json_text;
    prob.name = j.value("name", "");

    if (!j.contains("center_p")) throw ParseError("problem requires 'center_p'");
    prob.center_p = parse_number_vector(j.at("center_p"), "center_p");
    if (int(prob.center_p.size()) != prob.sys.p)
        throw ParseError("'center_p' must have length p");
    if (!contains(prob.sys.S, prob.center_p))
        throw ParseError("'center_p' must lie inside S");

    if (j.contains("guess_z")) {
        prob.guess_z = parse_number_vector(j.at("guess_z"), "guess_z");
        if (int(prob.guess_z->size()) != prob.sys.n)
            throw ParseError("'guess_z' must have length n");
    }
    if (j.contains("approx")) prob.approx = parse_approx(j.at("approx"));
    if (j.contains("v")) {
        prob.v = parse_number_vector(j.at("v"), "v");
        if (int(prob.v->size()) != prob.sys.n) throw ParseError("'v' must have length n");
    }
    if (j.contains("y")) {
        prob.y = parse_number_vector(j.at("y"), "y");
        if (int(prob.y->size()) != prob.sys.p) throw ParseError("'y' must have length p");
    }
    return prob;
}

Problem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_problem(ss.str());
}

}  // namespace paramex
