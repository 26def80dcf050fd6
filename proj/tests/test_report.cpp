#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracle.hpp"
#include "paramex/cli.hpp"

using namespace paramex;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tangent_problem() {
    return std::string(PARAMEX_PROBLEM_DIR) + "/circle_hyperbola_tangent.json";
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "paramex_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("interval JSON uses round-trip-exact endpoint pairs") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 500; ++t) {
        double lo = oracle::rand_in(rng, -1e3, 1e3);
        double hi = lo + std::fabs(oracle::rand_in(rng, 0.0, 1.0));
        Interval a(lo, hi);
        OrderedJson j = OrderedJson::parse(interval_json(a).dump());
        CHECK(interval_from_json(j) == a);
    }
    // infinities and empties survive
    Interval inf_iv(0.0, rnd::kInf);
    CHECK(interval_from_json(OrderedJson::parse(interval_json(inf_iv).dump())) == inf_iv);
    CHECK(interval_from_json(OrderedJson::parse(interval_json(Interval::empty()).dump()))
              .is_empty());
}

TEST_CASE("identical inputs give byte-identical reports") {
    auto dir = temp_dir();
    std::string r1 = (dir / "report1.json").string();
    std::string r2 = (dir / "report2.json").string();
    std::ostringstream sink;

    RunConfig cfg;
    cfg.command = "certify";
    cfg.problem_path = tangent_problem();
    cfg.report_path = r1;
    CHECK(run(cfg, sink, sink) == 0);
    cfg.report_path = r2;
    CHECK(run(cfg, sink, sink) == 0);
    CHECK(slurp(r1) == slurp(r2));
}

TEST_CASE("certify reports validate after a round trip") {
    auto dir = temp_dir();
    std::string path = (dir / "roundtrip.json").string();
    std::ostringstream sink;

    RunConfig cfg;
    cfg.command = "certify";
    cfg.problem_path = tangent_problem();
    cfg.report_path = path;
    REQUIRE(run(cfg, sink, sink) == 0);

    OrderedJson report = OrderedJson::parse(slurp(path));
    CHECK(report.at("parametric").at("status") == "ok");
    auto fixed_problems = validate_fixed_report(report.at("fixed"));
    for (const auto& p : fixed_problems) MESSAGE(p);
    CHECK(fixed_problems.empty());
    auto param_problems = validate_param_report(report.at("parametric"));
    for (const auto& p : param_problems) MESSAGE(p);
    CHECK(param_problems.empty());

    // values quoted in the report survive reparsing bit-for-bit
    OrderedJson again = OrderedJson::parse(report.dump(2));
    CHECK(box_from_json(again.at("parametric").at("s_tilde")) ==
          box_from_json(report.at("parametric").at("s_tilde")));

    // headline quantities land where expected
    double mu = report.at("parametric").at("mu").get<double>();
    CHECK(mu > 0.3430);
    CHECK(mu < 0.3437);
    Box s_tilde = box_from_json(report.at("parametric").at("s_tilde"));
    CHECK(s_tilde[0].lo() == doctest::Approx(0.6564).epsilon(1e-3));
    CHECK(s_tilde[0].hi() == doctest::Approx(1.3436).epsilon(1e-3));
}

TEST_CASE("fixed reports carry the exclusion box") {
    auto dir = temp_dir();
    std::string path = (dir / "fixed.json").string();
    std::ostringstream sink;
    RunConfig cfg;
    cfg.command = "fixed";
    cfg.problem_path = tangent_problem();
    cfg.report_path = path;
    REQUIRE(run(cfg, sink, sink) == 0);
    OrderedJson report = OrderedJson::parse(slurp(path));
    Box re = box_from_json(report.at("fixed").at("R_e"));
    CHECK(re[0].lo() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(re[0].hi() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(re[1].lo() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(re[1].hi() == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("certification failure writes a report naming the condition and exits 2") {
    auto dir = temp_dir();
    std::string prob = (dir / "cramped.json").string();
    std::string rep = (dir / "cramped_report.json").string();
    write_text_file(prob, R"({
      "n": 2, "p": 1,
      "equations": ["x1^2 + x2^2 - 26 + s1^2", "x1*x2 - 13 + s1"],
      "X": [[2.99, 3.01], [3.99, 4.01]],
      "S": [[0, 2]],
      "center_p": [1],
      "guess_z": [3.0, 4.0],
      "approx": {"kind": "tangent"}
    })");
    std::ostringstream out, err;
    RunConfig cfg;
    cfg.command = "certify";
    cfg.problem_path = prob;
    cfg.report_path = rep;
    CHECK(run(cfg, out, err) == 2);
    OrderedJson report = OrderedJson::parse(slurp(rep));
    CHECK(report.at("parametric").at("status") == "failed");
    CHECK(report.at("parametric").at("failing_condition") == "approx_leaves_domain");
}

TEST_CASE("input errors exit with status 1") {
    std::ostringstream out, err;
    RunConfig cfg;
    cfg.command = "certify";
    cfg.problem_path = "/nonexistent/problem.json";
    CHECK(run(cfg, out, err) == 1);

    auto dir = temp_dir();
    std::string prob = (dir / "badvar.json").string();
    write_text_file(prob, R"({
      "n": 1, "p": 0,
      "equations": ["x2"],
      "X": [[0, 1]], "S": [],
      "center_p": []
    })");
    cfg.problem_path = prob;
    CHECK(run(cfg, out, err) == 1);
}

TEST_CASE("lambda curve CSV has 201 sample rows with monotone scalar columns") {
    System sys = oracle::example_system();
    FixedCertificate fc = fixed_regions(sys, {3.0, 4.0}, {1.0}, std::nullopt, {1.0, 1.0}, sys.X);
    ApproxFn tan = make_approx(sys, {3.0, 4.0}, {1.0}, ApproxFn::Kind::tangent);
    ParamBounds pb = param_bounds(sys, fc, tan, sys.S, sys.X, {1.0});
    MuRoots r = mu_roots(pb);
    std::string csv = lambda_curve_csv(pb, fc, r.mu_bar);

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "nu,lambda_e,lambda_i,lambda_e_1,lambda_e_2,lambda_i_1,lambda_i_2");
    int rows = 0;
    double prev_e = 1e300, prev_i = -1.0;
    while (std::getline(lines, line)) {
        ++rows;
        double nu, le, li;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &nu, &le, &li) == 3);
        CHECK(le <= prev_e + 1e-15);
        CHECK(li >= prev_i - 1e-15);
        prev_e = le;
        prev_i = li;
    }
    CHECK(rows == 201);
}

TEST_CASE("sweep CSV carries one row per segment per component") {
    auto dir = temp_dir();
    std::string rep = (dir / "sweep.json").string();
    std::string csv_path = (dir / "sweep.csv").string();
    std::ostringstream out, err;
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.problem_path = tangent_problem();
    cfg.range = {0.7, 1.3};
    cfg.report_path = rep;
    cfg.plot_path = csv_path;
    REQUIRE(run(cfg, out, err) == 0);

    std::string csv = slurp(csv_path);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "segment,component,s_lo,s_hi,xhat_lo,xhat_hi,incl_lo,incl_hi,excl_lo,excl_hi");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    OrderedJson report = OrderedJson::parse(slurp(rep));
    int ok_segments = 0;
    for (const auto& seg : report.at("sweep").at("segments"))
        if (seg.at("ok").get<bool>()) ++ok_segments;
    CHECK(rows == 2 * ok_segments);
}

TEST_CASE("the enclosure convention flag selects the reported boxes") {
    auto dir = temp_dir();
    std::string rep = (dir / "conv.json").string();
    std::ostringstream out, err;
    RunConfig cfg;
    cfg.command = "certify";
    cfg.problem_path = tangent_problem();
    cfg.report_path = rep;
    cfg.enclosure = "s_ref";
    REQUIRE(run(cfg, out, err) == 0);
    OrderedJson report = OrderedJson::parse(slurp(rep));
    CHECK(report.at("parametric").at("enclosure").contains("over_s_ref"));
    CHECK(!report.at("parametric").at("enclosure").contains("over_s_tilde"));
}
