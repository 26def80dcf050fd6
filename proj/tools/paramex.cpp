#include <CLI11.hpp>

#include "paramex/cli.hpp"

namespace {

struct CommonArgs {
    std::vector<double> v, y;
    std::string report;
};

void add_common(CLI::App* cmd, paramex::RunConfig& cfg, CommonArgs& args) {
    cmd->add_option("problem", cfg.problem_path, "problem file (JSON)")->required();
    cmd->add_option("--v", args.v, "scaling vector v (defaults to ones)");
    cmd->add_option("--y", args.y, "parameter scaling vector y (defaults to ones)");
    cmd->add_option("--newton-tol", cfg.newton_tol, "Newton residual tolerance");
    cmd->add_option("--report", args.report, "write the JSON certificate report to this path");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rigorous inclusion/exclusion regions for parameter-dependent systems"};
    app.require_subcommand(1);

    paramex::RunConfig cfg;
    CommonArgs args;
    std::vector<double> at, range;
    std::string plot, approx, enclosure = "both";

    CLI::App* fixed = app.add_subcommand("fixed", "fixed-parameter regions around z");
    CLI::App* certify = app.add_subcommand("certify", "certify a feasible parameter box");
    CLI::App* sweep = app.add_subcommand("sweep", "chain certificates over the parameter range");
    CLI::App* regions_at = app.add_subcommand("regions-at", "regions at one parameter value");

    add_common(fixed, cfg, args);
    add_common(certify, cfg, args);
    add_common(sweep, cfg, args);
    add_common(regions_at, cfg, args);

    certify->add_option("--plot", plot, "write radius curves over nu as CSV");
    certify->add_option("--approx", approx, "tangent | secant | linear");
    certify->add_option("--enclosure", enclosure, "s_mu | s_ref | both")
        ->check(CLI::IsMember({"s_mu", "s_ref", "both"}));
    certify->add_option("--tol-eta", cfg.tol_eta, "relative bisection tolerance for eta");
    certify->add_option("--tol-sigma", cfg.tol_sigma, "relative bisection tolerance for sigma");

    sweep->add_option("--plot", plot, "write per-segment region boxes as CSV");
    sweep->add_option("--approx", approx, "tangent | secant");
    sweep->add_option("--mu-floor", cfg.mu_floor, "stop when mu falls below this");
    sweep->add_option("--range", range, "sweep range lo hi (defaults to S)")->expected(2);
    sweep->add_option("--tol-eta", cfg.tol_eta, "relative bisection tolerance for eta");
    sweep->add_option("--tol-sigma", cfg.tol_sigma, "relative bisection tolerance for sigma");

    regions_at->add_option("--at", at, "parameter value(s) s")->required();

    CLI11_PARSE(app, argc, argv);

    cfg.command = app.get_subcommands().front()->get_name();
    if (!args.v.empty()) cfg.v = args.v;
    if (!args.y.empty()) cfg.y = args.y;
    if (!args.report.empty()) cfg.report_path = args.report;
    if (!at.empty()) cfg.at_s = at;
    if (!plot.empty()) cfg.plot_path = plot;
    if (!approx.empty()) cfg.approx_override = approx;
    if (range.size() == 2) cfg.range = {range[0], range[1]};
    cfg.enclosure = enclosure;

    return paramex::run(cfg, std::cout, std::cerr);
}
