#pragma once

// Command-line front end.  Exit codes: 0 success, 1 input/usage error,
// 2 certification failed (the report is still written with the failing
// condition).

#include <optional>
#include <string>

#include "paramex/report.hpp"

namespace paramex {

struct RunConfig {
    std::string command;  // fixed | certify | sweep | regions-at
    std::string problem_path;
    std::optional<RealVector> v;
    std::optional<RealVector> y;
    double newton_tol = 1e-12;
    double tol_eta = 1e-9;
    double tol_sigma = 1e-9;
    double mu_floor = -1.0;  // sweep only; < 0 means 1e-6 * width(range)
    std::optional<std::string> report_path;
    std::optional<std::string> plot_path;
    std::optional<std::string> approx_override;  // tangent | secant | linear
    std::string enclosure = "both";              // s_mu | s_ref | both
    std::optional<RealVector> at_s;              // regions-at target
    std::optional<std::pair<double, double>> range;  // sweep range override
};

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace paramex
