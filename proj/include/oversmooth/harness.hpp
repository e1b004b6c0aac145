#pragma once

#include "oversmooth/banach_scale.hpp"
#include "oversmooth/exp_volterra.hpp"
#include "oversmooth/loglog_fit.hpp"
#include "oversmooth/tikhonov.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace oversmooth {

const char* version() noexcept;

// 8 geometric points from 1e-1 down to 10^{-4.5}.
std::vector<double> default_delta_list();

struct ExperimentConfig {
    std::size_t grid_n = 256;
    AlphaRule regime = AlphaRule::hoelder;
    double p = 1.0;
    double r = 1.0;
    double a = 1.0;
    int m = 2;
    double alpha_c = 1.0;
    std::vector<double> delta_list = default_delta_list();
    std::uint64_t seed = 1;
    // Bump noise of width bump_width * beta, beta = alpha^kappa, centered at bump_center.
    NoiseKind noise = NoiseKind::smooth_bump;
    double bump_width = 1.0;
    double bump_center = 0.5;
    bool warm_start = true;
    double slope_tolerance = 0.12;
    double ratio_threshold = 5.0;  // low-order boundedness statistic
    QuadratureConfig quad;
    std::string out_dir;  // empty: do not write files

    void validate() const;
    nlohmann::json to_json() const;
};

struct RateRow {
    double delta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double error_sup = 0.0;
    double residual = 0.0;
    double penalty = 0.0;
    double objective = 0.0;
    double certificate_bound = 0.0;
    bool certified = false;
    std::string start;
};

struct RateReport {
    ExperimentConfig config;
    std::vector<RateRow> rows;
    LogLogFit fit;                // certified rows only
    double expected_slope = 0.0;  // hoelder only
    double slope_tolerance = 0.0;
    double statistic = 0.0;       // low-order: max/min of error log(1/delta)
    double loo_max_change = 0.0;  // largest slope change from dropping one row
    bool monotone = false;        // errors strictly decreasing after the first row
    bool all_certified = false;
    bool pass = false;
};

// Throws StudyError when more than half of the rows are uncertified.
RateReport run_rate_study(const ExperimentConfig& cfg);

LogLogFit fit_slope(const std::vector<std::pair<double, double>>& points);

void write_rate_csv(std::ostream& os, const RateReport& report);
nlohmann::json rate_report_json(const RateReport& report, const std::string& timestamp);

// ISO-8601 UTC; honours SOURCE_DATE_EPOCH so repeated runs can be byte-identical.
std::string report_timestamp();

// Riemann-Liouville integral (1/Gamma(p)) int_0^x (x - xi)^{p-1} u(xi) dxi by
// tanh-sinh quadrature after removing the kernel singularity.
double riemann_liouville(double p, double x, const std::function<double(double)>& u);

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::vector<std::string> lines;
};

struct SuiteSummary {
    std::vector<SuiteResult> results;
    bool all_passed() const noexcept;
};

const std::vector<std::string>& suite_names();

// Empty names runs every suite. Unknown names -> UsageError.
SuiteSummary run_suite(const std::vector<std::string>& names, const ExperimentConfig& cfg);

SuiteResult fracpow_suite(const ExperimentConfig& cfg);
SuiteResult decay_suite(const ExperimentConfig& cfg);
SuiteResult aux_rates_suite(const ExperimentConfig& cfg);
SuiteResult nonlinearity_suite(const ExperimentConfig& cfg);
SuiteResult rate_study_suite(const ExperimentConfig& cfg);

} // namespace oversmooth
