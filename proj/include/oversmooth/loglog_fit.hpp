#pragma once

#include <span>

namespace oversmooth {

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points = 0;
};

// Ordinary least squares on (log x, log y). Needs >= 3 points, all positive.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

// Same, after dropping pairs whose y is below 10 machine epsilons.
LogLogFit fit_loglog_above_floor(std::span<const double> x, std::span<const double> y);

} // namespace oversmooth
