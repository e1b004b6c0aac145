#include "oversmooth/loglog_fit.hpp"

#include "oversmooth/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace oversmooth {

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("fit_loglog: x and y differ in length");
    }
    if (x.size() < 3) {
        throw DomainError("fit_loglog: need at least 3 points");
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    std::vector<double> lx(x.size());
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw DomainError("fit_loglog: all values must be positive and finite");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw DomainError("fit_loglog: abscissae are all equal");
    }
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.points = static_cast<int>(x.size());
    return fit;
}

LogLogFit fit_loglog_above_floor(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("fit_loglog: x and y differ in length");
    }
    const double floor = 10.0 * std::numeric_limits<double>::epsilon();
    std::vector<double> kx;
    std::vector<double> ky;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] >= floor) {
            kx.push_back(x[i]);
            ky.push_back(y[i]);
        }
    }
    return fit_loglog(kx, ky);
}

} // namespace oversmooth
