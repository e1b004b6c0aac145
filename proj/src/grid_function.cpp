#include "oversmooth/grid_function.hpp"

#include "oversmooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace oversmooth {

GridFunction::GridFunction(std::size_t n, double fill) : values_(n, fill) {
    if (n < 2) {
        throw DomainError("GridFunction needs at least 2 grid points");
    }
    check_finite();
}

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw DomainError("GridFunction needs at least 2 grid points");
    }
    check_finite();
}

double GridFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool GridFunction::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void GridFunction::check_finite() const {
    if (!all_finite()) {
        throw DomainError("GridFunction contains a non-finite value");
    }
}

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where) {
    if (a.size() != b.size()) {
        std::ostringstream msg;
        msg << where << ": grid size mismatch (" << a.size() << " vs " << b.size() << ")";
        throw DimensionError(msg.str());
    }
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_grid(*this, other, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_grid(*this, other, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] -= other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator*=(double s) noexcept {
    for (double& v : values_) {
        v *= s;
    }
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }
GridFunction operator*(GridFunction a, double s) { return a *= s; }

GridFunction hadamard(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "hadamard");
    GridFunction out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * b[i];
    }
    return out;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "sup_distance");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

void write_text(std::ostream& os, const GridFunction& u) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < u.size(); ++i) {
        os << u.x(i) << ' ' << u[i] << '\n';
    }
    os.precision(old);
}

GridFunction read_text(std::istream& is) {
    std::vector<double> xs;
    std::vector<double> vs;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream row(line);
        double x = 0.0;
        double v = 0.0;
        if (!(row >> x >> v)) {
            throw DomainError("read_text: malformed line '" + line + "'");
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    GridFunction u(std::move(vs));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - u.x(i)) > 1e-9) {
            throw DomainError("read_text: abscissae do not form the uniform grid of [0,1]");
        }
    }
    return u;
}

} // namespace oversmooth
