#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace oversmooth {

/**
 * Real function sampled on the uniform grid x_i = i/(n-1), i = 0..n-1, of [0,1].
 *
 * The norm is the discrete sup norm, i.e. the restriction of the L^inf norm
 * to the grid. Values are finite on construction; arithmetic keeps them so
 * unless the caller overflows.
 */
class GridFunction {
public:
    explicit GridFunction(std::size_t n, double fill = 0.0);
    explicit GridFunction(std::vector<double> values);

    template <typename F>
    static GridFunction sample(std::size_t n, F&& f) {
        GridFunction g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g.values_[i] = f(g.x(i));
        }
        g.check_finite();
        return g;
    }

    std::size_t size() const noexcept { return values_.size(); }
    double h() const noexcept { return 1.0 / static_cast<double>(values_.size() - 1); }
    double x(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(values_.size() - 1);
    }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    const std::vector<double>& data() const noexcept { return values_; }

    double sup_norm() const noexcept;
    bool all_finite() const noexcept;
    // Throws DomainError when a value is NaN or infinite.
    void check_finite() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double s) noexcept;

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);
GridFunction operator*(GridFunction a, double s);

// Pointwise product.
GridFunction hadamard(const GridFunction& a, const GridFunction& b);

double sup_distance(const GridFunction& a, const GridFunction& b);

// Throws DimensionError unless a and b live on the same grid.
void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where);

// Two-column text format "x value", one grid point per line, full precision.
void write_text(std::ostream& os, const GridFunction& u);
GridFunction read_text(std::istream& is);

} // namespace oversmooth
