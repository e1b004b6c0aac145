#pragma once

// Reference computations that share no code with the library.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// Riemann-Liouville integrals of order p > 0 in closed form or as a power series.
inline double rl_one(double p, double x) { return std::pow(x, p) / std::tgamma(p + 1.0); }

inline double rl_x(double p, double x) { return std::pow(x, p + 1.0) / std::tgamma(p + 2.0); }

// sin(pi x) = sum (-1)^k (pi x)^{2k+1} / (2k+1)!, integrated term by term.
inline double rl_sin_pi(double p, double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double e = 2.0 * k + 1.0;
        const double logt = e * std::log(std::numbers::pi) + (e + p) * std::log(x) - std::lgamma(e + p + 1.0);
        const double term = std::exp(logt);
        sum += (k % 2 == 0 ? term : -term);
        if (term < 1e-18) {
            break;
        }
    }
    return sum;
}

// Composite trapezoid matrix of the running integral on n points.
inline Eigen::MatrixXd trapezoid_matrix(std::size_t n) {
    const double h = 1.0 / static_cast<double>(n - 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 1; i < n; ++i) {
        g(i, 0) = h / 2;
        for (std::size_t j = 1; j < i; ++j) {
            g(i, j) = h;
        }
        g(i, i) = h / 2;
    }
    return g;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline double inf_norm(const Eigen::MatrixXd& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

// beta^m (G + beta I)^{-m} as a dense matrix.
inline Eigen::MatrixXd companion_dense(const Eigen::MatrixXd& g, double beta, int m) {
    const auto n = g.rows();
    const Eigen::MatrixXd shifted = g + beta * Eigen::MatrixXd::Identity(n, n);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < m; ++k) {
        s = beta * lu.solve(s);
    }
    return s;
}

// int_0^inf exp(-lambda q) x^q / Gamma(q + 1) dq.
inline double log_smooth_of_one(double x, double lambda) {
    if (x <= 0.0) {
        return 0.0;
    }
    auto f = [&](double q) { return std::exp(-lambda * q + q * std::log(x) - std::lgamma(q + 1.0)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                                                         15, 1e-13);
}

// Plain least squares slope of log y against log x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

inline std::vector<double> random_unit(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> v(n);
    double m = 0.0;
    for (double& x : v) {
        x = uni(rng);
        m = std::max(m, std::abs(x));
    }
    for (double& x : v) {
        x /= m;
    }
    return v;
}

} // namespace oracle
