#pragma once

#include "oversmooth/grid_function.hpp"

#include <cstddef>
#include <utility>

namespace oversmooth {

/**
 * Discretized Volterra generator (Gu)(x) = int_0^x u(xi) dxi on the uniform grid.
 *
 * The action is the composite trapezoid rule: lower triangular, zero first row,
 * diagonal h/2. The operator is of positive type, ||(G + beta I)^{-1}|| <= kappa/beta
 * in the sup norm with kappa = 2, and the resolvent is a forward substitution.
 * Immutable; safe to share between threads.
 */
class ScaleOperator {
public:
    static constexpr double kKappaStar = 2.0;

    explicit ScaleOperator(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double kappa_star() const noexcept { return kKappaStar; }

    GridFunction apply(const GridFunction& u) const;
    // Transpose of the trapezoid matrix; used for gradients.
    GridFunction apply_transpose(const GridFunction& w) const;
    // Solves (G + beta I) v = f.
    GridFunction resolve(double beta, const GridFunction& f) const;

private:
    void require_grid(const GridFunction& u, const char* where) const;

    std::size_t n_;
    double h_;
};

/**
 * Quadrature settings for the log-substituted Balakrishnan integral and for
 * the Bochner integral behind log-smooth elements.
 *
 * Unless fixed explicitly, the truncation window for fractional order q is
 * t_min = log(tail_tol)/q_eff, t_max = -log(tail_tol)/(1 - q_eff) with
 * q_eff = clamp(q, 0.1, 0.9). The exponential tails beyond the window are
 * added in closed form when tail_closure is set.
 */
struct QuadratureConfig {
    double tail_tol = 1e-6;
    double step = 0.05;
    double t_min = 0.0;  // used only when fixed_window is set
    double t_max = 0.0;
    bool fixed_window = false;
    bool tail_closure = true;

    // Semigroup growth bound and q-step for log_smooth_element.
    double omega = 0.5;
    double q_step = 0.05;

    void validate() const;
    std::pair<double, double> window(double q) const;
};

// G^order applied to a witness; the tau-norm of value is the sup norm of witness.
struct SmoothElement {
    GridFunction witness;
    double order = 0.0;
    GridFunction value;
};

struct InterpolationReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    bool holds = false;
};

GridFunction apply_G(const ScaleOperator& op, const GridFunction& u);

// beta <= 0 -> DomainError.
GridFunction resolvent_solve(const ScaleOperator& op, double beta, const GridFunction& f);

// G^p u; G^p = G^{p - floor(p)} G^{floor(p)} with the fractional part evaluated by
// the Balakrishnan integral.
GridFunction fractional_power(const ScaleOperator& op, double p, const GridFunction& u,
                              const QuadratureConfig& cfg = {});

SmoothElement make_smooth_element(const ScaleOperator& op, GridFunction witness, double order,
                                  const QuadratureConfig& cfg = {});

// Never inverts G: the norm is read off the witness.
double tau_norm(const SmoothElement& e);

// u = int_0^Q exp(-lambda q) G^q w dq, an element of D(log G). Requires lambda > cfg.omega.
GridFunction log_smooth_element(const ScaleOperator& op, const GridFunction& w, double lambda = 2.0,
                                const QuadratureConfig& cfg = {});

// ||G^p u|| <= c ||G^q u||^{p/q} ||u||^{1-p/q} with c = 2(kappa + 1), 0 < p < q <= 1.
InterpolationReport interpolation_check(const ScaleOperator& op, double p, double q,
                                        const GridFunction& u, const QuadratureConfig& cfg = {});

} // namespace oversmooth
