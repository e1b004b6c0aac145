#include "oversmooth/banach_scale.hpp"

#include "oversmooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

namespace oversmooth {

ScaleOperator::ScaleOperator(std::size_t n) : n_(n), h_(0.0) {
    if (n < 2) {
        throw DomainError("ScaleOperator needs at least 2 grid points");
    }
    h_ = 1.0 / static_cast<double>(n - 1);
}

void ScaleOperator::require_grid(const GridFunction& u, const char* where) const {
    if (u.size() != n_) {
        std::ostringstream msg;
        msg << where << ": grid function has " << u.size() << " points, operator has " << n_;
        throw DimensionError(msg.str());
    }
}

GridFunction ScaleOperator::apply(const GridFunction& u) const {
    require_grid(u, "apply_G");
    GridFunction out(n_);
    // running = u_0/2 + u_1 + ... + u_{i-1}
    double running = 0.5 * u[0];
    for (std::size_t i = 1; i < n_; ++i) {
        out[i] = h_ * (running + 0.5 * u[i]);
        running += u[i];
    }
    return out;
}

GridFunction ScaleOperator::apply_transpose(const GridFunction& w) const {
    require_grid(w, "apply_transpose");
    GridFunction out(n_);
    double tail = 0.0;  // w_{j+1} + ... + w_{n-1}
    for (std::size_t j = n_ - 1; j >= 1; --j) {
        out[j] = h_ * (0.5 * w[j] + tail);
        tail += w[j];
    }
    out[0] = 0.5 * h_ * tail;
    return out;
}

GridFunction ScaleOperator::resolve(double beta, const GridFunction& f) const {
    if (!(beta > 0.0)) {
        throw DomainError("resolvent_solve: beta must be positive");
    }
    require_grid(f, "resolvent_solve");
    GridFunction v(n_);
    v[0] = f[0] / beta;
    double running = 0.5 * v[0];
    const double diag = beta + 0.5 * h_;
    for (std::size_t i = 1; i < n_; ++i) {
        v[i] = (f[i] - h_ * running) / diag;
        running += v[i];
    }
    return v;
}

void QuadratureConfig::validate() const {
    if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) {
        throw DomainError("QuadratureConfig: tail_tol must lie in (0, 1)");
    }
    if (!(step > 0.0) || !(q_step > 0.0)) {
        throw DomainError("QuadratureConfig: steps must be positive");
    }
    if (fixed_window && !(t_min < 0.0 && 0.0 < t_max)) {
        throw DomainError("QuadratureConfig: need t_min < 0 < t_max");
    }
    if (!(omega >= 0.0)) {
        throw DomainError("QuadratureConfig: omega must be non-negative");
    }
}

std::pair<double, double> QuadratureConfig::window(double q) const {
    if (fixed_window) {
        return {t_min, t_max};
    }
    const double q_eff = std::clamp(q, 0.1, 0.9);
    const double log_tol = std::log(tail_tol);
    return {log_tol / q_eff, -log_tol / (1.0 - q_eff)};
}

GridFunction apply_G(const ScaleOperator& op, const GridFunction& u) { return op.apply(u); }

GridFunction resolvent_solve(const ScaleOperator& op, double beta, const GridFunction& f) {
    return op.resolve(beta, f);
}

namespace {

// G^q u for 0 < q < 1 via (sin(pi q)/pi) int s^{q-1} (G + sI)^{-1} G u ds, s = e^t.
GridFunction balakrishnan(const ScaleOperator& op, double q, const GridFunction& u,
                          const QuadratureConfig& cfg) {
    const auto [t_lo, t_hi] = cfg.window(q);
    const auto intervals = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / cfg.step));
    const double dt = (t_hi - t_lo) / static_cast<double>(intervals);

    const GridFunction gu = op.apply(u);
    const std::size_t n = op.size();
    std::vector<double> acc(n, 0.0);
    std::vector<double> first(n, 0.0);
    std::vector<double> last(n, 0.0);

    for (std::size_t k = 0; k <= intervals; ++k) {
        const double t = t_lo + dt * static_cast<double>(k);
        const double scale = std::exp(q * t);
        const GridFunction v = op.resolve(std::exp(t), gu);
        const double w = (k == 0 || k == intervals) ? 0.5 * dt : dt;
        for (std::size_t i = 0; i < n; ++i) {
            acc[i] += w * scale * v[i];
        }
        if (k == 0) {
            for (std::size_t i = 0; i < n; ++i) first[i] = scale * v[i];
        }
        if (k == intervals) {
            for (std::size_t i = 0; i < n; ++i) last[i] = scale * v[i];
        }
    }

    if (cfg.tail_closure) {
        // Integrand ~ e^{qt} L0 u as t -> -inf and ~ e^{(q-1)t} Gu as t -> +inf.
        for (std::size_t i = 0; i < n; ++i) {
            acc[i] += first[i] / q + last[i] / (1.0 - q);
        }
    }

    const double c = std::sin(std::numbers::pi * q) / std::numbers::pi;
    for (double& a : acc) {
        a *= c;
        if (!std::isfinite(a)) {
            throw QuadratureError("fractional_power: Balakrishnan quadrature is not finite");
        }
    }
    return GridFunction(std::move(acc));
}

// Fractional parts within this distance of an integer are treated as integers.
constexpr double kIntegerSnap = 1e-12;

} // namespace

GridFunction fractional_power(const ScaleOperator& op, double p, const GridFunction& u,
                              const QuadratureConfig& cfg) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw DomainError("fractional_power: order must be a finite non-negative number");
    }
    if (u.size() != op.size()) {
        throw DimensionError("fractional_power: grid size mismatch");
    }
    cfg.validate();

    double whole = std::floor(p);
    double frac = p - whole;
    if (frac > 1.0 - kIntegerSnap) {
        whole += 1.0;
        frac = 0.0;
    }
    GridFunction out = u;
    for (int k = 0; k < static_cast<int>(whole); ++k) {
        out = op.apply(out);
    }
    if (frac > kIntegerSnap) {
        out = balakrishnan(op, frac, out, cfg);
    }
    return out;
}

SmoothElement make_smooth_element(const ScaleOperator& op, GridFunction witness, double order,
                                  const QuadratureConfig& cfg) {
    GridFunction value = fractional_power(op, order, witness, cfg);
    return SmoothElement{std::move(witness), order, std::move(value)};
}

double tau_norm(const SmoothElement& e) { return e.witness.sup_norm(); }

GridFunction log_smooth_element(const ScaleOperator& op, const GridFunction& w, double lambda,
                                const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(lambda > cfg.omega)) {
        throw DomainError("log_smooth_element: lambda must exceed the semigroup growth bound");
    }
    if (w.size() != op.size()) {
        throw DimensionError("log_smooth_element: grid size mismatch");
    }
    const double horizon = -std::log(cfg.tail_tol) / (lambda - cfg.omega);
    const auto intervals = static_cast<std::size_t>(std::ceil(horizon / cfg.q_step));
    const double dq = cfg.q_step;

    // G^{frac} w per distinct fractional part, then whole powers by repeated G.
    std::map<long long, std::vector<GridFunction>> powers;
    auto power = [&](double q) -> const GridFunction& {
        double whole = std::floor(q + kIntegerSnap);
        double frac = std::max(0.0, q - whole);
        const long long key = std::llround(frac * 1e9);
        auto& chain = powers[key];
        if (chain.empty()) {
            chain.push_back(fractional_power(op, frac, w, cfg));
        }
        while (chain.size() <= static_cast<std::size_t>(whole)) {
            chain.push_back(op.apply(chain.back()));
        }
        return chain[static_cast<std::size_t>(whole)];
    };

    GridFunction u(op.size());
    for (std::size_t k = 0; k <= intervals; ++k) {
        const double q = dq * static_cast<double>(k);
        const double weight = ((k == 0 || k == intervals) ? 0.5 * dq : dq) * std::exp(-lambda * q);
        const GridFunction& gq = power(q);
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] += weight * gq[i];
        }
    }
    if (!u.all_finite()) {
        throw QuadratureError("log_smooth_element: quadrature is not finite");
    }
    return u;
}

InterpolationReport interpolation_check(const ScaleOperator& op, double p, double q,
                                        const GridFunction& u, const QuadratureConfig& cfg) {
    if (!(0.0 < p && p < q && q <= 1.0)) {
        throw DomainError("interpolation_check: need 0 < p < q <= 1");
    }
    InterpolationReport r;
    r.constant = 2.0 * (op.kappa_star() + 1.0);
    const double norm_u = u.sup_norm();
    r.lhs = fractional_power(op, p, u, cfg).sup_norm();
    const double norm_q = fractional_power(op, q, u, cfg).sup_norm();
    const double theta = p / q;
    r.rhs = r.constant * std::pow(norm_q, theta) * std::pow(norm_u, 1.0 - theta);
    r.holds = r.lhs <= r.rhs + cfg.tail_tol * norm_u;
    return r;
}

} // namespace oversmooth
