#include "oversmooth/exp_volterra.hpp"

#include "oversmooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace oversmooth {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

GridFunction exp_pointwise(const GridFunction& g) {
    GridFunction out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out[i] = std::exp(g[i]);
        if (!std::isfinite(out[i])) {
            throw RangeError("forward: exp(Gu) overflows");
        }
    }
    return out;
}

} // namespace

GridFunction forward(const ScaleOperator& op, const GridFunction& u) { return exp_pointwise(op.apply(u)); }

GridFunction derivative_apply(const ScaleOperator& op, const GridFunction& u, const GridFunction& h) {
    require_same_grid(u, h, "derivative_apply");
    return hadamard(forward(op, u), op.apply(h));
}

ExpVolterraProblem::ExpVolterraProblem(ScaleOperator op, GridFunction u_true)
    : op_(op), u_true_(std::move(u_true)), f_true_(forward(op_, u_true_)), c1_(0.0), c2_(0.0) {
    const double g = op_.apply(u_true_).sup_norm();
    c2_ = std::exp(g);
    c1_ = 1.0 / c2_;
}

GridFunction ExpVolterraProblem::adjoint_derivative(const GridFunction& u, const GridFunction& fu,
                                                    const GridFunction& w) const {
    require_same_grid(u, w, "adjoint_derivative");
    return op_.apply_transpose(hadamard(fu, w));
}

GridFunction make_truth(const TruthSpec& spec, const ScaleOperator& op, const QuadratureConfig& cfg) {
    const GridFunction w = spec.witness.value_or(GridFunction(op.size(), 1.0));
    switch (spec.regime) {
    case TruthRegime::hoelder:
        if (!(spec.p > 0.0 && spec.p <= 1.0)) {
            throw DomainError("make_truth: hoelder order must lie in (0, 1]");
        }
        return fractional_power(op, spec.p, w, cfg);
    case TruthRegime::low_order:
        return log_smooth_element(op, w, spec.lambda, cfg);
    case TruthRegime::generic_continuous:
        return GridFunction::sample(op.size(), [](double x) { return x > 0.0 ? 1.0 / (1.0 - std::log(x)) : 0.0; });
    }
    throw DomainError("make_truth: unknown regime");
}

GridFunction make_noise(std::size_t n, const NoiseSpec& spec) {
    if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) {
        throw DomainError("add_noise: delta must be a finite non-negative number");
    }
    std::mt19937_64 rng(spec.seed);
    GridFunction zeta(n);
    switch (spec.kind) {
    case NoiseKind::random_sign: {
        std::bernoulli_distribution coin(0.5);
        for (std::size_t i = 0; i < n; ++i) {
            zeta[i] = coin(rng) ? 1.0 : -1.0;
        }
        break;
    }
    case NoiseKind::smooth_bump: {
        if (!(spec.bump_width > 0.0)) {
            throw DomainError("add_noise: bump width must be positive");
        }
        const double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
        // Shift the exponent so the grid point nearest the center is exactly 1.
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            nearest = std::min(nearest, std::abs(zeta.x(i) - spec.bump_center));
        }
        const double two_w2 = 2.0 * spec.bump_width * spec.bump_width;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = zeta.x(i) - spec.bump_center;
            zeta[i] = sign * std::exp(-(d * d - nearest * nearest) / two_w2);
        }
        break;
    }
    }
    const double norm = zeta.sup_norm();
    for (std::size_t i = 0; i < n; ++i) {
        zeta[i] = spec.delta * (zeta[i] / norm);
    }
    return zeta;
}

GridFunction add_noise(const GridFunction& f_true, const NoiseSpec& spec) {
    return f_true + make_noise(f_true.size(), spec);
}

NoiseKind parse_noise_kind(const std::string& name) {
    if (name == "random_sign") return NoiseKind::random_sign;
    if (name == "smooth_bump") return NoiseKind::smooth_bump;
    throw UsageError("unknown noise kind '" + name + "'");
}

std::string to_string(NoiseKind kind) {
    return kind == NoiseKind::random_sign ? "random_sign" : "smooth_bump";
}

NonlinearityReport nonlinearity_check(const ExpVolterraProblem& prob, double rho, double eps,
                                      int n_samples, std::uint64_t seed,
                                      const NonlinearitySampler& sampler) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw DomainError("nonlinearity_check: rho must lie in (0, 1)");
    }
    if (!(eps > 0.0 && eps < prob.c1())) {
        throw DomainError("nonlinearity_check: eps must lie in (0, c1)");
    }
    const ScaleOperator& op = prob.op();
    const std::size_t n = op.size();
    const GridFunction& f0 = prob.f_true();

    NonlinearityReport rep;
    rep.rho = rho;
    rep.eps = eps;
    rep.worst_margin = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> level(0.0, 1.0);

    for (int k = 0; k < n_samples; ++k) {
        GridFunction u = prob.u_true();
        if (!(sampler.include_truth && k == 0)) {
            GridFunction z(n);
            const double shift = uni(rng);
            for (std::size_t i = 0; i < n; ++i) {
                z[i] = uni(rng) + shift;
            }
            const double gz = op.apply(op.apply(z)).sup_norm();
            const double target = sampler.theta_max * (1.0 - level(rng));  // in (0, theta_max]
            if (gz > 0.0) {
                z *= target / gz;
            }
            u += op.apply(z);
        }
        const GridFunction fu = forward(op, u);
        const GridFunction theta = op.apply(u - prob.u_true());
        const GridFunction delta = fu - f0;

        NonlinearitySample s;
        s.index = k;
        s.theta_norm = theta.sup_norm();
        s.delta_norm = delta.sup_norm();
        double margin = std::numeric_limits<double>::infinity();

        for (std::size_t i = 0; i < n; ++i) {
            const double tol = 64.0 * kEps * (std::abs(fu[i]) + std::abs(f0[i]));
            const double slack = std::abs(theta[i]) * std::abs(delta[i]) - std::abs(delta[i] - f0[i] * theta[i]);
            if (slack < -tol) {
                s.prep = false;
            }
            margin = std::min(margin, slack);
        }
        const double tol = 64.0 * kEps * (fu.sup_norm() + f0.sup_norm());
        if (s.theta_norm <= rho) {
            s.a_applies = true;
            const double slack = s.theta_norm - (1.0 - rho) * s.delta_norm / prob.c2();
            s.ineq_a = slack >= -tol;
            margin = std::min(margin, slack);
        }
        if (s.delta_norm <= prob.c1() - eps) {
            s.b_applies = true;
            const double slack = s.delta_norm - eps * s.theta_norm;
            s.ineq_b = slack >= -tol;
            margin = std::min(margin, slack);
        }
        s.margin = margin;

        rep.prep_violations += s.prep ? 0 : 1;
        rep.a_violations += s.ineq_a ? 0 : 1;
        rep.b_violations += s.ineq_b ? 0 : 1;
        rep.a_applicable += s.a_applies ? 1 : 0;
        rep.b_applicable += s.b_applies ? 1 : 0;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        rep.samples.push_back(s);
    }
    if (rep.samples.empty()) {
        rep.worst_margin = 0.0;
    }
    return rep;
}

void write_nonlinearity_csv(std::ostream& os, const NonlinearityReport& report) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "sample,theta_norm,delta_norm,ineq_prep,ineq_a,ineq_b,margin\n";
    for (const auto& s : report.samples) {
        os << s.index << ',' << s.theta_norm << ',' << s.delta_norm << ',' << (s.prep ? 1 : 0) << ','
           << (s.ineq_a ? 1 : 0) << ',' << (s.ineq_b ? 1 : 0) << ',' << s.margin << '\n';
    }
    os.precision(old);
}

} // namespace oversmooth
