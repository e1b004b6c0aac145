#include "oversmooth/tikhonov.hpp"

#include "oversmooth/errors.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace oversmooth {

TikhonovProblem TikhonovProblem::make(const ForwardOperator& forward, GridFunction f_delta, double delta,
                                      GridFunction u_bar_witness, double r, double a, double alpha) {
    GridFunction u_bar = forward.op().apply(u_bar_witness);
    TikhonovProblem prob{&forward, std::move(f_delta), delta, std::move(u_bar_witness), std::move(u_bar), r, a, alpha};
    prob.validate();
    return prob;
}

void TikhonovProblem::validate() const {
    if (forward == nullptr) {
        throw DomainError("TikhonovProblem: no forward operator");
    }
    if (!(alpha > 0.0) || !(r > 0.0) || !(a > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("TikhonovProblem: alpha, r and a must be positive");
    }
    if (!(delta >= 0.0)) {
        throw DomainError("TikhonovProblem: delta must be non-negative");
    }
    const std::size_t n = forward->op().size();
    if (f_delta.size() != n || u_bar_witness.size() != n || u_bar.size() != n) {
        throw DimensionError("TikhonovProblem: grid sizes differ from the operator");
    }
}

double eval_T(const TikhonovProblem& prob, const GridFunction& u, const GridFunction& v_witness) {
    require_same_grid(u, prob.u_bar, "eval_T");
    require_same_grid(v_witness, prob.u_bar, "eval_T");
    const GridFunction rebuilt = prob.u_bar + prob.forward->op().apply(v_witness);
    if (sup_distance(u, rebuilt) > 1e-10 * std::max(1.0, u.sup_norm())) {
        throw DomainError("eval_T: u is not u_bar + G v_witness");
    }
    const double residual = (prob.forward->apply(u) - prob.f_delta).sup_norm();
    return std::pow(residual, prob.r) + prob.alpha * std::pow(v_witness.sup_norm(), prob.r);
}

double kappa(double r, double a) { return 1.0 / (r * (1.0 + a)); }

double choose_alpha(const ParamChoice& pc, double delta, double r, double a) {
    if (!(delta > 0.0)) {
        throw DomainError("choose_alpha: delta must be positive");
    }
    if (!(pc.C > 0.0) || !(r > 0.0) || !(a > 0.0)) {
        throw DomainError("choose_alpha: C, r and a must be positive");
    }
    switch (pc.regime) {
    case AlphaRule::hoelder:
        if (!(pc.p > 0.0 && pc.p <= 1.0)) {
            throw DomainError("choose_alpha: hoelder order must lie in (0, 1]");
        }
        return pc.C * std::pow(delta, r * (1.0 + a) / (pc.p + a));
    case AlphaRule::low_order:
        return pc.C * delta;
    case AlphaRule::none:
        return pc.C * std::pow(delta, r);
    }
    throw DomainError("choose_alpha: unknown regime");
}

AlphaRule parse_alpha_rule(const std::string& name) {
    if (name == "none") return AlphaRule::none;
    if (name == "hoelder") return AlphaRule::hoelder;
    if (name == "low-order" || name == "low_order") return AlphaRule::low_order;
    throw UsageError("unknown regime '" + name + "'");
}

std::string to_string(AlphaRule rule) {
    switch (rule) {
    case AlphaRule::none: return "none";
    case AlphaRule::hoelder: return "hoelder";
    case AlphaRule::low_order: return "low-order";
    }
    return "?";
}

double smooth_max_abs(std::span<const double> z, double tau, std::span<double> weights) {
    double m = 0.0;
    for (double zi : z) {
        m = std::max(m, std::abs(zi));
    }
    // Shifted by max |z| so the largest exponent is 0.
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double up = std::exp((z[i] - m) / tau);
        const double down = std::exp((-z[i] - m) / tau);
        sum += up + down;
        if (!weights.empty()) {
            weights[i] = up - down;
        }
    }
    if (!weights.empty()) {
        for (double& w : weights) {
            w /= sum;
        }
    }
    return m + tau * std::log(sum);
}

SmoothedObjective::SmoothedObjective(const TikhonovProblem& prob, double tau_residual, double tau_penalty)
    : prob_(&prob), tau_res_(tau_residual), tau_pen_(tau_penalty) {
    if (!(tau_residual > 0.0) || !(tau_penalty > 0.0)) {
        throw DomainError("SmoothedObjective: temperatures must be positive");
    }
}

double SmoothedObjective::evaluate(std::span<const double> v, std::span<double> gradient) const {
    const TikhonovProblem& p = *prob_;
    const ScaleOperator& op = p.forward->op();
    const std::size_t n = size();
    GridFunction vg(std::vector<double>(v.begin(), v.end()));
    const GridFunction u = p.u_bar + op.apply(vg);
    const GridFunction fu = p.forward->apply(u);
    const GridFunction z = fu - p.f_delta;

    const bool want_grad = !gradient.empty();
    GridFunction wz(n);
    GridFunction wv(n);
    const double res = smooth_max_abs(z.values(), tau_res_, want_grad ? wz.values() : std::span<double>{});
    const double pen = smooth_max_abs(vg.values(), tau_pen_, want_grad ? wv.values() : std::span<double>{});
    const double value = std::pow(res, p.r) + p.alpha * std::pow(pen, p.r);

    if (want_grad) {
        const double cr = p.r * std::pow(res, p.r - 1.0);
        const double cp = p.alpha * p.r * std::pow(pen, p.r - 1.0);
        const GridFunction back = op.apply_transpose(p.forward->adjoint_derivative(u, fu, wz));
        for (std::size_t i = 0; i < n; ++i) {
            gradient[i] = cr * back[i] + cp * wv[i];
        }
    }
    return value;
}

namespace {

constexpr double kCertificateSlack = 1e-9;

class CeresObjective final : public ceres::FirstOrderFunction {
public:
    explicit CeresObjective(const SmoothedObjective& obj) : obj_(obj) {}

    bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
        const std::size_t n = obj_.size();
        try {
            cost[0] = obj_.evaluate({parameters, n}, gradient ? std::span<double>{gradient, n} : std::span<double>{});
        } catch (const RangeError&) {
            return false;
        }
        return std::isfinite(cost[0]);
    }
    int NumParameters() const override { return static_cast<int>(obj_.size()); }

private:
    const SmoothedObjective& obj_;
};

struct Candidate {
    GridFunction v;
    double objective;
    int iterations;
};

double true_objective(const TikhonovProblem& prob, const GridFunction& v) {
    const GridFunction u = prob.u_bar + prob.forward->op().apply(v);
    try {
        const double residual = (prob.forward->apply(u) - prob.f_delta).sup_norm();
        return std::pow(residual, prob.r) + prob.alpha * std::pow(v.sup_norm(), prob.r);
    } catch (const RangeError&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Anneals the smoothing temperature; each stage is an L-BFGS solve of the surrogate.
Candidate descend(const TikhonovProblem& prob, GridFunction v, const MinimizeOptions& opts) {
    const ScaleOperator& op = prob.forward->op();
    int iterations = 0;
    Candidate best{v, true_objective(prob, v), 0};
    for (double t : opts.temperatures) {
        double res_scale = 0.0;
        try {
            res_scale = (prob.forward->apply(prob.u_bar + op.apply(v)) - prob.f_delta).sup_norm();
        } catch (const RangeError&) {
            break;
        }
        const double tau_res = t * std::max(res_scale, 1e-12);
        const double tau_pen = t * std::max(v.sup_norm(), 1e-12);
        const SmoothedObjective obj(prob, tau_res, tau_pen);

        ceres::GradientProblemSolver::Options o;
        o.line_search_direction_type = ceres::LBFGS;
        o.max_num_iterations = opts.max_iterations;
        o.function_tolerance = 1e-13;
        o.gradient_tolerance = 1e-16;
        o.parameter_tolerance = 1e-13;
        o.logging_type = ceres::SILENT;
        ceres::GradientProblemSolver::Summary summary;
        ceres::GradientProblem problem(new CeresObjective(obj));
        std::vector<double> x(v.data());
        ceres::Solve(o, problem, x.data(), &summary);
        iterations += static_cast<int>(summary.iterations.size());

        GridFunction next(std::move(x));
        const double value = true_objective(prob, next);
        if (!std::isfinite(value)) {
            break;
        }
        v = std::move(next);
        if (value < best.objective) {
            best = {v, value, iterations};
        }
    }
    best.iterations = iterations;
    return best;
}

GridFunction random_start(std::size_t n, std::uint64_t seed, int k) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(k), std::uint64_t{0x7ab1e}};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    GridFunction v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = uni(rng);
    }
    return v;
}

MinimizeResult finish(const TikhonovProblem& prob, const Candidate& c, const std::string& start, double bound) {
    GridFunction u = prob.u_bar + prob.forward->op().apply(c.v);
    const double residual = (prob.forward->apply(u) - prob.f_delta).sup_norm();
    const double penalty = c.v.sup_norm();
    const double objective = std::pow(residual, prob.r) + prob.alpha * std::pow(penalty, prob.r);
    return MinimizeResult{std::move(u),   c.v,   objective, residual, penalty, bound,
                          objective <= bound * (1.0 + kCertificateSlack), start, c.iterations};
}

} // namespace

MinimizeResult minimize(const TikhonovProblem& prob, const RegularizerFamily& fam,
                        const GridFunction& u_true_for_certificate, std::uint64_t seed,
                        const MinimizeOptions& opts) {
    prob.validate();
    if (opts.temperatures.empty()) {
        throw DomainError("minimize: need at least one smoothing temperature");
    }
    const std::size_t n = prob.u_bar.size();
    const double beta = std::pow(prob.alpha, kappa(prob.r, prob.a));
    const AuxiliaryElement aux = make_aux(fam, beta, u_true_for_certificate, prob.u_bar_witness, prob.a);
    const double bound = eval_T(prob, aux.u_aux, aux.witness);

    std::optional<Candidate> best;
    std::string best_start;
    auto consider = [&](GridFunction v0, const std::string& label) {
        Candidate c = descend(prob, std::move(v0), opts);
        if (!best || c.objective < best->objective) {
            best = std::move(c);
            best_start = label;
        }
    };
    auto certified = [&] { return best && best->objective <= bound * (1.0 + kCertificateSlack); };

    consider(GridFunction(n), "zero");
    if (opts.warm_start) {
        require_same_grid(*opts.warm_start, prob.u_bar, "minimize warm start");
        consider(*opts.warm_start, "warm");
    }
    for (int k = 0; k < opts.random_starts; ++k) {
        consider(random_start(n, seed, k), "random-" + std::to_string(k));
    }
    for (int k = 0; k < opts.extra_restarts && !certified(); ++k) {
        const int index = opts.random_starts + k;
        consider(random_start(n, seed, index), "random-" + std::to_string(index));
    }

    MinimizeResult result = finish(prob, *best, best_start, bound);
    if (!result.certified) {
        throw UncertifiedError("minimize: no start reached T(u_aux)", std::move(result));
    }
    return result;
}

nlohmann::json to_json(const MinimizeResult& result) {
    return nlohmann::json{
        {"u_min", result.u_min.data()},
        {"v_min", result.v_min.data()},
        {"objective", result.objective},
        {"residual", result.residual},
        {"penalty", result.penalty},
        {"certificate_bound", result.certificate_bound},
        {"certified", result.certified},
        {"start", result.start},
        {"iterations", result.iterations},
    };
}

} // namespace oversmooth
