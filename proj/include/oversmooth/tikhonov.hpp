#pragma once

#include "oversmooth/forward_operator.hpp"
#include "oversmooth/grid_function.hpp"
#include "oversmooth/lavrentiev.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace oversmooth {

/**
 * T(u) = ||F(u) - f_delta||^r + alpha ||u - u_bar||_1^r over the slice u = u_bar + G v,
 * where ||u - u_bar||_1 = sup |v|. u_bar = G u_bar_witness is kept alongside its witness.
 */
struct TikhonovProblem {
    const ForwardOperator* forward = nullptr;
    GridFunction f_delta;
    double delta = 0.0;
    GridFunction u_bar_witness;
    GridFunction u_bar;
    double r = 1.0;
    double a = 1.0;
    double alpha = 1.0;

    static TikhonovProblem make(const ForwardOperator& forward, GridFunction f_delta, double delta,
                                GridFunction u_bar_witness, double r, double a, double alpha);
    void validate() const;
};

// Throws DomainError unless u = u_bar + G v_witness up to rounding.
double eval_T(const TikhonovProblem& prob, const GridFunction& u, const GridFunction& v_witness);

enum class AlphaRule { none, hoelder, low_order };

struct ParamChoice {
    AlphaRule regime = AlphaRule::hoelder;
    double p = 1.0;  // hoelder only
    double C = 1.0;
};

// kappa = 1 / (r (1 + a)); the auxiliary element uses beta = alpha^kappa.
double kappa(double r, double a);

// hoelder: C delta^{r(1+a)/(p+a)}, low_order: C delta, none: C delta^r.
double choose_alpha(const ParamChoice& pc, double delta, double r, double a);

AlphaRule parse_alpha_rule(const std::string& name);
std::string to_string(AlphaRule rule);

// Smooth upper bound of max_i |z_i|: tau log sum_i (e^{z_i/tau} + e^{-z_i/tau}).
// Writes d/dz into weights when it is non-empty.
double smooth_max_abs(std::span<const double> z, double tau, std::span<double> weights);

/**
 * Log-sum-exp surrogate of T in the witness v:
 * J(v) = smax_{tau_res}(F(u_bar + G v) - f_delta)^r + alpha smax_{tau_pen}(v)^r.
 */
class SmoothedObjective {
public:
    SmoothedObjective(const TikhonovProblem& prob, double tau_residual, double tau_penalty);

    std::size_t size() const noexcept { return prob_->u_bar.size(); }
    // gradient may be empty. Propagates RangeError from the forward map.
    double evaluate(std::span<const double> v, std::span<double> gradient) const;

private:
    const TikhonovProblem* prob_;
    double tau_res_;
    double tau_pen_;
};

struct MinimizeOptions {
    std::vector<double> temperatures{1e-1, 1e-2, 1e-3};
    int max_iterations = 2000;  // per temperature stage
    int random_starts = 1;
    int extra_restarts = 3;  // more random starts when the first round is not certified
    std::optional<GridFunction> warm_start;
};

struct MinimizeResult {
    GridFunction u_min;
    GridFunction v_min;
    double objective = 0.0;
    double residual = 0.0;
    double penalty = 0.0;
    double certificate_bound = 0.0;
    bool certified = false;
    std::string start;  // zero, warm or random-k
    int iterations = 0;
};

nlohmann::json to_json(const MinimizeResult& result);

class UncertifiedError : public std::runtime_error {
public:
    UncertifiedError(const std::string& what, MinimizeResult best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const MinimizeResult& best() const noexcept { return best_; }

private:
    MinimizeResult best_;
};

// Multi-start smoothed descent, then certification T(u_min) <= T(u_aux(alpha^kappa)) (1 + 1e-9).
// Throws UncertifiedError carrying the best point when every start fails the certificate.
MinimizeResult minimize(const TikhonovProblem& prob, const RegularizerFamily& fam,
                        const GridFunction& u_true_for_certificate, std::uint64_t seed,
                        const MinimizeOptions& opts = {});

} // namespace oversmooth
