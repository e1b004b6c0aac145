#pragma once

#include "oversmooth/banach_scale.hpp"
#include "oversmooth/forward_operator.hpp"
#include "oversmooth/grid_function.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace oversmooth {

// F(u) = exp(G u) pointwise, with F'(u) h = F(u) * G h. Exceeding the double range -> RangeError.
GridFunction forward(const ScaleOperator& op, const GridFunction& u);
GridFunction derivative_apply(const ScaleOperator& op, const GridFunction& u, const GridFunction& h);

/**
 * The exponential Volterra problem for a fixed truth u_true.
 *
 * c1 = exp(-||G u_true||) and c2 = exp(||G u_true||) bound F'(u_true) against G from
 * both sides; the degree of ill-posedness is a = 1.
 */
class ExpVolterraProblem final : public ForwardOperator {
public:
    ExpVolterraProblem(ScaleOperator op, GridFunction u_true);

    const ScaleOperator& op() const override { return op_; }
    GridFunction apply(const GridFunction& u) const override { return forward(op_, u); }
    GridFunction adjoint_derivative(const GridFunction& u, const GridFunction& fu,
                                    const GridFunction& w) const override;

    const GridFunction& u_true() const noexcept { return u_true_; }
    const GridFunction& f_true() const noexcept { return f_true_; }
    double c1() const noexcept { return c1_; }
    double c2() const noexcept { return c2_; }
    double a() const noexcept { return 1.0; }

private:
    ScaleOperator op_;
    GridFunction u_true_;
    GridFunction f_true_;
    double c1_;
    double c2_;
};

enum class TruthRegime { hoelder, low_order, generic_continuous };

struct TruthSpec {
    TruthRegime regime = TruthRegime::hoelder;
    double p = 1.0;                       // hoelder order
    std::optional<GridFunction> witness;  // defaults to w = 1
    double lambda = 2.0;                  // low_order decay rate
};

GridFunction make_truth(const TruthSpec& spec, const ScaleOperator& op, const QuadratureConfig& cfg = {});

enum class NoiseKind { random_sign, smooth_bump };

struct NoiseSpec {
    double delta = 0.0;
    NoiseKind kind = NoiseKind::random_sign;
    std::uint64_t seed = 1;
    double bump_center = 0.5;
    double bump_width = 0.1;
};

// eta with sup_norm(eta) == delta; deterministic in the seed.
GridFunction make_noise(std::size_t n, const NoiseSpec& spec);
GridFunction add_noise(const GridFunction& f_true, const NoiseSpec& spec);

NoiseKind parse_noise_kind(const std::string& name);
std::string to_string(NoiseKind kind);

struct NonlinearitySample {
    int index = 0;
    double theta_norm = 0.0;
    double delta_norm = 0.0;
    bool prep = true;
    bool ineq_a = true;  // (1 - rho) ||Delta|| / c2 <= ||theta|| when ||theta|| <= rho
    bool ineq_b = true;  // eps ||theta|| <= ||Delta|| when ||Delta|| <= c1 - eps
    bool a_applies = false;
    bool b_applies = false;
    double margin = 0.0;  // smallest slack among the applicable inequalities
};

struct NonlinearityReport {
    double rho = 0.0;
    double eps = 0.0;
    std::vector<NonlinearitySample> samples;
    int prep_violations = 0;
    int a_violations = 0;
    int b_violations = 0;
    int a_applicable = 0;
    int b_applicable = 0;
    double worst_margin = 0.0;

    bool passed() const noexcept { return prep_violations + a_violations + b_violations == 0; }
};

struct NonlinearitySampler {
    double theta_max = 0.5;  // sampled ||theta|| is uniform in (0, theta_max]
    bool include_truth = true;
};

// Samples u = u_true + G z, theta = G(u - u_true), Delta = F(u) - F(u_true) and checks the
// pointwise estimate |Delta - F(u_true) theta| <= |theta| |Delta| plus inequalities (ii), (iii).
NonlinearityReport nonlinearity_check(const ExpVolterraProblem& prob, double rho, double eps,
                                      int n_samples, std::uint64_t seed,
                                      const NonlinearitySampler& sampler = {});

void write_nonlinearity_csv(std::ostream& os, const NonlinearityReport& report);

} // namespace oversmooth
