// Acceptance gate: one PASS/FAIL line per criterion. "acceptance N" runs criterion N only.

#include "oracles.hpp"

#include "oversmooth/banach_scale.hpp"
#include "oversmooth/errors.hpp"
#include "oversmooth/exp_volterra.hpp"
#include "oversmooth/harness.hpp"
#include "oversmooth/lavrentiev.hpp"
#include "oversmooth/tikhonov.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace oversmooth;

namespace {

constexpr std::size_t kN = 256;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

GridFunction random_unit(std::size_t n, std::mt19937_64& rng) { return GridFunction(oracle::random_unit(n, rng)); }

double max_over_min(const std::vector<double>& v) {
    double lo = v.front();
    double hi = v.front();
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return hi / lo;
}

Verdict fractional_oracle() {
    const ScaleOperator op(kN);
    struct Case {
        const char* name;
        std::function<double(double)> u;
        std::function<double(double, double)> exact;
    };
    const std::vector<Case> cases{
        {"1", [](double) { return 1.0; }, oracle::rl_one},
        {"x", [](double x) { return x; }, oracle::rl_x},
        {"sin", [](double x) { return std::sin(std::numbers::pi * x); }, oracle::rl_sin_pi},
    };
    Verdict v{true, ""};
    for (double p : {0.25, 0.5, 0.75}) {
        for (const Case& c : cases) {
            const GridFunction g = fractional_power(op, p, GridFunction::sample(kN, c.u));
            double err = 0.0;
            for (std::size_t i = 0; i < kN; ++i) {
                err = std::max(err, std::abs(g[i] - c.exact(p, g.x(i))));
            }
            if (err > 1e-3) {
                v.pass = false;
                v.detail += " p=" + fmt(p) + ",u=" + c.name + ":" + fmt(err);
            }
        }
    }
    if (v.pass) {
        v.detail = " all nine sup errors <= 1e-3";
    } else {
        v.detail = " sup error > 1e-3 for" + v.detail;
    }
    return v;
}

Verdict semigroup() {
    const ScaleOperator op(kN);
    const QuadratureConfig cfg;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> order(0.05, 0.95);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double p = order(rng);
        const double q = order(rng);
        const GridFunction u = random_unit(kN, rng);
        const GridFunction two = fractional_power(op, p, fractional_power(op, q, u));
        const GridFunction one = fractional_power(op, p + q, u);
        worst = std::max(worst, sup_distance(two, one));
    }
    return {worst <= 4.0 * cfg.tail_tol, " worst ||G^p G^q u - G^(p+q) u|| = " + fmt(worst) + " vs " + fmt(4.0 * cfg.tail_tol)};
}

Verdict interpolation() {
    const ScaleOperator op(kN);
    std::mt19937_64 rng(3);
    int violations = 0;
    int disagreements = 0;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const GridFunction u = random_unit(kN, rng);
        const double gu = op.apply(u).sup_norm();
        for (double p : {0.25, 0.5, 0.75}) {
            const InterpolationReport r = interpolation_check(op, p, 1.0, u);
            // rhs rebuilt from c = 6, ||G u|| and ||u|| = 1.
            const double rhs = 6.0 * std::pow(gu, p);
            if (std::abs(r.rhs - rhs) > 1e-12 * rhs) {
                ++disagreements;
            }
            if (!(r.lhs <= rhs) || !r.holds) {
                ++violations;
            }
            worst = std::max(worst, r.lhs / rhs);
        }
    }
    return {violations == 0 && disagreements == 0,
            " violations=" + std::to_string(violations) + "/300, rhs mismatches=" + std::to_string(disagreements) +
                ", largest lhs/rhs=" + fmt(worst)};
}

Verdict decay() {
    const RegularizerFamily fam(ScaleOperator(kN), 2);
    const std::vector<double> betas = geometric_betas(1e-1, 1e-4, 7);
    bool ok = true;
    std::string detail;
    for (double p : {0.0, 1.0, 2.0}) {
        const DecayReport rep = decay_check(fam, p, betas);
        // Exact norms from dense matrices as a cross-check of the sampled ones.
        const Eigen::MatrixXd g = oracle::trapezoid_matrix(kN);
        Eigen::MatrixXd gp = Eigen::MatrixXd::Identity(kN, kN);
        for (int k = 0; k < static_cast<int>(p); ++k) {
            gp = g * gp;
        }
        double exact = 0.0;
        for (double b : betas) {
            exact = std::max(exact, oracle::inf_norm(oracle::companion_dense(g, b, 2) * gp) / std::pow(b, p));
        }
        ok = ok && rep.max_ratio <= 9.0 && exact <= 9.0 && rep.max_ratio <= exact * (1 + 1e-9);
        detail += " p=" + fmt(p) + ":sampled " + fmt(rep.max_ratio) + ",exact " + fmt(exact);
    }
    const DecayReport half = decay_check(fam, 0.5, betas);
    const double s = oracle::slope(half.betas, half.norms);
    ok = ok && s >= 0.45 && s <= 0.55;
    return {ok, detail + " (bound 9); p=0.5 slope " + fmt(s) + " in [0.45, 0.55]"};
}

Verdict aux_g() {
    const ScaleOperator op(kN);
    const RegularizerFamily fam(op, 2);
    const GridFunction zero(kN);
    bool ok = true;
    std::string detail = " hoelder slopes";

    const std::vector<double> betas = geometric_betas(1e-1, 1e-4, 7);
    const auto rows = eval_g(fam, betas, make_truth(TruthSpec{TruthRegime::hoelder, 0.5, {}, 2.0}, op), zero, 1.0);
    for (int i = 0; i < 3; ++i) {
        std::vector<double> gi;
        for (const GRow& r : rows) {
            gi.push_back(i == 0 ? r.g1 : (i == 1 ? r.g2 : r.g3));
        }
        const double s = oracle::slope(betas, gi);
        ok = ok && std::abs(s - 0.5) <= 0.07;
        detail += " " + fmt(s);
    }

    detail += "; log-order max/min";
    const std::vector<double> lbetas = geometric_betas(1e-1, 1e-6, 11);
    const auto lrows = eval_g(fam, lbetas, make_truth(TruthSpec{TruthRegime::low_order, 0.0, {}, 2.0}, op), zero, 1.0);
    for (int i = 0; i < 3; ++i) {
        std::vector<double> scaled;
        for (const GRow& r : lrows) {
            scaled.push_back((i == 0 ? r.g1 : (i == 1 ? r.g2 : r.g3)) * std::log(1.0 / r.beta));
        }
        const double ratio = max_over_min(scaled);
        ok = ok && ratio <= 5.0;
        detail += " " + fmt(ratio);
    }
    return {ok, detail};
}

Verdict nonlinearity() {
    const ScaleOperator op(kN);
    const ExpVolterraProblem prob(op, make_truth(TruthSpec{}, op));
    const NonlinearityReport rep = nonlinearity_check(prob, 0.5, prob.c1() / 2, 1000, 1);
    return {rep.passed() && rep.samples.size() == 1000,
            " 1000 samples: prep " + std::to_string(rep.prep_violations) + ", (ii) " +
                std::to_string(rep.a_violations) + "/" + std::to_string(rep.a_applicable) + ", (iii) " +
                std::to_string(rep.b_violations) + "/" + std::to_string(rep.b_applicable) + " violations"};
}

// Rows re-checked here: certificate inequality and a refit of the slope.
struct StudyCheck {
    bool certified = true;
    std::vector<double> deltas;
    std::vector<double> errors;
};

StudyCheck recheck(const RateReport& rep) {
    StudyCheck c;
    for (const RateRow& r : rep.rows) {
        c.certified = c.certified && r.certified && r.objective <= r.certificate_bound * (1 + 1e-9);
        c.deltas.push_back(r.delta);
        c.errors.push_back(r.error_sup);
    }
    return c;
}

Verdict hoelder_rates() {
    bool ok = true;
    std::string detail;
    for (double p : {1.0, 0.5}) {
        ExperimentConfig cfg;
        cfg.p = p;
        const RateReport rep = run_rate_study(cfg);
        const StudyCheck c = recheck(rep);
        const double s = oracle::slope(c.deltas, c.errors);
        const double expected = p / (p + 1.0);
        const bool good = c.certified && std::abs(s - expected) <= 0.12;
        ok = ok && good;
        detail += " p=" + fmt(p) + ": slope " + fmt(s) + " vs " + fmt(expected) + "+-0.12, " +
                  (c.certified ? "all certified;" : "NOT all certified;");
    }
    return {ok, detail};
}

Verdict low_order_rates() {
    ExperimentConfig cfg;
    cfg.regime = AlphaRule::low_order;
    const RateReport rep = run_rate_study(cfg);
    const StudyCheck c = recheck(rep);
    std::vector<double> scaled;
    for (std::size_t i = 0; i < c.deltas.size(); ++i) {
        scaled.push_back(c.errors[i] * std::log(1.0 / c.deltas[i]));
    }
    const double ratio = max_over_min(scaled);
    return {c.certified && ratio <= 5.0,
            " error*log(1/delta) max/min " + fmt(ratio) + " (<= 5), " + (c.certified ? "all certified" : "NOT all certified")};
}

Verdict no_smoothness() {
    ExperimentConfig cfg;
    cfg.regime = AlphaRule::none;
    const RateReport rep = run_rate_study(cfg);
    const StudyCheck c = recheck(rep);
    bool monotone = true;
    for (std::size_t i = 2; i < c.errors.size(); ++i) {
        monotone = monotone && c.errors[i] < c.errors[i - 1];
    }
    std::string errs;
    for (double e : c.errors) {
        errs += " " + fmt(e);
    }
    return {monotone, " errors" + errs + (monotone ? " decrease after the first point" : " not monotone") +
                          (c.certified ? ", all certified" : ", NOT all certified")};
}

Verdict minimizer_sanity() {
    const std::size_t n = 64;
    const ScaleOperator op(n);
    const RegularizerFamily fam(op, 2);
    std::mt19937_64 rng(10);
    const GridFunction ubw = 0.5 * random_unit(n, rng);
    const GridFunction u_bar = op.apply(ubw);
    const ExpVolterraProblem at_bar(op, u_bar);
    const auto exact = TikhonovProblem::make(at_bar, at_bar.f_true(), 0.0, ubw, 1.0, 1.0, 0.1);
    const double objective = minimize(exact, fam, u_bar, 1).objective;

    const GridFunction u_true = op.apply(GridFunction(n, 1.0));
    const ExpVolterraProblem prob(op, u_true);
    const auto noisy = TikhonovProblem::make(prob, add_noise(prob.f_true(), NoiseSpec{1e-2, NoiseKind::random_sign, 3, 0.5, 0.1}),
                                             1e-2, GridFunction(n), 1.0, 1.0, 1e-2);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const GridFunction v = random_unit(n, rng);
        const SmoothedObjective obj(noisy, 1e-2, 1e-2);
        std::vector<double> grad(n);
        obj.evaluate(v.values(), grad);
        double gmax = 0.0;
        double emax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> plus(v.data());
            std::vector<double> minus(v.data());
            const double h = 1e-6;
            plus[i] += h;
            minus[i] -= h;
            const double fd = (obj.evaluate(plus, {}) - obj.evaluate(minus, {})) / (2 * h);
            gmax = std::max(gmax, std::abs(grad[i]));
            emax = std::max(emax, std::abs(fd - grad[i]));
        }
        worst = std::max(worst, emax / gmax);
    }
    return {objective <= 1e-12 && worst <= 1e-5,
            " exact-data objective " + fmt(objective) + " (<= 1e-12), gradient relative error " + fmt(worst) + " (<= 1e-5)"};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Verdict()>>> list{
        {"fractional power vs Riemann-Liouville", fractional_oracle},
        {"semigroup property", semigroup},
        {"interpolation inequality", interpolation},
        {"Lavrentiev decay", decay},
        {"auxiliary-element g-functions", aux_g},
        {"nonlinearity conditions", nonlinearity},
        {"Hoelder rates", hoelder_rates},
        {"low-order rates", low_order_rates},
        {"no-smoothness convergence", no_smoothness},
        {"minimizer sanity", minimizer_sanity},
    };
    return list;
}

} // namespace

int main(int argc, char** argv) {
    const auto& list = criteria();
    std::vector<int> chosen;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) {
            const int c = std::atoi(argv[i]);
            if (c < 1 || c > static_cast<int>(list.size())) {
                std::cerr << "usage: acceptance [criterion 1-" << list.size() << "]...\n";
                return 2;
            }
            chosen.push_back(c);
        }
    } else {
        for (int c = 1; c <= static_cast<int>(list.size()); ++c) {
            chosen.push_back(c);
        }
    }

    int failures = 0;
    for (int c : chosen) {
        const auto& [name, run] = list[static_cast<std::size_t>(c - 1)];
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string(" exception: ") + e.what()};
        }
        failures += v.pass ? 0 : 1;
        std::cout << "criterion " << c << ": " << (v.pass ? "PASS" : "FAIL") << " " << name << ":" << v.detail << '\n';
    }
    return failures == 0 ? 0 : 1;
}
