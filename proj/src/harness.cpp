#include "oversmooth/harness.hpp"

#include "oversmooth/errors.hpp"
#include "oversmooth/lavrentiev.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#ifndef OVERSMOOTH_VERSION
#define OVERSMOOTH_VERSION "0.0.0"
#endif

namespace oversmooth {

const char* version() noexcept { return OVERSMOOTH_VERSION; }

std::vector<double> default_delta_list() {
    std::vector<double> out;
    for (int k = 0; k < 8; ++k) {
        out.push_back(std::pow(10.0, -1.0 - 0.5 * k));
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (grid_n < 64) {
        throw UsageError("config: grid_n must be at least 64");
    }
    if (!(r > 0.0) || !(a > 0.0) || !(alpha_c > 0.0)) {
        throw UsageError("config: r, a and alpha_c must be positive");
    }
    if (m < 1.0 + a) {
        throw UsageError("config: m must be at least 1 + a");
    }
    if (regime == AlphaRule::hoelder && !(p > 0.0 && p <= 1.0)) {
        throw UsageError("config: p must lie in (0, 1]");
    }
    if (delta_list.size() < 3) {
        throw UsageError("config: need at least 3 noise levels");
    }
    for (std::size_t k = 0; k < delta_list.size(); ++k) {
        if (!(delta_list[k] > 0.0) || (k > 0 && !(delta_list[k] < delta_list[k - 1]))) {
            throw UsageError("config: noise levels must be positive and strictly decreasing");
        }
    }
    if (!(bump_width > 0.0) || !(slope_tolerance > 0.0) || !(ratio_threshold > 1.0)) {
        throw UsageError("config: bump_width, slope_tolerance must be positive, ratio_threshold > 1");
    }
    try {
        quad.validate();
    } catch (const DomainError& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    return nlohmann::json{
        {"grid_n", grid_n},
        {"regime", to_string(regime)},
        {"p", p},
        {"r", r},
        {"a", a},
        {"m", m},
        {"alpha_c", alpha_c},
        {"delta_list", delta_list},
        {"seed", seed},
        {"noise", to_string(noise)},
        {"bump_width", bump_width},
        {"bump_center", bump_center},
        {"warm_start", warm_start},
        {"slope_tolerance", slope_tolerance},
        {"ratio_threshold", ratio_threshold},
        {"tail_tol", quad.tail_tol},
        {"quadrature_step", quad.step},
    };
}

LogLogFit fit_slope(const std::vector<std::pair<double, double>>& points) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [d, e] : points) {
        x.push_back(d);
        y.push_back(e);
    }
    return fit_loglog(x, y);
}

namespace {

TruthSpec truth_for(const ExperimentConfig& cfg) {
    TruthSpec t;
    t.p = cfg.p;
    switch (cfg.regime) {
    case AlphaRule::hoelder: t.regime = TruthRegime::hoelder; break;
    case AlphaRule::low_order: t.regime = TruthRegime::low_order; break;
    case AlphaRule::none: t.regime = TruthRegime::generic_continuous; break;
    }
    return t;
}

void save_rate_study(const RateReport& report, const std::string& dir, const std::string& stem) {
    std::filesystem::create_directories(dir);
    std::ofstream csv(std::filesystem::path(dir) / (stem + ".csv"));
    write_rate_csv(csv, report);
    std::ofstream js(std::filesystem::path(dir) / (stem + ".json"));
    js << rate_report_json(report, report_timestamp()).dump(2) << '\n';
}

} // namespace

RateReport run_rate_study(const ExperimentConfig& cfg) {
    cfg.validate();
    const ScaleOperator op(cfg.grid_n);
    const GridFunction u_true = make_truth(truth_for(cfg), op, cfg.quad);
    const ExpVolterraProblem prob(op, u_true);
    const RegularizerFamily fam(op, cfg.m);
    const ParamChoice pc{cfg.regime, cfg.p, cfg.alpha_c};
    const GridFunction zero(op.size());

    RateReport report;
    report.config = cfg;
    report.slope_tolerance = cfg.slope_tolerance;
    if (cfg.regime == AlphaRule::hoelder) {
        report.expected_slope = cfg.p / (cfg.p + cfg.a);
    }

    std::optional<GridFunction> warm;
    for (std::size_t k = 0; k < cfg.delta_list.size(); ++k) {
        RateRow row;
        row.delta = cfg.delta_list[k];
        row.alpha = choose_alpha(pc, row.delta, cfg.r, cfg.a);
        row.beta = std::pow(row.alpha, kappa(cfg.r, cfg.a));

        NoiseSpec noise{row.delta, cfg.noise, cfg.seed + k, cfg.bump_center, cfg.bump_width * row.beta};
        const TikhonovProblem tp =
            TikhonovProblem::make(prob, add_noise(prob.f_true(), noise), row.delta, zero, cfg.r, cfg.a, row.alpha);
        MinimizeOptions opts;
        if (cfg.warm_start) {
            opts.warm_start = warm;
        }
        std::optional<MinimizeResult> res;
        try {
            res = minimize(tp, fam, u_true, cfg.seed, opts);
        } catch (const UncertifiedError& e) {
            res = e.best();
        }
        row.error_sup = sup_distance(res->u_min, u_true);
        row.residual = res->residual;
        row.penalty = res->penalty;
        row.objective = res->objective;
        row.certificate_bound = res->certificate_bound;
        row.certified = res->certified;
        row.start = res->start;
        warm = res->v_min;
        report.rows.push_back(row);
    }

    std::vector<double> ds;
    std::vector<double> es;
    for (const RateRow& row : report.rows) {
        if (row.certified) {
            ds.push_back(row.delta);
            es.push_back(row.error_sup);
        }
    }
    report.all_certified = ds.size() == report.rows.size();
    if (2 * ds.size() < report.rows.size()) {
        throw StudyError("rate study: more than half of the solves are uncertified");
    }
    if (ds.size() >= 3) {
        report.fit = fit_loglog(ds, es);
    }
    if (ds.size() >= 4) {
        for (std::size_t skip = 0; skip < ds.size(); ++skip) {
            std::vector<double> x;
            std::vector<double> y;
            for (std::size_t i = 0; i < ds.size(); ++i) {
                if (i != skip) {
                    x.push_back(ds[i]);
                    y.push_back(es[i]);
                }
            }
            report.loo_max_change = std::max(report.loo_max_change, std::abs(fit_loglog(x, y).slope - report.fit.slope));
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double s = es[i] * std::log(1.0 / ds[i]);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    report.statistic = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    report.monotone = true;
    for (std::size_t i = 2; i < report.rows.size(); ++i) {
        if (!(report.rows[i].error_sup < report.rows[i - 1].error_sup)) {
            report.monotone = false;
        }
    }

    switch (cfg.regime) {
    case AlphaRule::hoelder:
        report.pass = ds.size() >= 3 && std::abs(report.fit.slope - report.expected_slope) <= cfg.slope_tolerance;
        break;
    case AlphaRule::low_order:
        report.pass = report.statistic <= cfg.ratio_threshold;
        break;
    case AlphaRule::none:
        report.pass = report.monotone;
        break;
    }

    if (!cfg.out_dir.empty()) {
        save_rate_study(report, cfg.out_dir, "rate_study");
    }
    return report;
}

void write_rate_csv(std::ostream& os, const RateReport& report) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "delta,alpha,beta,error_sup,residual,penalty,certified\n";
    for (const RateRow& row : report.rows) {
        os << row.delta << ',' << row.alpha << ',' << row.beta << ',' << row.error_sup << ',' << row.residual << ','
           << row.penalty << ',' << (row.certified ? 1 : 0) << '\n';
    }
    os.precision(old);
}

nlohmann::json rate_report_json(const RateReport& report, const std::string& timestamp) {
    nlohmann::json rows = nlohmann::json::array();
    for (const RateRow& row : report.rows) {
        rows.push_back({
            {"delta", row.delta},
            {"alpha", row.alpha},
            {"beta", row.beta},
            {"error_sup", row.error_sup},
            {"residual", row.residual},
            {"penalty", row.penalty},
            {"objective", row.objective},
            {"certificate_bound", row.certificate_bound},
            {"certified", row.certified},
            {"start", row.start},
        });
    }
    return nlohmann::json{
        {"version", version()},
        {"timestamp", timestamp},
        {"config", report.config.to_json()},
        {"rows", rows},
        {"fitted_slope", report.fit.slope},
        {"intercept", report.fit.intercept},
        {"r_squared", report.fit.r_squared},
        {"expected_slope", report.expected_slope},
        {"slope_tolerance", report.slope_tolerance},
        {"statistic", report.statistic},
        {"loo_max_change", report.loo_max_change},
        {"monotone", report.monotone},
        {"all_certified", report.all_certified},
        {"pass", report.pass},
    };
}

std::string report_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
        t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

double riemann_liouville(double p, double x, const std::function<double(double)>& u) {
    if (!(p > 0.0)) {
        throw DomainError("riemann_liouville: order must be positive");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    // t = (x - xi)^p turns the weakly singular kernel into a constant.
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto f = [&](double t) { return u(std::max(0.0, x - std::pow(t, 1.0 / p))); };
    return integrator.integrate(f, 0.0, std::pow(x, p)) / std::tgamma(p + 1.0);
}

bool SuiteSummary::all_passed() const noexcept {
    return std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"fracpow-check", "decay-check", "aux-rates", "nonlinearity-check",
                                                "rate-study"};
    return names;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return std::ofstream(std::filesystem::path(cfg.out_dir) / name);
}

} // namespace

SuiteResult fracpow_suite(const ExperimentConfig& cfg) {
    SuiteResult res{"fracpow-check", true, {}};
    const ScaleOperator op(cfg.grid_n);
    struct Probe {
        const char* name;
        std::function<double(double)> f;
    };
    const std::vector<Probe> probes{
        {"1", [](double) { return 1.0; }},
        {"x", [](double x) { return x; }},
        {"sin(pi x)", [](double x) { return std::sin(std::numbers::pi * x); }},
    };
    std::ostringstream csv;
    csv << std::setprecision(std::numeric_limits<double>::max_digits10) << "p,u,sup_error,worst_x\n";
    for (double p : {0.25, 0.5, 0.75}) {
        for (const Probe& probe : probes) {
            const GridFunction u = GridFunction::sample(op.size(), probe.f);
            const GridFunction g = fractional_power(op, p, u, cfg.quad);
            double err = 0.0;
            double worst_x = 0.0;
            for (std::size_t i = 0; i < op.size(); ++i) {
                const double e = std::abs(g[i] - riemann_liouville(p, g.x(i), probe.f));
                if (e > err) {
                    err = e;
                    worst_x = g.x(i);
                }
            }
            const bool ok = err <= 1e-3;
            res.passed = res.passed && ok;
            res.lines.push_back("p=" + fmt(p) + " u=" + probe.name + " sup_error=" + fmt(err) + " at x=" +
                                fmt(worst_x) + (ok ? " ok" : " FAIL"));
            csv << p << ',' << probe.name << ',' << err << ',' << worst_x << '\n';
        }
    }
    if (!cfg.out_dir.empty()) {
        open_output(cfg, "fracpow.csv") << csv.str();
    }
    return res;
}

SuiteResult decay_suite(const ExperimentConfig& cfg) {
    SuiteResult res{"decay-check", true, {}};
    const RegularizerFamily fam(ScaleOperator(cfg.grid_n), cfg.m);
    const std::vector<double> betas = geometric_betas(1e-1, 1e-4, 7);
    ProbeSet probes;
    probes.seed = cfg.seed;
    for (double p : {0.0, 1.0, 2.0, 0.5}) {
        if (p > fam.saturation()) {
            continue;
        }
        const DecayReport rep = decay_check(fam, p, betas, probes, cfg.quad);
        bool ok = false;
        std::string line = "p=" + fmt(p) + " max_ratio=" + fmt(rep.max_ratio) + " slope=" + fmt(rep.fit.slope);
        if (p == std::floor(p)) {
            ok = rep.max_ratio <= rep.bound;
            line += " bound=" + fmt(rep.bound);
        } else {
            ok = rep.fit.slope >= p - 0.05 && rep.fit.slope <= p + 0.05;
            line += " expected=" + fmt(p) + "+-0.05";
        }
        res.passed = res.passed && ok;
        res.lines.push_back(line + (ok ? " ok" : " FAIL"));
        if (!cfg.out_dir.empty()) {
            auto os = open_output(cfg, "decay_p" + fmt(p) + ".csv");
            write_decay_csv(os, rep);
        }
    }
    return res;
}

SuiteResult aux_rates_suite(const ExperimentConfig& cfg) {
    SuiteResult res{"aux-rates", true, {}};
    const ScaleOperator op(cfg.grid_n);
    const RegularizerFamily fam(op, cfg.m);
    const GridFunction zero(op.size());

    TruthSpec hoelder;
    hoelder.p = 0.5;
    const std::vector<double> betas = geometric_betas(1e-1, 1e-4, 7);
    const auto rows = eval_g(fam, betas, make_truth(hoelder, op, cfg.quad), zero, cfg.a, cfg.quad);
    std::vector<double> g[3];
    for (const GRow& row : rows) {
        g[0].push_back(row.g1);
        g[1].push_back(row.g2);
        g[2].push_back(row.g3);
    }
    for (int i = 0; i < 3; ++i) {
        const double slope = fit_loglog_above_floor(betas, g[i]).slope;
        const bool ok = std::abs(slope - 0.5) <= 0.07;
        res.passed = res.passed && ok;
        res.lines.push_back("hoelder p=0.5 g" + std::to_string(i + 1) + " slope=" + fmt(slope) + (ok ? " ok" : " FAIL"));
    }

    TruthSpec low;
    low.regime = TruthRegime::low_order;
    const std::vector<double> lbetas = geometric_betas(1e-1, 1e-6, 11);
    const auto lrows = eval_g(fam, lbetas, make_truth(low, op, cfg.quad), zero, cfg.a, cfg.quad);
    for (int i = 0; i < 3; ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const GRow& row : lrows) {
            const double gi = i == 0 ? row.g1 : (i == 1 ? row.g2 : row.g3);
            const double s = gi * std::log(1.0 / row.beta);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        const bool ok = ratio <= 5.0;
        res.passed = res.passed && ok;
        res.lines.push_back("low-order g" + std::to_string(i + 1) + " log-ratio=" + fmt(ratio) + (ok ? " ok" : " FAIL"));
    }
    if (!cfg.out_dir.empty()) {
        auto a = open_output(cfg, "aux_hoelder.csv");
        write_g_csv(a, rows);
        auto b = open_output(cfg, "aux_low_order.csv");
        write_g_csv(b, lrows);
    }
    return res;
}

SuiteResult nonlinearity_suite(const ExperimentConfig& cfg) {
    SuiteResult res{"nonlinearity-check", true, {}};
    const ScaleOperator op(cfg.grid_n);
    const ExpVolterraProblem prob(op, make_truth(truth_for(cfg), op, cfg.quad));
    const NonlinearityReport rep = nonlinearity_check(prob, 0.5, 0.5 * prob.c1(), 1000, cfg.seed);
    res.passed = rep.passed();
    res.lines.push_back("samples=" + std::to_string(rep.samples.size()) +
                        " prep_violations=" + std::to_string(rep.prep_violations) +
                        " ii_violations=" + std::to_string(rep.a_violations) + "/" + std::to_string(rep.a_applicable) +
                        " iii_violations=" + std::to_string(rep.b_violations) + "/" + std::to_string(rep.b_applicable) +
                        " worst_margin=" + fmt(rep.worst_margin));
    if (!cfg.out_dir.empty()) {
        auto os = open_output(cfg, "nonlinearity.csv");
        write_nonlinearity_csv(os, rep);
    }
    return res;
}

SuiteResult rate_study_suite(const ExperimentConfig& cfg) {
    SuiteResult res{"rate-study", true, {}};
    const RateReport rep = run_rate_study(cfg);
    std::string line = "regime=" + to_string(cfg.regime) + " n=" + std::to_string(cfg.grid_n);
    if (cfg.regime == AlphaRule::hoelder) {
        line += " p=" + fmt(cfg.p) + " slope=" + fmt(rep.fit.slope) + " expected=" + fmt(rep.expected_slope) + "+-" +
                fmt(rep.slope_tolerance) + " loo_change=" + fmt(rep.loo_max_change);
    } else if (cfg.regime == AlphaRule::low_order) {
        line += " log-ratio=" + fmt(rep.statistic);
    } else {
        line += std::string(" monotone=") + (rep.monotone ? "yes" : "no");
    }
    line += std::string(" certified=") + (rep.all_certified ? "all" : "partial");
    res.passed = rep.pass && rep.all_certified;
    res.lines.push_back(line + (res.passed ? " ok" : " FAIL"));

    if (cfg.regime == AlphaRule::hoelder) {
        // The stability requirement is pinned to the default p = 1 study; elsewhere it is reported only.
        const bool enforced = cfg.p == 1.0;
        const bool stable = !enforced || rep.loo_max_change <= 0.05;
        res.lines.push_back("leave-one-out slope change=" + fmt(rep.loo_max_change) +
                            (enforced ? (stable ? " ok" : " FAIL") : " (informational)"));
        ExperimentConfig coarse = cfg;
        coarse.grid_n = 128;
        coarse.out_dir.clear();
        const RateReport rc = run_rate_study(coarse);
        const double diff = std::abs(rc.fit.slope - rep.fit.slope);
        const bool same = diff <= 0.05;
        res.lines.push_back("n=128 slope=" + fmt(rc.fit.slope) + " difference=" + fmt(diff) + (same ? " ok" : " FAIL"));
        res.passed = res.passed && stable && same;
        if (!cfg.out_dir.empty()) {
            save_rate_study(rc, cfg.out_dir, "rate_study_n128");
        }
    }
    return res;
}

SuiteSummary run_suite(const std::vector<std::string>& names, const ExperimentConfig& cfg) {
    const std::vector<std::string>& all = suite_names();
    for (const std::string& name : names) {
        if (std::find(all.begin(), all.end(), name) == all.end()) {
            throw UsageError("unknown suite '" + name + "'");
        }
    }
    const std::vector<std::string>& chosen = names.empty() ? all : names;
    SuiteSummary summary;
    for (const std::string& name : chosen) {
        if (name == "fracpow-check") summary.results.push_back(fracpow_suite(cfg));
        else if (name == "decay-check") summary.results.push_back(decay_suite(cfg));
        else if (name == "aux-rates") summary.results.push_back(aux_rates_suite(cfg));
        else if (name == "nonlinearity-check") summary.results.push_back(nonlinearity_suite(cfg));
        else summary.results.push_back(rate_study_suite(cfg));
    }
    return summary;
}

} // namespace oversmooth
