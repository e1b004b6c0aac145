#include "oversmooth/lavrentiev.hpp"

#include "oversmooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

namespace oversmooth {

RegularizerFamily::RegularizerFamily(ScaleOperator op, int m) : op_(op), m_(m) {
    if (m < 1) {
        throw DomainError("RegularizerFamily: m must be at least 1");
    }
}

double RegularizerFamily::c_star() const noexcept {
    // beta R_beta = sum_{j=1}^m (beta (G + beta I)^{-1})^j
    double sum = 0.0;
    double term = 1.0;
    for (int j = 1; j <= m_; ++j) {
        term *= op_.kappa_star();
        sum += term;
    }
    return sum;
}

double RegularizerFamily::c_p(double p) const {
    if (!(p >= 0.0) || p > saturation()) {
        throw DomainError("c_p: p must lie in [0, m]");
    }
    const double base = std::pow(op_.kappa_star() + 1.0, m_);
    return p == std::floor(p) ? base : 2.0 * base * (op_.kappa_star() + 1.0);
}

namespace {

void require_beta(double beta, const char* where) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError(std::string(where) + ": beta must be positive");
    }
}

} // namespace

GridFunction apply_R(const RegularizerFamily& fam, double beta, const GridFunction& f) {
    require_beta(beta, "apply_R");
    const ScaleOperator& op = fam.op();
    GridFunction v = op.resolve(beta, f);
    for (int k = 1; k < fam.m(); ++k) {
        GridFunction rhs = f;
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            rhs[i] += beta * v[i];
        }
        v = op.resolve(beta, rhs);
    }
    return v;
}

GridFunction apply_S(const RegularizerFamily& fam, double beta, const GridFunction& f) {
    require_beta(beta, "apply_S");
    GridFunction w = f;
    for (int k = 0; k < fam.m(); ++k) {
        w = fam.op().resolve(beta, w);
        w *= beta;
    }
    return w;
}

std::vector<GridFunction> unit_probes(std::size_t n, const ProbeSet& probes) {
    std::vector<GridFunction> out;
    out.push_back(GridFunction(n, 1.0));
    out.push_back(GridFunction::sample(n, [](double x) { return x; }));
    // Sign patterns: one switch, and alternating blocks.
    // Kernels of S_beta G^p change sign at distance ~beta behind x, so switch at 1 - 2^{-k}.
    for (double gap = 0.5; gap * static_cast<double>(n - 1) >= 1.0; gap *= 0.5) {
        const double cut = 1.0 - gap;
        out.push_back(GridFunction::sample(n, [cut](double x) { return x < cut ? -1.0 : 1.0; }));
    }
    for (std::size_t block : {1u, 2u, 8u}) {
        GridFunction g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = (i / block) % 2 == 0 ? 1.0 : -1.0;
        }
        out.push_back(std::move(g));
    }
    std::mt19937_64 rng(probes.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int k = 0; k < probes.random_count; ++k) {
        GridFunction g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = uni(rng);
        }
        const double norm = g.sup_norm();
        g *= 1.0 / norm;
        out.push_back(std::move(g));
    }
    return out;
}

DecayReport decay_check(const RegularizerFamily& fam, double p, const std::vector<double>& betas,
                        const ProbeSet& probes, const QuadratureConfig& cfg) {
    if (!(p >= 0.0) || p > fam.saturation()) {
        throw DomainError("decay_check: p must lie in [0, m] (saturation)");
    }
    for (std::size_t k = 0; k < betas.size(); ++k) {
        require_beta(betas[k], "decay_check");
        if (k > 0 && !(betas[k] < betas[k - 1])) {
            throw DomainError("decay_check: betas must be strictly decreasing");
        }
    }
    DecayReport r;
    r.p = p;
    r.bound = fam.c_p(p);
    r.betas = betas;
    r.norms.assign(betas.size(), 0.0);

    for (const GridFunction& u : unit_probes(fam.op().size(), probes)) {
        const GridFunction gp = fractional_power(fam.op(), p, u, cfg);
        for (std::size_t k = 0; k < betas.size(); ++k) {
            r.norms[k] = std::max(r.norms[k], apply_S(fam, betas[k], gp).sup_norm());
        }
    }
    if (probes.kernel_rows) {
        // Columns of G^p; the sign of a row of S_beta G^p is its norming input.
        const std::size_t n = fam.op().size();
        std::vector<GridFunction> cols;
        for (std::size_t j = 0; j < n; ++j) {
            GridFunction e(n);
            e[j] = 1.0;
            cols.push_back(fractional_power(fam.op(), p, e, cfg));
        }
        for (std::size_t k = 0; k < betas.size(); ++k) {
            std::vector<GridFunction> a;
            for (const GridFunction& c : cols) {
                a.push_back(apply_S(fam, betas[k], c));
            }
            for (std::size_t row : {n - 1, n - 2}) {
                GridFunction image(n);
                for (std::size_t j = 0; j < n; ++j) {
                    const double sign = a[j][row] < 0.0 ? -1.0 : 1.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        image[i] += sign * a[j][i];
                    }
                }
                r.norms[k] = std::max(r.norms[k], image.sup_norm());
            }
        }
    }
    for (std::size_t k = 0; k < betas.size(); ++k) {
        r.ratios.push_back(r.norms[k] / std::pow(betas[k], p));
        r.max_ratio = std::max(r.max_ratio, r.ratios.back());
    }
    if (betas.size() >= 3) {
        r.fit = fit_loglog_above_floor(r.betas, r.norms);
    }
    return r;
}

AuxiliaryElement make_aux(const RegularizerFamily& fam, double beta, const GridFunction& u_true,
                          const GridFunction& u_bar_witness, double a, const QuadratureConfig& cfg) {
    require_beta(beta, "make_aux");
    if (!(a > 0.0) || fam.saturation() < 1.0 + a) {
        throw DomainError("make_aux: need a > 0 and saturation m >= 1 + a");
    }
    const ScaleOperator& op = fam.op();
    require_same_grid(u_true, u_bar_witness, "make_aux");
    const GridFunction u_bar = op.apply(u_bar_witness);
    const GridFunction d = u_true - u_bar;

    AuxiliaryElement e{beta, u_bar, apply_R(fam, beta, d)};
    const GridFunction s_d = apply_S(fam, beta, d);
    // R_beta G = G R_beta, so u_bar + R_beta G d = u_bar + G (R_beta d).
    e.u_aux = u_bar + apply_R(fam, beta, op.apply(d));
    const GridFunction other = u_true - s_d;

    const double scale = std::max({1.0, u_true.sup_norm(), u_bar.sup_norm(), e.witness.sup_norm()});
    if (sup_distance(e.u_aux, other) > 1e-10 * scale) {
        throw ConsistencyError("make_aux: the two forms of the auxiliary element disagree");
    }
    e.residual_to_truth = s_d.sup_norm();
    e.a_norm_gap = fractional_power(op, a, s_d, cfg).sup_norm();
    e.one_norm = e.witness.sup_norm();
    return e;
}

std::vector<GRow> eval_g(const RegularizerFamily& fam, const std::vector<double>& betas,
                         const GridFunction& u_true, const GridFunction& u_bar_witness, double a,
                         const QuadratureConfig& cfg) {
    std::vector<GRow> rows;
    for (double beta : betas) {
        const AuxiliaryElement e = make_aux(fam, beta, u_true, u_bar_witness, a, cfg);
        rows.push_back({beta, e.residual_to_truth, e.a_norm_gap / std::pow(beta, a), beta * e.one_norm});
    }
    return rows;
}

std::vector<double> geometric_betas(double hi, double lo, int count) {
    if (!(hi > lo && lo > 0.0) || count < 2) {
        throw DomainError("geometric_betas: need hi > lo > 0 and at least 2 points");
    }
    std::vector<double> out;
    const double lh = std::log10(hi);
    const double ll = std::log10(lo);
    for (int k = 0; k < count; ++k) {
        out.push_back(std::pow(10.0, lh + (ll - lh) * k / (count - 1)));
    }
    return out;
}

void write_decay_csv(std::ostream& os, const DecayReport& report) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "beta,norm,ratio\n";
    for (std::size_t k = 0; k < report.betas.size(); ++k) {
        os << report.betas[k] << ',' << report.norms[k] << ',' << report.ratios[k] << '\n';
    }
    os.precision(old);
}

void write_g_csv(std::ostream& os, const std::vector<GRow>& rows) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "beta,g1,g2,g3\n";
    for (const GRow& row : rows) {
        os << row.beta << ',' << row.g1 << ',' << row.g2 << ',' << row.g3 << '\n';
    }
    os.precision(old);
}

} // namespace oversmooth
