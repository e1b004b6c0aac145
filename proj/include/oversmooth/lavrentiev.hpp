#pragma once

#include "oversmooth/banach_scale.hpp"
#include "oversmooth/grid_function.hpp"
#include "oversmooth/loglog_fit.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace oversmooth {

/**
 * m-times iterated Lavrentiev method over G.
 *
 * R_beta f is the m-th iterate of (G + beta I) v_k = beta v_{k-1} + f, v_0 = 0, and
 * S_beta = beta^m (G + beta I)^{-m} = I - R_beta G. Saturation p0 = m.
 */
class RegularizerFamily {
public:
    RegularizerFamily(ScaleOperator op, int m);

    const ScaleOperator& op() const noexcept { return op_; }
    int m() const noexcept { return m_; }
    double saturation() const noexcept { return static_cast<double>(m_); }

    // ||R_beta|| <= c_star / beta with c_star = kappa + ... + kappa^m.
    double c_star() const noexcept;
    // ||S_beta G^p|| <= c_p beta^p: (kappa+1)^m for integer p, 2 (kappa+1)^{m+1} otherwise.
    double c_p(double p) const;

private:
    ScaleOperator op_;
    int m_;
};

GridFunction apply_R(const RegularizerFamily& fam, double beta, const GridFunction& f);
GridFunction apply_S(const RegularizerFamily& fam, double beta, const GridFunction& f);

struct DecayReport {
    double p = 0.0;
    double bound = 0.0;  // c_p
    std::vector<double> betas;
    std::vector<double> norms;
    std::vector<double> ratios;  // norm / beta^p
    double max_ratio = 0.0;
    LogLogFit fit;
};

struct ProbeSet {
    int random_count = 100;
    std::uint64_t seed = 20240611;
    // Also probe with the sign patterns of the last two kernel rows (n extra powers of G).
    bool kernel_rows = true;
};

// Deterministic probes {1, x, sign patterns} followed by seeded random unit-norm vectors.
// Kernel-row probes depend on beta and are added inside decay_check.
std::vector<GridFunction> unit_probes(std::size_t n, const ProbeSet& probes = {});

// Sampled lower bound for ||S_beta G^p|| per beta. p > m -> DomainError.
DecayReport decay_check(const RegularizerFamily& fam, double p, const std::vector<double>& betas,
                        const ProbeSet& probes = {}, const QuadratureConfig& cfg = {});

struct AuxiliaryElement {
    double beta = 0.0;
    GridFunction u_aux;
    GridFunction witness;          // R_beta (u_true - u_bar); u_aux = u_bar + G witness
    double residual_to_truth = 0;  // ||S_beta (u_true - u_bar)||
    double a_norm_gap = 0;         // ||G^a S_beta (u_true - u_bar)||
    double one_norm = 0;           // ||R_beta (u_true - u_bar)||
};

// Builds u_bar + R_beta G (u_true - u_bar) and u_true - S_beta (u_true - u_bar) and
// throws ConsistencyError when they disagree. u_bar = G u_bar_witness.
AuxiliaryElement make_aux(const RegularizerFamily& fam, double beta, const GridFunction& u_true,
                          const GridFunction& u_bar_witness, double a = 1.0,
                          const QuadratureConfig& cfg = {});

struct GRow {
    double beta = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
};

// g1 = ||S d||, g2 = beta^{-a} ||G^a S d||, g3 = beta ||R d|| with d = u_true - G u_bar_witness.
std::vector<GRow> eval_g(const RegularizerFamily& fam, const std::vector<double>& betas,
                         const GridFunction& u_true, const GridFunction& u_bar_witness, double a,
                         const QuadratureConfig& cfg = {});

// Geometric list from hi down to lo with the given number of points.
std::vector<double> geometric_betas(double hi, double lo, int count);

void write_decay_csv(std::ostream& os, const DecayReport& report);
void write_g_csv(std::ostream& os, const std::vector<GRow>& rows);

} // namespace oversmooth
