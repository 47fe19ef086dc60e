#include "soblab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "soblab/constants.hpp"
#include "soblab/sobolev.hpp"

namespace soblab {

namespace {

// |u|^q mass per cell (trapezoid), the measure whose concentration we track.
std::vector<double> power_cell_mass(const SampledFunction& u, double q) {
    const auto& m = u.grid->cell_mass();
    std::vector<double> out(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        out[i] = m[i] * 0.5 *
                 (std::pow(std::abs(u.values[i]), q) +
                  std::pow(std::abs(u.values[i + 1]), q));
    return out;
}

// Location of the running mode: center of the cell maximizing the 3-cell
// smoothed |u|^q mass.
double mode_location(const SampledFunction& u, double q) {
    const auto pm = power_cell_mass(u, q);
    const auto& x = u.grid->nodes();
    double best = -1.0;
    size_t best_i = 0;
    for (size_t i = 0; i < pm.size(); ++i) {
        double s = pm[i];
        if (i > 0) s += pm[i - 1];
        if (i + 1 < pm.size()) s += pm[i + 1];
        if (s > best) {
            best = s;
            best_i = i;
        }
    }
    return 0.5 * (x[best_i] + x[best_i + 1]);
}

// Smallest radius around `center` capturing `fraction` of the |u|^q mass,
// and the captured fraction at that radius.
std::pair<double, double> capture_radius(const SampledFunction& u, double q,
                                         double center, double fraction) {
    const auto pm = power_cell_mass(u, q);
    const auto& x = u.grid->nodes();
    double total = 0.0;
    for (double m : pm) total += m;
    if (total <= 0.0) return {0.0, 0.0};
    // Sort cells by distance of their midpoint from the center.
    std::vector<std::pair<double, double>> by_dist(pm.size());
    for (size_t i = 0; i < pm.size(); ++i)
        by_dist[i] = {std::abs(0.5 * (x[i] + x[i + 1]) - center), pm[i]};
    std::sort(by_dist.begin(), by_dist.end());
    double acc = 0.0;
    for (const auto& [dist, m] : by_dist) {
        acc += m;
        if (acc >= fraction * total) return {dist, acc / total};
    }
    return {by_dist.back().first, 1.0};
}

}  // namespace

SequenceDiagnostics classify_sequence(const WeightedGrid& grid,
                                      const std::vector<SampledFunction>& seq,
                                      double q,
                                      const ConcentrationConfig& cfg) {
    if (seq.size() < 4)
        throw std::invalid_argument("classify_sequence: need >= 4 terms");
    const size_t m = seq.size();

    SequenceDiagnostics diag;
    std::vector<SampledFunction> norm;
    norm.reserve(m);
    for (const auto& u : seq) {
        if (u.grid != &grid)
            throw std::invalid_argument(
                "classify_sequence: all terms must live on the given grid");
        const double nq = lp_norm(u, q);
        diag.lq_norms.push_back(nq);
        if (!(nq > 0.0))
            throw std::invalid_argument("classify_sequence: zero term");
        if (std::abs(nq - 1.0) > 1e-10) diag.auto_normalized = true;
        std::vector<double> v(u.values);
        for (double& vi : v) vi /= nq;
        norm.emplace_back(grid, std::move(v));
    }
    for (const auto& u : norm) {
        diag.l2_norms.push_back(lp_norm(u, 2.0));
        const double e = dirichlet_energy(u, 2.0);
        diag.energy.push_back(e);
        // The quotient is only defined on unit-mass grids and non-constant
        // terms; record 0 otherwise so the trace stays aligned.
        const bool unit_mass = std::abs(grid.total_mass() - 1.0) <= 1e-8;
        diag.quotient_trace.push_back(
            e > 1e-14 && unit_mass ? sobolev_quotient(u, q) : 0.0);
    }

    // Concentration probe: capture radii around the per-term modes.
    std::vector<double> fracs(m);
    for (size_t k = 0; k < m; ++k) {
        const double center = mode_location(norm[k], q);
        const auto [rad, frac] =
            capture_radius(norm[k], q, center, cfg.ball_fraction);
        diag.conc_radii.push_back(rad);
        fracs[k] = frac;
        if (k + 1 == m) diag.location = center;
    }
    diag.mass_in_shrinking_balls = fracs.back();

    const bool l2_decays =
        diag.l2_norms.back() < cfg.decay_factor * diag.l2_norms.front();
    const bool radii_shrink =
        diag.conc_radii.back() <=
            cfg.shrink_factor * (diag.conc_radii.front() + 1e-300) &&
        fracs.back() >= cfg.ball_fraction - 1e-12;
    if (l2_decays && radii_shrink) {
        diag.classification = SequenceClass::Concentration;
        return diag;
    }

    // Relative non-constancy of each term.
    std::vector<double> c(m);
    for (size_t k = 0; k < m; ++k) {
        std::vector<double> v(norm[k].values);
        const double mu = mean(norm[k]);
        for (double& vi : v) vi -= mu;
        c[k] = lp_norm(SampledFunction(grid, std::move(v)), 2.0) /
               std::max(diag.l2_norms[k], 1e-300);
    }

    // Tail L2 distance to the running limit (the last term).
    std::vector<double> vdiff(norm.back().values.size());
    for (size_t i = 0; i < vdiff.size(); ++i)
        vdiff[i] = norm[m - 2].values[i] - norm[m - 1].values[i];
    const double tail_dist =
        lp_norm(SampledFunction(grid, std::move(vdiff)), 2.0);
    const bool tail_converges =
        tail_dist <= cfg.limit_distance * std::max(diag.l2_norms.back(), 1e-300);

    if (tail_converges && c.back() >= cfg.constant_margin &&
        diag.energy.back() > 1e-8) {
        diag.classification = SequenceClass::NonConstantLimit;
        return diag;
    }
    const bool c_shrinks = c.back() <= 0.5 * c.front() + 1e-300;
    const bool l2_persists =
        diag.l2_norms.back() >= 0.5 * diag.l2_norms.front();
    if (tail_converges && c.back() < cfg.constant_margin && c_shrinks &&
        l2_persists) {
        diag.classification = SequenceClass::ConstantLimit;
        return diag;
    }
    diag.classification = SequenceClass::Inconclusive;
    return diag;
}

BrezisLiebReport brezis_lieb_check(const WeightedGrid& grid,
                                   const std::vector<SampledFunction>& u_seq,
                                   const std::vector<SampledFunction>& v_seq,
                                   double q, double q_prime) {
    if (u_seq.size() != v_seq.size() || u_seq.size() < 4)
        throw std::invalid_argument(
            "brezis_lieb_check: sequences must match and have >= 4 terms");
    const size_t m = u_seq.size();
    // Precondition trends: v_seq convergent (in both norms) to its limit,
    // u_seq bounded in Lq and convergent in L^{q'}.
    const auto dist = [&](const SampledFunction& a, const SampledFunction& b,
                          double p) {
        std::vector<double> d(a.values.size());
        for (size_t i = 0; i < d.size(); ++i)
            d[i] = a.values[i] - b.values[i];
        return lp_norm(SampledFunction(grid, std::move(d)), p);
    };
    std::string violated;
    const double v_conv_q = dist(v_seq[m - 2], v_seq[m - 1], q);
    const double v_conv_qp = dist(v_seq[m - 2], v_seq[m - 1], q_prime);
    const double v0_q = dist(v_seq[0], v_seq[m - 1], q);
    const double v0_qp = dist(v_seq[0], v_seq[m - 1], q_prime);
    if (!(v_conv_q <= 0.5 * v0_q + 1e-9))
        violated += " v_seq-not-Lq-convergent";
    if (!(v_conv_qp <= 0.5 * v0_qp + 1e-9))
        violated += " v_seq-not-Lq'-convergent";
    const double u_conv_qp = dist(u_seq[m - 2], u_seq[m - 1], q_prime);
    const double u0_qp = dist(u_seq[0], u_seq[m - 1], q_prime);
    if (!(u_conv_qp <= 0.5 * u0_qp + 1e-9))
        violated += " u_seq-not-Lq'-convergent";
    double max_lq = 0.0;
    for (const auto& u : u_seq) max_lq = std::max(max_lq, lp_norm(u, q));
    if (!(max_lq < 1e6)) violated += " u_seq-unbounded-in-Lq";
    if (!violated.empty())
        throw std::invalid_argument("brezis_lieb_check: preconditions failed:" +
                                    violated);

    const SampledFunction& u_inf = v_seq.back();
    const double inf_q = std::pow(lp_norm(u_inf, q), q);
    BrezisLiebReport rep;
    for (size_t k = 0; k < m; ++k) {
        const double uk_q = std::pow(lp_norm(u_seq[k], q), q);
        const double diff_q = std::pow(dist(u_seq[k], v_seq[k], q), q);
        rep.defects.push_back(std::abs(uk_q - diff_q - inf_q));
    }
    for (size_t k = m / 2; k < m; ++k)
        rep.max_tail_defect = std::max(rep.max_tail_defect, rep.defects[k]);
    rep.decaying =
        rep.defects.back() <= rep.defects[m / 2] + 1e-12 &&
        rep.defects.back() <= 0.9 * rep.defects.front() + 1e-12;
    return rep;
}

DensityBoundReport concentration_density_bound(double theta_at_point,
                                               bool theta_infinite,
                                               double limsup_A, double N,
                                               double p, double tol) {
    DensityBoundReport rep;
    if (theta_infinite) {
        rep.lhs = std::numeric_limits<double>::infinity();
        rep.rhs = 0.0;
        rep.passed = limsup_A <= tol;
        return rep;
    }
    if (!(theta_at_point >= 0.0))
        throw std::invalid_argument(
            "concentration_density_bound: negative density");
    rep.lhs = theta_at_point;
    rep.rhs = std::pow(eucl_constant(N, p), N) *
              std::pow(limsup_A, -N / p);
    rep.passed = rep.lhs <= rep.rhs * (1.0 + tol);
    return rep;
}

}  // namespace soblab
