#pragma once

#include <cstdint>
#include <vector>

#include "soblab/grid.hpp"

// Sobolev quotients on unit-mass weighted intervals, the weighted Neumann
// spectral gap, numerical optimization of the tight-Sobolev leading constant,
// and the closed-form constants tied to them.

namespace soblab {

struct QuotientReport {
    double value = 0.0;
    SampledFunction argmax;
    int iterations = 0;
    double grad_norm_final = 0.0;
    bool converged = false;
    std::vector<double> trace;
};

struct SpectralGapResult {
    double lambda = 0.0;
    SampledFunction eigenfunction;  // zero-mean, unit L2
    double residual = 0.0;
};

/// Q_q(u) = (||u||_{Lq}^2 - ||u||_{L2}^2) / ||u'||_{L2}^2 on a mass-1 grid.
double sobolev_quotient(const SampledFunction& u, double q);

/// Smallest nonzero eigenvalue of -(h u')' = lambda h u with Neumann ends.
SpectralGapResult spectral_gap(const WeightedGrid& grid,
                               bool auto_normalize = false);

struct AoptOptions {
    int n_restarts = 8;
    int max_iter = 5000;
    double grad_tol = 1e-7;
    uint64_t seed = 0;
};

/// Maximizes Q_q by projected gradient ascent from seeded restarts; the
/// returned value is a lower-bound estimate of the optimal constant.
QuotientReport optimize_aopt(const WeightedGrid& grid, double q,
                             const AoptOptions& opts = {});

/// ||v_b||_{L^{p*}} / ||v_b'||_{L^p} for v_b(r) = (1 + b r^{p/(p-1)})^{(p-N)/p}
/// on the truncated cone model; equals the sharp Euclidean constant in the
/// untruncated limit.
double bliss_quotient(double b, double N, double p, double R_max, int n_nodes);

/// (Eucl(N,p) / min_theta^{1/N})^p; 0 when min_theta is infinite
/// (pass infinity).
double alpha_p_value(double min_theta, double N, double p);

/// (Eucl(N,p)/A)^N: the asymptotic volume ratio forced by a (p*,p) Sobolev
/// inequality with leading constant A.
double avr_lower_bound_from_sobolev(double A, double N, double p);

struct LinearizationReport {
    std::vector<double> eps;
    std::vector<double> lhs;     // Q_q(1 + eps f)
    double rhs = 0.0;            // (q-2)||f - mean||_{L2}^2 / ||f'||_{L2}^2
    std::vector<double> defect;  // |lhs - rhs|
    double fitted_order = 0.0;   // log-log slope of defect vs eps
    double max_defect_ratio = 0.0;
};

/// Checks Q_q(1+eps f) -> (q-2)||f-mean||^2/||f'||^2 with a power-law defect.
LinearizationReport linearization_check(const WeightedGrid& grid,
                                        const SampledFunction& f, double q,
                                        const std::vector<double>& eps_list);

struct TightCheckResult {
    bool passed = false;
    double worst_margin = 0.0;  // min over trials of RHS - LHS
    SampledFunction witness;    // sharpest (or violating) trial
    int violating_trial = -1;
};

/// Verifies ||u||_{Lq}^2 <= A ||u'||^2 + ||u||_{L2}^2 over seeded random
/// smooth trials plus one optimizer-driven adversarial trial.
TightCheckResult tight_sobolev_check(const WeightedGrid& grid, double q,
                                     double A, int trials, uint64_t seed);

}  // namespace soblab
