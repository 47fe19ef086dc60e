#pragma once

#include <cstdint>
#include <vector>

#include "soblab/grid.hpp"

// Generalized Yamabe constant on weighted intervals: quotient evaluation,
// minimization over the non-negative unit L^{2*} sphere, Euler-Lagrange
// residuals, the density upper bound, and a refinement-family trend test.

namespace soblab {

/// Sampled scalar term S with its declared integrability exponent
/// (must exceed N/2 for the Yamabe functional to be well posed).
struct ScalarField {
    const WeightedGrid* grid = nullptr;
    std::vector<double> values;
    double declared_p = 0.0;

    ScalarField(const WeightedGrid& g, std::vector<double> v, double p_decl,
                double N);
};

struct YamabeReport {
    double lambda_estimate = 0.0;
    SampledFunction minimizer;  // non-negative, unit L^{2*}
    double el_residual = 0.0;
    double grad_norm_final = 0.0;
    int iterations = 0;
    bool converged = false;
    bool unbounded_suspected = false;
    std::vector<double> trace;
};

struct YamabeOptions {
    int max_iter = 5000;
    double grad_tol = 1e-7;
    uint64_t seed = 0;
    int n_restarts = 4;
};

/// (int |u'|^2 dm + int S u^2 dm) / ||u||_{L^{2*}}^2 on a mass-1 grid.
double yamabe_quotient(const SampledFunction& u, const ScalarField& S,
                       double N);

/// Projected gradient descent over {u >= 0, ||u||_{2*} = 1}; the returned
/// value is an upper bound for the Yamabe constant by construction.
YamabeReport minimize_yamabe(const WeightedGrid& grid, const ScalarField& S,
                             double N, const YamabeOptions& opts = {});

/// max over hat-function test directions v of
/// |int u'v' + int S u v - lambda int u^{2*-1} v| / ||v||_{W^{1,2}}.
double euler_lagrange_residual(const SampledFunction& u, double lambda,
                               const ScalarField& S, double N);

struct YamabeBoundReport {
    bool passed = false;
    double bound = 0.0;  // min_theta^{2/N} / Eucl(N,2)^2
};

/// Checks lambda <= min_theta^{2/N} / Eucl(N,2)^2 + tol.
YamabeBoundReport yamabe_upper_bound_check(double lambda_estimate,
                                           double min_theta, double N,
                                           double tol = 1e-9);

struct TrendReport {
    std::vector<double> lambdas;
    double max_successive_jump = 0.0;
    bool cauchy = false;  // jumps shrink along the family
};

/// Yamabe constants along a refinement family of grids and scalar terms;
/// passes when successive jumps decay.
TrendReport lambda_continuity_trend(
    const std::vector<const WeightedGrid*>& grid_family,
    const std::vector<const ScalarField*>& S_family, double N,
    const YamabeOptions& opts = {});

}  // namespace soblab
