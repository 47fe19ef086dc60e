#pragma once

#include <vector>

#include "soblab/grid.hpp"

// Diagnostics for extremizing sequences: trichotomy classification
// (non-constant limit / constant limit / concentration), a Brezis-Lieb
// defect check, and the density bound at concentration points.

namespace soblab {

enum class SequenceClass {
    NonConstantLimit,
    ConstantLimit,
    Concentration,
    Inconclusive,
};

/// Fixed decision thresholds, surfaced so runs can document them.
struct ConcentrationConfig {
    double ball_fraction = 0.9;   // |u|^q mass required inside the ball
    double decay_factor = 0.1;    // L2 decay: last < factor * first
    double shrink_factor = 0.5;   // concentration radius must halve
    double constant_margin = 0.25;  // relative non-constancy cutoff
    double limit_distance = 0.1;  // tail L2 distance to the running limit
};

struct SequenceDiagnostics {
    SequenceClass classification = SequenceClass::Inconclusive;
    double location = 0.0;              // concentration point (if any)
    double mass_in_shrinking_balls = 0.0;
    std::vector<double> l2_norms;
    std::vector<double> lq_norms;       // pre-normalization Lq norms
    std::vector<double> energy;
    std::vector<double> quotient_trace;
    std::vector<double> conc_radii;     // radius capturing ball_fraction
    bool auto_normalized = false;
};

/// Classifies a normalized (||u||_{Lq} = 1) sequence into the trichotomy;
/// ambiguous trends yield Inconclusive, never a guess.
SequenceDiagnostics classify_sequence(const WeightedGrid& grid,
                                      const std::vector<SampledFunction>& seq,
                                      double q,
                                      const ConcentrationConfig& cfg = {});

struct BrezisLiebReport {
    std::vector<double> defects;  // per-index Brezis-Lieb defect
    double max_tail_defect = 0.0;
    bool decaying = false;
};

/// defect_k = | int|u_k|^q - int|u_k - v_k|^q - int|u_inf|^q | with u_inf the
/// limit of v_seq (its last term). Requires v_seq convergent in L^{q'} and
/// L^q and u_seq bounded in L^q, convergent in L^{q'}.
BrezisLiebReport brezis_lieb_check(const WeightedGrid& grid,
                                   const std::vector<SampledFunction>& u_seq,
                                   const std::vector<SampledFunction>& v_seq,
                                   double q, double q_prime);

struct DensityBoundReport {
    bool passed = false;
    double lhs = 0.0;  // theta_N(y0)
    double rhs = 0.0;  // Eucl(N,p)^N (limsup A)^{-N/p}
};

/// Checks theta_N(y0) <= Eucl(N,p)^N (limsup A_n)^{-N/p}; an infinite theta
/// (pass theta_infinite = true) requires limsup A = 0.
DensityBoundReport concentration_density_bound(double theta_at_point,
                                               bool theta_infinite,
                                               double limsup_A, double N,
                                               double p, double tol = 1e-9);

}  // namespace soblab
