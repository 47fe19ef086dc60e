#pragma once

#include <memory>
#include <vector>

#include "soblab/grid.hpp"

// Distribution functions, generalized inverses, and monotone rearrangement
// onto the sphere model [0,pi] or the Euclidean cone model [0,infty).

namespace soblab {

/// Exact distribution function mu(t) = m({u > t}) of a piecewise-linear
/// non-negative u. `levels` is descending from max(u) to 0; `mu` is the
/// matching (ascending) array of right-limits m({u > t}). Jumps of mu
/// (plateaus of u) appear as duplicated levels carrying both one-sided
/// values, so piecewise-linear interpolation reproduces mu exactly.
struct DistributionProfile {
    std::vector<double> levels;
    std::vector<double> mu;
    double total_mass = 0.0;
    double max_value = 0.0;

    /// mu(t) for arbitrary t >= 0 (right-continuous).
    double evaluate(double t) const;
};

/// mu computed by a breakpoint sweep over the cells, with `n_levels` extra
/// uniform levels merged in (they are redundant for exactness but give the
/// reported profile a regular backbone).
DistributionProfile distribution_function(const SampledFunction& u,
                                          int n_levels);

/// Left-continuous generalized inverse u#(s) = inf{ t : mu(t) < s }.
class GeneralizedInverse {
  public:
    explicit GeneralizedInverse(DistributionProfile profile);
    /// u#(s); u#(0) = max value, u#(s) = 0 for s > mu(0).
    double operator()(double s) const;
    const DistributionProfile& profile() const { return profile_; }

  private:
    DistributionProfile profile_;
};

/// Result of a rearrangement: the output function owns its (sub-)grid.
struct Rearranged {
    std::shared_ptr<WeightedGrid> grid;
    SampledFunction fn;
};

/// Monotone rearrangement onto the sphere model: output on [0,r] with
/// m_N([0,r]) = m(domain of u), values u#(m_N([0,x])). Requires u >= 0 and
/// domain mass <= 1.
Rearranged monotone_rearrange_sphere(const SampledFunction& u, double N,
                                     int n_out);

/// Euclidean rearrangement onto the cone model: output on [0,r] with
/// omega_N r^N = m(domain of u), values u#(omega_N x^N). Requires u >= 0.
Rearranged euclidean_rearrange(const SampledFunction& u, double N, int n_out);

struct RearrangementTarget {
    enum class Kind { Sphere, Euclid } kind;
    double N;
    double C_Isop = 0.0;  // only for Euclid

    static RearrangementTarget sphere(double N) {
        return {Kind::Sphere, N, 0.0};
    }
    static RearrangementTarget euclid(double N, double C_Isop) {
        return {Kind::Euclid, N, C_Isop};
    }
};

struct PolyaSzegoReport {
    double energy_in = 0.0;
    double energy_out = 0.0;
    double ratio = 0.0;  // comparison LHS / energy_in (0 when energy_in = 0)
    bool passed = false;
    Rearranged rearranged;
};

/// Sphere target: passes iff energy_out <= energy_in * (1+tol).
/// Euclid target: passes iff (C_Isop/(N omega_N^{1/N}))^p * energy_out
/// <= energy_in * (1+tol).
PolyaSzegoReport polya_szego_report(const SampledFunction& u, double p,
                                    const RearrangementTarget& target,
                                    double tol = 5e-3);

}  // namespace soblab
