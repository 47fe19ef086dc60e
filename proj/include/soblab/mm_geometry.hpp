#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "soblab/grid.hpp"

// Bishop-Gromov densities, asymptotic volume ratio, perimeters and
// isoperimetric scans, Brunn-Minkowski spot checks, and local Sobolev
// verification, on finite metric measure spaces and 1D weighted intervals.

namespace soblab {

/// Finite metric measure space: symmetric distance matrix with zero diagonal
/// satisfying the triangle inequality, plus positive point masses.
class DiscreteMMS {
  public:
    /// Validation is O(n^3); callers with n > 2000 must opt out explicitly.
    static DiscreteMMS from_matrix(std::vector<std::vector<double>> distance,
                                   std::vector<double> mass,
                                   bool validate_triangle = true);

    /// Edge list [i,j,d]; missing distances completed by shortest paths.
    static DiscreteMMS from_edges(int n,
                                  const std::vector<std::array<double, 3>>& edges,
                                  std::vector<double> mass);

    /// Parses the JSON formats {"distance":[[..]],"mass":[..]} and
    /// {"n":k,"edges":[[i,j,d],..],"mass":[..]}.
    static DiscreteMMS load(const std::string& path,
                            bool validate_triangle = true);

    int n_points() const { return static_cast<int>(mass_.size()); }
    double distance(int i, int j) const { return dist_[i][j]; }
    double mass(int i) const { return mass_[i]; }
    double total_mass() const { return total_mass_; }

  private:
    std::vector<std::vector<double>> dist_;
    std::vector<double> mass_;
    double total_mass_ = 0.0;
};

/// Mass of the open ball B_r(x) (strict inequality d < r).
double ball_mass(const DiscreteMMS& space, int x, double r);
/// Measure of (x-r, x+r) intersected with the interval domain.
double ball_mass(const WeightedGrid& grid, double x, double r);

struct DensityProfile {
    double center = 0.0;
    std::vector<double> radii;
    std::vector<double> theta_r;  // m(B_r)/(omega_N r^N)
    bool infinite = false;        // diverging as r -> 0
    double theta_smallest = 0.0;  // value at the smallest radius
    double theta_sup = 0.0;       // sup over the radius list
    /// The reported estimate of theta_N(x): the sup over radii (the honest
    /// estimator under Bishop-Gromov monotonicity); meaningless if infinite.
    double theta_0_estimate = 0.0;
};

DensityProfile density_profile(const WeightedGrid& grid, double x, double N,
                               const std::vector<double>& radii);
DensityProfile density_profile(const DiscreteMMS& space, int x, double N,
                               const std::vector<double>& radii);

/// Large-r limit of theta_{N,r} on cone-like grids, with a Bishop-Gromov
/// monotonicity check over the largest decade of radii.
double avr_estimate(const WeightedGrid& grid, double x, double N);

/// 1D perimeter of {u > t}: sum of the weight at each crossing point.
/// Requires t to be a regular value (no plateau of u at level t).
double perimeter_superlevel(const SampledFunction& u, double t);

struct MinkowskiReport {
    std::vector<double> deltas;
    std::vector<double> estimates;  // (m(E^delta) - m(E)) / delta
    double value = 0.0;             // min over the list (liminf proxy)
};

MinkowskiReport minkowski_content(const DiscreteMMS& space,
                                  const std::vector<int>& E,
                                  const std::vector<double>& delta_list);

/// inf over scanned sub-intervals E of region of Per(E)/m(E)^{(N-1)/N}.
double isoperimetric_constant(const WeightedGrid& grid, double region_lo,
                              double region_hi, double N);

struct BrunnMinkowskiReport {
    bool vacuous = false;  // infinite distortion coefficient
    bool passed = false;
    double lhs = 0.0;  // m(A_t)^{1/N}
    double rhs = 0.0;  // sigma^{(1-t)} m(A0)^{1/N} + sigma^{(t)} m(A1)^{1/N}
    double theta = 0.0;
};

/// Checks m(A_t)^{1/N} >= sigma^{(1-t)}_{K,N}(theta) m(A0)^{1/N} +
/// sigma^{(t)}_{K,N}(theta) m(A1)^{1/N} for interval midpoint sets, with
/// theta the inf (K >= 0) or sup (K < 0) of distances between A0 and A1.
BrunnMinkowskiReport brunn_minkowski_check(const WeightedGrid& grid,
                                           double a0, double b0, double a1,
                                           double b1, double t, double K,
                                           double N);

struct LocalSobolevReport {
    bool passed = false;
    double bound = 0.0;          // (1+eps) Eucl(N,p) theta_{N,R}(x)^{-1/N}
    double sharpest_ratio = 0.0; // max over trials of ||u||_{p*}/||u'||_p
    double eps = 0.0;            // regime slack from the almost-Euclidean
                                 // isoperimetric factor
    bool outside_regime = false;
    int worst_trial = -1;
};

/// Verifies ||u||_{L^{p*}} <= (1+eps) Eucl(N,p) theta_{N,R}(x)^{-1/N}
/// ||u'||_{L^p} over seeded trial functions supported in B_r(x).
LocalSobolevReport local_sobolev_check(const WeightedGrid& grid, double x,
                                       double r, double R, double N, double p,
                                       int trials, uint64_t seed);

}  // namespace soblab
