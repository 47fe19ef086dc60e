#pragma once

#include <functional>
#include <stdexcept>

// Closed-form geometric constants: generalized ball/sphere volumes, the sharp
// Euclidean Sobolev constant, comparison volumes and distortion coefficients.
// All dimensions N are real-valued; nothing here assumes integer dimension.

namespace soblab {

/// Gamma function via Lanczos approximation (reflection for x < 0.5).
/// Relative error below 1e-13 on (0, 50].
double gamma_fn(double x);

/// Adaptive Gauss-Kronrod (7-15) quadrature of f on [a,b].
/// Tolerances: abs 1e-12, rel 1e-10 unless overridden.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-10);

/// omega_N = pi^{N/2} / Gamma(N/2 + 1): volume of the generalized unit ball.
double unit_ball_volume(double N);

/// sigma_{N-1} = N * omega_N: volume of the generalized unit sphere S^{N-1}.
/// Takes N and returns sigma_{N-1}.
double unit_sphere_volume(double N);

/// Sharp Euclidean Sobolev constant Eucl(N,p), 1 < p < N.
double eucl_constant(double N, double p);

/// Eucl(N,2) = sqrt(4 / (N(N-2) sigma_N^{2/N})), N > 2.
double eucl_constant_2(double N);

/// Comparison volume v_{K,N}(r) = sigma_{N-1} * int_0^r |s_{K,N}(t)|^{N-1} dt,
/// with s_{K,N} the sin/sinh/linear profile. For K > 0 requires
/// r <= pi*sqrt((N-1)/K) (Bonnet-Myers range).
double comparison_volume(double K, double N, double r);

/// A non-negative extended real. The infinite branch of the distortion
/// coefficients is semantic (it encodes the Bonnet-Myers obstruction), so it
/// gets an explicit variant rather than a sentinel float.
struct ExtendedReal {
    bool infinite = false;
    double value = 0.0;

    static ExtendedReal inf() { return {true, 0.0}; }
    static ExtendedReal finite(double v) { return {false, v}; }
    bool operator==(const ExtendedReal&) const = default;
};

/// Distortion coefficient sigma^{(t)}_{K,N}(theta). Four-case definition:
/// +inf when K theta^2 >= N pi^2, sin-ratio for positive K theta^2,
/// t when K theta^2 = 0 (or N = 0 with K theta^2 < 0), sinh-ratio otherwise.
ExtendedReal distortion_sigma(double t, double K, double N, double theta);

/// tau^{(t)}_{K,N}(theta) = t^{1/N} * sigma^{(t)}_{K,N-1}(theta)^{1-1/N} for
/// N > 1; for N = 1 it is t when K <= 0 and +inf when K > 0.
ExtendedReal distortion_tau(double t, double K, double N, double theta);

}  // namespace soblab
