#include "soblab/constants.hpp"

#include <cmath>
#include <numbers>

namespace soblab {

namespace {

// Lanczos approximation, g = 7, 9 coefficients. Good for ~1e-14 relative
// error over the positive axis; reflection handles x < 0.5.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double gamma_lanczos(double x) {
    // Valid for x >= 0.5.
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x - 1.0 + i);
    const double t = x + 6.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x - 0.5) *
           std::exp(-t) * a;
}

// Gauss-Kronrod 7-15 abscissae and weights on [-1,1] (positive half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Gk {
    double kronrod;
    double err;
};

Gk gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = h * kXgk[i];
        double fv;
        if (i == 7) {
            fv = f(c);
            resk += kWgk[7] * fv;
            resg += kWg[3] * fv;
        } else {
            const double f1 = f(c - x);
            const double f2 = f(c + x);
            fv = f1 + f2;
            resk += kWgk[i] * fv;
            if (i % 2 == 1) resg += kWg[i / 2] * fv;
        }
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth) {
    const Gk r = gk15(f, a, b);
    if (r.err <= tol || depth >= 48) return r.kronrod;
    const double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, tol * 0.5, depth + 1) +
           integrate_rec(f, c, b, tol * 0.5, depth + 1);
}

}  // namespace

double gamma_fn(double x) {
    if (!std::isfinite(x) || (x <= 0.0 && x == std::floor(x)))
        throw std::domain_error("gamma_fn: pole at non-positive integers");
    if (x < 0.5) {
        // Reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1-x)).
        return std::numbers::pi /
               (std::sin(std::numbers::pi * x) * gamma_lanczos(1.0 - x));
    }
    return gamma_lanczos(x);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol) {
    if (a == b) return 0.0;
    const Gk whole = gk15(f, a, b);
    const double tol =
        std::max(abs_tol, rel_tol * std::abs(whole.kronrod));
    if (whole.err <= tol) return whole.kronrod;
    const double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, tol * 0.5, 1) +
           integrate_rec(f, c, b, tol * 0.5, 1);
}

double unit_ball_volume(double N) {
    if (!(N >= 1.0)) throw std::domain_error("unit_ball_volume: requires N >= 1");
    return std::pow(std::numbers::pi, 0.5 * N) / gamma_fn(0.5 * N + 1.0);
}

double unit_sphere_volume(double N) {
    if (!(N >= 1.0)) throw std::domain_error("unit_sphere_volume: requires N >= 1");
    return N * unit_ball_volume(N);
}

double eucl_constant(double N, double p) {
    if (!(p > 1.0 && p < N))
        throw std::domain_error("eucl_constant: requires 1 < p < N");
    const double omega = unit_ball_volume(N);
    const double a = std::pow(N * (p - 1.0) / (N - p), (p - 1.0) / p);
    const double ratio = gamma_fn(N + 1.0) /
                         (N * omega * gamma_fn(N / p) * gamma_fn(N + 1.0 - N / p));
    return (1.0 / N) * a * std::pow(ratio, 1.0 / N);
}

double eucl_constant_2(double N) {
    if (!(N > 2.0)) throw std::domain_error("eucl_constant_2: requires N > 2");
    const double sigma_N = unit_sphere_volume(N + 1.0);  // sigma_N = (N+1) omega_{N+1}
    return std::sqrt(4.0 / (N * (N - 2.0) * std::pow(sigma_N, 2.0 / N)));
}

double comparison_volume(double K, double N, double r) {
    if (!(r >= 0.0)) throw std::domain_error("comparison_volume: requires r >= 0");
    if (!(N >= 1.0)) throw std::domain_error("comparison_volume: requires N >= 1");
    const double sigma = unit_sphere_volume(N);  // sigma_{N-1}
    if (K == 0.0 || N == 1.0) {
        // |t|^{N-1} has the exact primitive t^N / N.
        if (K > 0.0 && N == 1.0 && !(r <= std::numbers::pi * std::sqrt(0.0 / K)))
            throw std::domain_error("comparison_volume: r beyond diameter bound");
        return sigma * std::pow(r, N) / N;
    }
    // Normalized profile s(t) with s'(0) = 1, so the small-r behavior matches
    // the flat cone and m(B_r)/v_{K,N}(r) -> theta_N as r -> 0.
    const double lam = std::sqrt(std::abs(K) / (N - 1.0));
    if (K > 0.0) {
        const double r_max = std::numbers::pi / lam;  // pi * sqrt((N-1)/K)
        if (r > r_max * (1.0 + 1e-12))
            throw std::domain_error("comparison_volume: r beyond diameter bound");
        return sigma * integrate(
                           [&](double t) {
                               return std::pow(std::abs(std::sin(lam * t) / lam),
                                               N - 1.0);
                           },
                           0.0, std::min(r, r_max));
    }
    return sigma * integrate(
                       [&](double t) {
                           return std::pow(std::sinh(lam * t) / lam, N - 1.0);
                       },
                       0.0, r);
}

ExtendedReal distortion_sigma(double t, double K, double N, double theta) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("distortion_sigma: requires t in [0,1]");
    if (!(theta >= 0.0) || !(N >= 0.0))
        throw std::domain_error("distortion_sigma: requires theta >= 0, N >= 0");
    const double kt2 = K * theta * theta;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    if (kt2 >= N * pi2 && kt2 > 0.0) return ExtendedReal::inf();
    if (kt2 == 0.0 || (kt2 < 0.0 && N == 0.0)) return ExtendedReal::finite(t);
    if (kt2 > 0.0) {
        const double a = theta * std::sqrt(K / N);
        return ExtendedReal::finite(std::sin(t * a) / std::sin(a));
    }
    const double a = theta * std::sqrt(-K / N);
    return ExtendedReal::finite(std::sinh(t * a) / std::sinh(a));
}

ExtendedReal distortion_tau(double t, double K, double N, double theta) {
    if (!(N >= 1.0)) throw std::domain_error("distortion_tau: requires N >= 1");
    if (N == 1.0) {
        if (K > 0.0) return ExtendedReal::inf();
        if (!(t >= 0.0 && t <= 1.0))
            throw std::domain_error("distortion_tau: requires t in [0,1]");
        return ExtendedReal::finite(t);
    }
    const ExtendedReal s = distortion_sigma(t, K, N - 1.0, theta);
    if (s.infinite) return ExtendedReal::inf();
    return ExtendedReal::finite(std::pow(t, 1.0 / N) *
                                std::pow(s.value, 1.0 - 1.0 / N));
}

}  // namespace soblab
