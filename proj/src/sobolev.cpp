#include "soblab/sobolev.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "soblab/constants.hpp"
#include "soblab/parallel.hpp"
#include "soblab/random.hpp"

namespace soblab {

namespace {

void require_unit_mass(const WeightedGrid& grid, const char* who) {
    if (std::abs(grid.total_mass() - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(who) +
                                    ": grid must have total mass 1");
}

// Lumped (diagonal) mass matrix matching the trapezoid Lp quadrature:
// ||u||_2^2 = sum_i M_i u_i^2.
std::vector<double> lumped_mass(const WeightedGrid& grid) {
    const auto& m = grid.cell_mass();
    std::vector<double> M(grid.n_nodes(), 0.0);
    for (size_t i = 0; i < m.size(); ++i) {
        M[i] += 0.5 * m[i];
        M[i + 1] += 0.5 * m[i];
    }
    return M;
}

// Per-cell stiffness coefficients s_c = m_c / dx_c^2, so that
// u^T K u = sum_c s_c (u_{i+1} - u_i)^2 equals the Dirichlet energy.
std::vector<double> stiffness_coeffs(const WeightedGrid& grid) {
    const auto& m = grid.cell_mass();
    const auto& x = grid.nodes();
    std::vector<double> s(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        const double dx = x[i + 1] - x[i];
        s[i] = m[i] / (dx * dx);
    }
    return s;
}

void apply_stiffness(const std::vector<double>& s, const std::vector<double>& u,
                     std::vector<double>& out) {
    const size_t n = u.size();
    std::fill(out.begin(), out.end(), 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        const double f = s[i] * (u[i + 1] - u[i]);
        out[i] -= f;
        out[i + 1] += f;
    }
}

// Number of eigenvalues of the symmetric tridiagonal matrix (diag d, offdiag
// e) strictly below x, by the Sturm/LDL negative-pivot count.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e,
                double x) {
    int count = 0;
    double piv = d[0] - x;
    if (piv < 0.0) ++count;
    for (size_t i = 1; i < d.size(); ++i) {
        double denom = piv;
        if (std::abs(denom) < 1e-300) denom = piv < 0.0 ? -1e-300 : 1e-300;
        piv = d[i] - x - e[i - 1] * e[i - 1] / denom;
        if (piv < 0.0) ++count;
    }
    return count;
}

// Solves (T - shift I) y = rhs for tridiagonal T by LU with a floor on tiny
// pivots (standard inverse-iteration safeguard).
void tridiag_shifted_solve(const std::vector<double>& d,
                           const std::vector<double>& e, double shift,
                           std::vector<double> rhs, std::vector<double>& y) {
    const size_t n = d.size();
    std::vector<double> diag(n), upper(n - 1);
    for (size_t i = 0; i < n; ++i) diag[i] = d[i] - shift;
    for (size_t i = 0; i + 1 < n; ++i) upper[i] = e[i];
    // Forward elimination.
    for (size_t i = 0; i + 1 < n; ++i) {
        double piv = diag[i];
        if (std::abs(piv) < 1e-280) piv = piv < 0.0 ? -1e-280 : 1e-280;
        const double factor = e[i] / piv;
        diag[i + 1] -= factor * upper[i];
        rhs[i + 1] -= factor * rhs[i];
        diag[i] = piv;
    }
    if (std::abs(diag[n - 1]) < 1e-280)
        diag[n - 1] = diag[n - 1] < 0.0 ? -1e-280 : 1e-280;
    y.assign(n, 0.0);
    y[n - 1] = rhs[n - 1] / diag[n - 1];
    for (size_t i = n - 1; i-- > 0;)
        y[i] = (rhs[i] - upper[i] * y[i + 1]) / diag[i];
}

// Per-cell Gauss quadrature data matching lp_norm: coefficients a[c][g] such
// that int f(u) dm ~= sum_{c,g} a[c][g] f(u_c(1-s_g) + u_{c+1} s_g).
struct CellQuad {
    static constexpr double kGx[5] = {0.046910077030668004,
                                      0.23076534494715845, 0.5,
                                      0.7692346550528416, 0.9530899229693319};
    static constexpr double kGw[5] = {0.11846344252809454,
                                      0.23931433524968324,
                                      0.28444444444444444,
                                      0.23931433524968324,
                                      0.11846344252809454};
    std::vector<std::array<double, 5>> a;

    explicit CellQuad(const WeightedGrid& grid) {
        const auto& m = grid.cell_mass();
        a.resize(m.size());
        for (size_t c = 0; c < m.size(); ++c) {
            double den = 0.0;
            for (int g = 0; g < 5; ++g)
                den += kGw[g] * grid.weight_in_cell(int(c), kGx[g]);
            for (int g = 0; g < 5; ++g) {
                const double wt = grid.weight_in_cell(int(c), kGx[g]);
                a[c][g] = den > 0.0 ? m[c] * kGw[g] * wt / den
                                    : m[c] * kGw[g];
            }
        }
    }
};

struct LqData {
    double norm_q;    // ||u||_q
    double norm2_sq;  // ||u||_2^2
};

LqData lq_data(const CellQuad& quad, const std::vector<double>& u, double q) {
    double sq = 0.0, s2 = 0.0;
    for (size_t c = 0; c < quad.a.size(); ++c)
        for (int g = 0; g < 5; ++g) {
            const double ug = u[c] + (u[c + 1] - u[c]) * CellQuad::kGx[g];
            sq += quad.a[c][g] * std::pow(std::abs(ug), q);
            s2 += quad.a[c][g] * ug * ug;
        }
    return {std::pow(sq, 1.0 / q), s2};
}

}  // namespace

double sobolev_quotient(const SampledFunction& u, double q) {
    require_unit_mass(*u.grid, "sobolev_quotient");
    const double energy = dirichlet_energy(u, 2.0);
    if (energy <= 1e-14)
        throw std::invalid_argument(
            "sobolev_quotient: constant input (zero Dirichlet energy)");
    const double nq = lp_norm(u, q);
    const double n2 = lp_norm(u, 2.0);
    return (nq * nq - n2 * n2) / energy;
}

SpectralGapResult spectral_gap(const WeightedGrid& grid, bool auto_normalize) {
    double mass_scale = 1.0;
    if (std::abs(grid.total_mass() - 1.0) > 1e-8) {
        if (!auto_normalize)
            throw std::invalid_argument(
                "spectral_gap: grid mass != 1 (pass auto_normalize)");
        mass_scale = grid.total_mass();
        if (!(mass_scale > 0.0))
            throw std::invalid_argument("spectral_gap: degenerate weights");
    }
    const int n = grid.n_nodes();
    const auto M = lumped_mass(grid);
    const auto s = stiffness_coeffs(grid);
    for (double Mi : M)
        if (!(Mi > 0.0))
            throw std::invalid_argument("spectral_gap: degenerate weights");

    // Symmetric reduction B = M^{-1/2} K M^{-1/2} (tridiagonal).
    std::vector<double> d(n), e(n - 1), sqrtM(n);
    for (int i = 0; i < n; ++i) sqrtM[i] = std::sqrt(M[i]);
    for (int i = 0; i < n; ++i) {
        double Kii = 0.0;
        if (i > 0) Kii += s[i - 1];
        if (i + 1 < n) Kii += s[i];
        d[i] = Kii / M[i];
    }
    for (int i = 0; i + 1 < n; ++i) e[i] = -s[i] / (sqrtM[i] * sqrtM[i + 1]);

    // Second-smallest eigenvalue by Sturm bisection (smallest is ~0).
    double hi = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = std::abs(d[i]);
        if (i > 0) row += std::abs(e[i - 1]);
        if (i + 1 < n) row += std::abs(e[i]);
        hi = std::max(hi, row);
    }
    double lo = -hi * 1e-12;
    // Want smallest x with >= 2 eigenvalues below: bisect on the count.
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-14 * hi + 1e-300; ++it) {
        const double mid = 0.5 * (a + b);
        (sturm_count(d, e, mid) >= 2 ? b : a) = mid;
    }
    const double lambda = 0.5 * (a + b);

    // Inverse iteration in the reduced coordinates.
    std::vector<double> y(n), z(n);
    for (int i = 0; i < n; ++i)
        y[i] = std::cos(std::numbers::pi * i / (n - 1)) * sqrtM[i];
    const double shift = lambda * (1.0 + 1e-11) + 1e-300;
    for (int it = 0; it < 4; ++it) {
        tridiag_shifted_solve(d, e, shift, y, z);
        double norm = 0.0;
        for (double v : z) norm += v * v;
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) y[i] = z[i] / norm;
    }

    // Back to function values, enforce zero mean and unit L2.
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = y[i] / sqrtM[i];
    double mean_u = 0.0, mass = 0.0;
    for (int i = 0; i < n; ++i) {
        mean_u += M[i] * u[i];
        mass += M[i];
    }
    mean_u /= mass;
    double l2 = 0.0;
    for (int i = 0; i < n; ++i) {
        u[i] -= mean_u;
        l2 += M[i] * u[i] * u[i];
    }
    l2 = std::sqrt(l2);
    for (int i = 0; i < n; ++i) u[i] /= l2;
    (void)mass_scale;

    // Relative residual ||K u - lambda M u|| / ||K u||.
    std::vector<double> Ku(n);
    apply_stiffness(s, u, Ku);
    double rnum = 0.0, rden = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = Ku[i] - lambda * M[i] * u[i];
        rnum += r * r;
        rden += Ku[i] * Ku[i];
    }
    SpectralGapResult res;
    res.lambda = lambda;
    res.residual = std::sqrt(rnum) / std::max(std::sqrt(rden), 1e-300);
    res.eigenfunction = SampledFunction(grid, std::move(u));
    return res;
}

namespace {

struct QuotientEval {
    double value;
    double energy;
};

// Q and its M^{-1}-preconditioned gradient at u (gradient written to g).
QuotientEval quotient_and_grad(const CellQuad& quad,
                               const std::vector<double>& M,
                               const std::vector<double>& s,
                               const std::vector<double>& u, double q,
                               std::vector<double>& g,
                               std::vector<double>& scratch) {
    const size_t n = u.size();
    apply_stiffness(s, u, scratch);
    double energy = 0.0;
    for (size_t i = 0; i < n; ++i) energy += scratch[i] * u[i];

    // Value and the gradients of ||u||_q^q and ||u||_2^2 in one cell sweep.
    double sq = 0.0, s2 = 0.0;
    std::vector<double> dsq(n, 0.0), dn2(n, 0.0);
    for (size_t c = 0; c + 1 < n; ++c)
        for (int gp = 0; gp < 5; ++gp) {
            const double sg = CellQuad::kGx[gp];
            const double ug = u[c] + (u[c + 1] - u[c]) * sg;
            const double a = quad.a[c][gp];
            const double au = std::abs(ug);
            sq += a * std::pow(au, q);
            s2 += a * ug * ug;
            const double dq = a * q * std::pow(au, q - 1.0) *
                              (ug < 0.0 ? -1.0 : 1.0);
            dsq[c] += dq * (1.0 - sg);
            dsq[c + 1] += dq * sg;
            dn2[c] += a * 2.0 * ug * (1.0 - sg);
            dn2[c + 1] += a * 2.0 * ug * sg;
        }
    const double norm_q = std::pow(sq, 1.0 / q);
    const double num = norm_q * norm_q - s2;
    const double val = num / energy;
    const double cq = (2.0 / q) * std::pow(sq, 2.0 / q - 1.0);
    for (size_t i = 0; i < n; ++i) {
        const double dnum = cq * dsq[i] - dn2[i];
        const double grad = (dnum * energy - num * 2.0 * scratch[i]) /
                            (energy * energy);
        g[i] = grad / M[i];  // precondition by the lumped mass
    }
    return {val, energy};
}

std::vector<double> make_start(const WeightedGrid& grid, int restart,
                               uint64_t seed) {
    const int n = grid.n_nodes();
    const auto& x = grid.nodes();
    const double x0 = x.front(), L = x.back() - x.front();
    std::vector<double> u(n, 1.0);
    auto eng = seeded_engine(seed, static_cast<uint64_t>(restart));
    std::normal_distribution<double> gauss(0.0, 1.0);
    switch (restart % 4) {
        case 0:  // constant plus first Neumann mode
            for (int i = 0; i < n; ++i)
                u[i] = 1.0 + 0.3 * std::cos(std::numbers::pi * (x[i] - x0) / L);
            break;
        case 1: {  // constant plus random low Fourier modes
            std::vector<double> c(6);
            for (auto& ck : c) ck = gauss(eng);
            for (int i = 0; i < n; ++i) {
                double v = 1.0;
                for (int k = 1; k <= 6; ++k)
                    v += 0.15 * c[k - 1] / k *
                         std::cos(k * std::numbers::pi * (x[i] - x0) / L);
                u[i] = v;
            }
            break;
        }
        case 2: {  // bump (concentration probe)
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            const double center = x0 + L * unif(eng);
            const double width = L * (0.02 + 0.1 * unif(eng));
            for (int i = 0; i < n; ++i) {
                const double t = (x[i] - center) / width;
                u[i] = 0.05 + std::exp(-t * t);
            }
            break;
        }
        default: {  // Aubin-type profile anchored at the left endpoint
            std::uniform_real_distribution<double> unif(1.05, 2.0);
            const double beta = unif(eng);
            for (int i = 0; i < n; ++i) {
                const double t = std::numbers::pi * (x[i] - x0) / L;
                u[i] = std::pow(beta - std::cos(t), -1.0);
            }
            break;
        }
    }
    return u;
}

}  // namespace

QuotientReport optimize_aopt(const WeightedGrid& grid, double q,
                             const AoptOptions& opts) {
    require_unit_mass(grid, "optimize_aopt");
    if (!(q > 2.0)) throw std::domain_error("optimize_aopt: requires q > 2");
    const int n = grid.n_nodes();
    const auto M = lumped_mass(grid);
    const auto s = stiffness_coeffs(grid);
    const CellQuad quad(grid);

    // Near-constant probe along the first nontrivial eigenfunction: the
    // quotient approaches (q-2)/lambda as the amplitude shrinks, so this
    // restart guarantees the spectral-gap lower bound up to O(amplitude).
    std::vector<double> eig;
    try {
        eig = spectral_gap(grid).eigenfunction.values;
    } catch (const std::invalid_argument&) {
        // Degenerate weights: skip the probe, keep the generic starts.
    }

    std::vector<QuotientReport> results(opts.n_restarts);
    parallel_for(opts.n_restarts, [&](int restart) {
        std::vector<double> u = make_start(grid, restart, opts.seed);
        if (restart == 1 && !eig.empty()) {
            double sup = 0.0;
            for (double v : eig) sup = std::max(sup, std::abs(v));
            for (int i = 0; i < n; ++i) u[i] = 1.0 + 1e-4 * eig[i] / sup;
        }
        std::vector<double> g(n), scratch(n), trial(n);
        // Normalize in Lq (the quotient is scale invariant; this keeps the
        // iterates well-conditioned).
        const auto renorm = [&](std::vector<double>& v) {
            const LqData lq = lq_data(quad, v, q);
            for (double& vi : v) vi /= lq.norm_q;
        };
        renorm(u);
        QuotientReport rep;
        double step = 0.1;
        QuotientEval cur = quotient_and_grad(quad, M, s, u, q, g, scratch);
        rep.trace.push_back(cur.value);
        int it = 0;
        for (; it < opts.max_iter; ++it) {
            double gnorm2 = 0.0;
            for (int i = 0; i < n; ++i) gnorm2 += g[i] * g[i] * M[i];
            rep.grad_norm_final = std::sqrt(gnorm2);
            if (rep.grad_norm_final <= opts.grad_tol) {
                rep.converged = true;
                break;
            }
            // Armijo backtracking on the ascent step.
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                for (int i = 0; i < n; ++i) trial[i] = u[i] + step * g[i];
                renorm(trial);
                const double e = dirichlet_energy(
                    SampledFunction(grid, trial), 2.0);
                if (e <= 1e-12) {
                    // Drifted onto constants: Q undefined, shrink the step.
                    step *= 0.5;
                    continue;
                }
                const LqData lq = lq_data(quad, trial, q);
                std::vector<double>& Kt = scratch;
                apply_stiffness(s, trial, Kt);
                double energy = 0.0;
                for (int i = 0; i < n; ++i) energy += Kt[i] * trial[i];
                const double val =
                    (lq.norm_q * lq.norm_q - lq.norm2_sq) / energy;
                if (val >= cur.value + 1e-4 * step * gnorm2) {
                    u = trial;
                    cur = quotient_and_grad(quad, M, s, u, q, g, scratch);
                    rep.trace.push_back(cur.value);
                    step = std::min(step * 1.5, 1e3);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;  // line search exhausted: stationary
        }
        rep.iterations = it;
        rep.value = cur.value;
        rep.argmax = SampledFunction(grid, std::move(u));
        results[restart] = std::move(rep);
    });

    // Order-independent max-reduction over restarts.
    int best = 0;
    for (int i = 1; i < opts.n_restarts; ++i)
        if (results[i].value > results[best].value) best = i;
    return std::move(results[best]);
}

double bliss_quotient(double b, double N, double p, double R_max,
                      int n_nodes) {
    if (!(b > 0.0)) throw std::domain_error("bliss_quotient: requires b > 0");
    if (!(p > 1.0 && p < N))
        throw std::domain_error("bliss_quotient: requires 1 < p < N");
    const double p_star = p * N / (N - p);
    const double expo = (p - N) / p;  // negative
    const double r_pow = p / (p - 1.0);

    // Decay rate of the integrand |v_b|^{p*} t^{N-1} ~ t^{-beta-1} at
    // infinity (beta > 0 whenever 1 < p < N).
    const double beta = p_star * (N - p) / (p - 1.0) - N;
    const auto v = [&](double r) {
        return std::pow(1.0 + b * std::pow(r, r_pow), expo);
    };
    const auto dv = [&](double r) {
        if (r <= 0.0) return 0.0;
        return expo * std::pow(1.0 + b * std::pow(r, r_pow), expo - 1.0) * b *
               r_pow * std::pow(r, r_pow - 1.0);
    };
    const double full = integrate(
        [&](double t) {
            return std::pow(v(t), p_star) * std::pow(t, N - 1.0);
        },
        0.0, R_max, 1e-14, 1e-12);
    // Tail estimate: integrand ~ (b t^{r_pow})^{p* expo} t^{N-1}, integrated
    // from R_max to infinity.
    const double tail_estimate =
        std::pow(b, p_star * expo) * std::pow(R_max, -beta) / beta;
    const double rel_tail = tail_estimate / full;
    if (rel_tail > 1e-6) {
        const double suggested =
            R_max * std::pow(rel_tail / 1e-6, 1.0 / beta);
        throw std::invalid_argument(
            "bliss_quotient: truncation tail too large; increase R_max to ~" +
            std::to_string(suggested));
    }

    const WeightedGrid grid = WeightedGrid::cone_model(N, R_max, n_nodes);
    const SampledFunction vf = SampledFunction::from(grid, v);
    const SampledFunction dvf = SampledFunction::from(grid, dv);
    // The profile lives on the whole half-line; the (R_max, infinity) tails of
    // both norms are integrated exactly via t = 1/s (the gradient tail decays
    // slowly and would otherwise inflate the quotient above the sharp value).
    const double sigma = unit_sphere_volume(N);
    const auto tail = [&](auto&& integrand) {
        return sigma * integrate(
                           [&](double s) {
                               const double t = 1.0 / s;
                               return integrand(t) * t * t;
                           },
                           0.0, 1.0 / R_max, 1e-16, 1e-12);
    };
    const double num_tail = tail([&](double t) {
        return std::pow(v(t), p_star) * std::pow(t, N - 1.0);
    });
    const double den_tail = tail([&](double t) {
        return std::pow(std::abs(dv(t)), p) * std::pow(t, N - 1.0);
    });
    const double num_pow = std::pow(lp_norm(vf, p_star), p_star) + num_tail;
    const double den_pow = std::pow(lp_norm(dvf, p), p) + den_tail;
    return std::pow(num_pow, 1.0 / p_star) / std::pow(den_pow, 1.0 / p);
}

double alpha_p_value(double min_theta, double N, double p) {
    if (!(p > 1.0 && p < N))
        throw std::domain_error("alpha_p_value: requires 1 < p < N");
    if (std::isinf(min_theta)) return 0.0;
    if (!(min_theta > 0.0))
        throw std::domain_error("alpha_p_value: requires min_theta > 0");
    return std::pow(eucl_constant(N, p) / std::pow(min_theta, 1.0 / N), p);
}

double avr_lower_bound_from_sobolev(double A, double N, double p) {
    if (!(A > 0.0))
        throw std::domain_error("avr_lower_bound_from_sobolev: requires A > 0");
    return std::pow(eucl_constant(N, p) / A, N);
}

LinearizationReport linearization_check(const WeightedGrid& grid,
                                        const SampledFunction& f, double q,
                                        const std::vector<double>& eps_list) {
    require_unit_mass(grid, "linearization_check");
    const double fbar = mean(f);
    if (std::abs(fbar) > 1e-8)
        throw std::invalid_argument("linearization_check: f must be zero-mean");
    const double energy = dirichlet_energy(f, 2.0);
    if (energy <= 1e-14)
        throw std::invalid_argument("linearization_check: constant f");
    const double l2 = lp_norm(f, 2.0);
    for (double eps : eps_list)
        if (!(eps * l2 <= 0.5))
            throw std::invalid_argument(
                "linearization_check: requires ||eps f||_L2 <= 1/2");

    LinearizationReport rep;
    rep.rhs = (q - 2.0) * l2 * l2 / energy;
    for (double eps : eps_list) {
        std::vector<double> vals(f.values.size());
        for (size_t i = 0; i < vals.size(); ++i)
            vals[i] = 1.0 + eps * f.values[i];
        const double lhs =
            sobolev_quotient(SampledFunction(grid, std::move(vals)), q);
        rep.eps.push_back(eps);
        rep.lhs.push_back(lhs);
        rep.defect.push_back(std::abs(lhs - rep.rhs));
        rep.max_defect_ratio = std::max(
            rep.max_defect_ratio,
            rep.defect.back() / std::max(std::abs(rep.rhs), 1e-300));
    }
    // Log-log least-squares slope of defect vs eps (grid round-off floor
    // excluded by dropping defects below 1e-13).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int npts = 0;
    for (size_t i = 0; i < rep.eps.size(); ++i) {
        if (rep.defect[i] < 1e-13) continue;
        const double lx = std::log(rep.eps[i]);
        const double ly = std::log(rep.defect[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++npts;
    }
    rep.fitted_order =
        npts >= 2 ? (npts * sxy - sx * sy) / (npts * sxx - sx * sx) : 0.0;
    return rep;
}

TightCheckResult tight_sobolev_check(const WeightedGrid& grid, double q,
                                     double A, int trials, uint64_t seed) {
    require_unit_mass(grid, "tight_sobolev_check");
    const int n = grid.n_nodes();
    const auto& x = grid.nodes();
    const double x0 = x.front(), L = x.back() - x.front();
    const auto M = lumped_mass(grid);

    TightCheckResult res;
    res.worst_margin = std::numeric_limits<double>::infinity();
    std::vector<double> margins(trials);
    std::vector<std::vector<double>> witnesses(trials);
    parallel_for(trials, [&](int t) {
        auto eng = seeded_engine(seed, static_cast<uint64_t>(t));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> u(n);
        std::vector<double> c(9);
        for (auto& ck : c) ck = gauss(eng);
        for (int i = 0; i < n; ++i) {
            double v = c[0];
            for (int k = 1; k <= 8; ++k)
                v += c[k] / (k * k) *
                     std::cos(k * std::numbers::pi * (x[i] - x0) / L);
            u[i] = v;
        }
        const SampledFunction uf(grid, u);
        const double nq = lp_norm(uf, q), n2 = lp_norm(uf, 2.0);
        const double e = dirichlet_energy(uf, 2.0);
        margins[t] = A * e + n2 * n2 - nq * nq;
        witnesses[t] = std::move(u);
    });
    for (int t = 0; t < trials; ++t) {
        if (margins[t] < res.worst_margin) {
            res.worst_margin = margins[t];
            res.witness = SampledFunction(grid, witnesses[t]);
            if (margins[t] < -1e-10) res.violating_trial = t;
        }
    }
    // Adversarial probe: a short optimizer run; any quotient above A is a
    // violation after rescaling.
    AoptOptions opts;
    opts.n_restarts = 4;
    opts.max_iter = 800;
    opts.seed = seed ^ 0x5bf03635ULL;
    const QuotientReport opt = optimize_aopt(grid, q, opts);
    if (opt.value > A) {
        const SampledFunction& w = opt.argmax;
        const double nq = lp_norm(w, q), n2 = lp_norm(w, 2.0);
        const double e = dirichlet_energy(w, 2.0);
        const double margin = A * e + n2 * n2 - nq * nq;
        if (margin < res.worst_margin) {
            res.worst_margin = margin;
            res.witness = w;
            res.violating_trial = trials;
        }
    }
    res.passed = res.worst_margin >= -1e-10;
    return res;
}

}  // namespace soblab
