#include "soblab/yamabe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "soblab/constants.hpp"
#include "soblab/random.hpp"

namespace soblab {

namespace {

void require_unit_mass(const WeightedGrid& grid, const char* who) {
    if (std::abs(grid.total_mass() - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(who) +
                                    ": grid must have total mass 1");
}

std::vector<double> lumped_mass(const WeightedGrid& grid) {
    const auto& m = grid.cell_mass();
    std::vector<double> M(grid.n_nodes(), 0.0);
    for (size_t i = 0; i < m.size(); ++i) {
        M[i] += 0.5 * m[i];
        M[i + 1] += 0.5 * m[i];
    }
    return M;
}

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

double two_star(double N) {
    if (!(N > 2.0)) throw std::domain_error("Yamabe: requires N > 2");
    return 2.0 * N / (N - 2.0);
}

}  // namespace

ScalarField::ScalarField(const WeightedGrid& g, std::vector<double> v,
                         double p_decl, double N)
    : grid(&g), values(std::move(v)), declared_p(p_decl) {
    if (values.size() != g.nodes().size())
        throw std::invalid_argument("ScalarField: size mismatch with grid");
    for (double x : values)
        if (!std::isfinite(x))
            throw std::invalid_argument("ScalarField: non-finite value");
    if (!(p_decl > N / 2.0))
        throw std::invalid_argument(
            "ScalarField: declared integrability exponent must exceed N/2");
}

double yamabe_quotient(const SampledFunction& u, const ScalarField& S,
                       double N) {
    require_unit_mass(*u.grid, "yamabe_quotient");
    if (S.grid != u.grid)
        throw std::invalid_argument("yamabe_quotient: grid mismatch");
    const double p_star = two_star(N);
    const double nps = lp_norm(u, p_star);
    if (!(nps > 0.0))
        throw std::invalid_argument("yamabe_quotient: zero function");
    const auto M = lumped_mass(*u.grid);
    double su2 = 0.0;
    for (size_t i = 0; i < M.size(); ++i)
        su2 += M[i] * S.values[i] * u.values[i] * u.values[i];
    return (dirichlet_energy(u, 2.0) + su2) / (nps * nps);
}

YamabeReport minimize_yamabe(const WeightedGrid& grid, const ScalarField& S,
                             double N, const YamabeOptions& opts) {
    require_unit_mass(grid, "minimize_yamabe");
    if (S.grid != &grid)
        throw std::invalid_argument("minimize_yamabe: grid mismatch");
    const double p_star = two_star(N);
    const int n = grid.n_nodes();
    const auto M = lumped_mass(grid);
    const auto s = stiffness_coeffs(grid);
    const auto& x = grid.nodes();
    const double x0 = x.front(), L = x.back() - x.front();

    // Scale for the divergence heuristic: ||S||_{L^p} on the grid.
    double snorm = 0.0;
    for (size_t i = 0; i < M.size(); ++i)
        snorm += M[i] * std::pow(std::abs(S.values[i]), S.declared_p);
    snorm = std::pow(snorm, 1.0 / S.declared_p);
    const double divergence_floor = -10.0 * (snorm + 1.0);

    const auto project = [&](std::vector<double>& u) {
        // Non-negative cone, then unit L^{2*} sphere.
        for (double& v : u) v = std::max(v, 0.0);
        double nq = 0.0;
        for (int i = 0; i < n; ++i) nq += M[i] * std::pow(u[i], p_star);
        nq = std::pow(nq, 1.0 / p_star);
        if (!(nq > 0.0))
            throw std::domain_error("minimize_yamabe: iterate collapsed to 0");
        for (double& v : u) v /= nq;
    };

    struct Eval {
        double value;
        double su2;
    };
    std::vector<double> scratch(n);
    const auto evaluate = [&](const std::vector<double>& u) {
        apply_stiffness(s, u, scratch);
        double e = 0.0, su2 = 0.0;
        for (int i = 0; i < n; ++i) {
            e += scratch[i] * u[i];
            su2 += M[i] * S.values[i] * u[i] * u[i];
        }
        return Eval{e + su2, su2};
    };

    std::vector<YamabeReport> results(opts.n_restarts);
    for (int restart = 0; restart < opts.n_restarts; ++restart) {
        std::vector<double> u(n, 1.0);
        auto eng = seeded_engine(opts.seed, static_cast<uint64_t>(restart));
        std::normal_distribution<double> gauss(0.0, 1.0);
        switch (restart % 4) {
            case 0:
                break;  // constant start
            case 1:
                for (int i = 0; i < n; ++i)
                    u[i] = 1.0 +
                           0.3 * std::cos(std::numbers::pi * (x[i] - x0) / L);
                break;
            case 2: {
                // Bump at the minimum of S (probes negative wells).
                int jmin = 0;
                for (int i = 1; i < n; ++i)
                    if (S.values[i] < S.values[jmin]) jmin = i;
                const double w = 0.1 * L;
                for (int i = 0; i < n; ++i) {
                    const double t = (x[i] - x[jmin]) / w;
                    u[i] = 0.1 + std::exp(-t * t);
                }
                break;
            }
            default:
                for (int i = 0; i < n; ++i) {
                    double v = 1.0;
                    for (int k = 1; k <= 4; ++k)
                        v += 0.2 * gauss(eng) / k *
                             std::cos(k * std::numbers::pi * (x[i] - x0) / L);
                    u[i] = std::abs(v) + 0.05;
                }
                break;
        }
        project(u);

        YamabeReport rep;
        std::vector<double> g(n), trial(n), Ku(n);
        double step = 0.1;
        Eval cur = evaluate(u);
        rep.trace.push_back(cur.value);
        int it = 0;
        for (; it < opts.max_iter; ++it) {
            // Gradient of F on the sphere, preconditioned by M; at the
            // normalized iterate the multiplier is lambda = F(u).
            apply_stiffness(s, u, Ku);
            double gnorm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double dF = 2.0 * Ku[i] + 2.0 * M[i] * S.values[i] * u[i];
                const double dG =
                    2.0 * M[i] * std::pow(u[i], p_star - 1.0);
                g[i] = (dF - cur.value * dG) / M[i];
                // Active-set projection: at the boundary u_i = 0, only
                // gradients pushing inward count.
                const double pg = (u[i] <= 0.0 && g[i] > 0.0) ? 0.0 : g[i];
                gnorm2 += pg * pg * M[i];
            }
            rep.grad_norm_final = std::sqrt(gnorm2);
            if (rep.grad_norm_final <= opts.grad_tol) {
                rep.converged = true;
                break;
            }
            if (cur.value < divergence_floor) {
                rep.unbounded_suspected = true;
                break;
            }
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                for (int i = 0; i < n; ++i) trial[i] = u[i] - step * g[i];
                try {
                    project(trial);
                } catch (const std::domain_error&) {
                    step *= 0.5;
                    continue;
                }
                const Eval tv = evaluate(trial);
                if (tv.value <= cur.value - 1e-4 * step * gnorm2) {
                    u = trial;
                    cur = tv;
                    rep.trace.push_back(cur.value);
                    step = std::min(step * 1.5, 1e3);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
        }
        rep.iterations = it;
        rep.lambda_estimate = cur.value;
        rep.minimizer = SampledFunction(grid, std::move(u));
        results[restart] = std::move(rep);
    }

    int best = 0;
    for (int i = 1; i < opts.n_restarts; ++i)
        if (results[i].lambda_estimate < results[best].lambda_estimate)
            best = i;
    YamabeReport out = std::move(results[best]);
    out.el_residual = euler_lagrange_residual(out.minimizer,
                                              out.lambda_estimate, S, N);
    return out;
}

double euler_lagrange_residual(const SampledFunction& u, double lambda,
                               const ScalarField& S, double N) {
    if (S.grid != u.grid)
        throw std::invalid_argument("euler_lagrange_residual: grid mismatch");
    const double p_star = two_star(N);
    const WeightedGrid& grid = *u.grid;
    const int n = grid.n_nodes();
    const auto M = lumped_mass(grid);
    const auto s = stiffness_coeffs(grid);
    std::vector<double> Ku(n);
    apply_stiffness(s, u.values, Ku);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        // Hat function at node j: the three integrals reduce to nodal terms
        // under the trapezoid quadrature.
        const double res = Ku[j] + M[j] * S.values[j] * u.values[j] -
                           lambda * M[j] *
                               std::pow(std::max(u.values[j], 0.0),
                                        p_star - 1.0);
        double hat_energy = 0.0;
        if (j > 0) hat_energy += s[j - 1];
        if (j + 1 < n) hat_energy += s[j];
        const double vnorm = std::sqrt(hat_energy + M[j]);
        worst = std::max(worst, std::abs(res) / vnorm);
    }
    return worst;
}

YamabeBoundReport yamabe_upper_bound_check(double lambda_estimate,
                                           double min_theta, double N,
                                           double tol) {
    if (!(min_theta > 0.0))
        throw std::invalid_argument(
            "yamabe_upper_bound_check: requires min_theta > 0");
    YamabeBoundReport rep;
    const double e2 = eucl_constant_2(N);
    rep.bound = std::pow(min_theta, 2.0 / N) / (e2 * e2);
    rep.passed = lambda_estimate <= rep.bound + tol;
    return rep;
}

TrendReport lambda_continuity_trend(
    const std::vector<const WeightedGrid*>& grid_family,
    const std::vector<const ScalarField*>& S_family, double N,
    const YamabeOptions& opts) {
    if (grid_family.size() != S_family.size() || grid_family.size() < 2)
        throw std::invalid_argument(
            "lambda_continuity_trend: need matching families of >= 2");
    TrendReport rep;
    for (size_t k = 0; k < grid_family.size(); ++k)
        rep.lambdas.push_back(
            minimize_yamabe(*grid_family[k], *S_family[k], N, opts)
                .lambda_estimate);
    std::vector<double> jumps;
    for (size_t k = 0; k + 1 < rep.lambdas.size(); ++k)
        jumps.push_back(std::abs(rep.lambdas[k + 1] - rep.lambdas[k]));
    rep.max_successive_jump =
        *std::max_element(jumps.begin(), jumps.end());
    double head = 0.0, tail = 0.0;
    for (size_t k = 0; k < jumps.size(); ++k)
        (k < jumps.size() / 2 ? head : tail) =
            std::max(k < jumps.size() / 2 ? head : tail, jumps[k]);
    rep.cauchy = tail <= head + 1e-12;
    return rep;
}

}  // namespace soblab
