#include "soblab/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "soblab/constants.hpp"

namespace soblab {

namespace {

struct Cell {
    double lo, hi, mass;
    bool plateau() const { return lo == hi; }
};

std::vector<Cell> cells_of(const SampledFunction& u) {
    const auto& m = u.grid->cell_mass();
    std::vector<Cell> cells(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        const double a = u.values[i], b = u.values[i + 1];
        cells[i] = {std::min(a, b), std::max(a, b), m[i]};
    }
    return cells;
}

// Direct O(n) evaluation of mu(t) = m({u > t}) with the length-fraction
// superlevel model (linear interpolation inside each cell).
double mu_direct(const std::vector<Cell>& cells, double t) {
    double acc = 0.0;
    for (const Cell& c : cells) {
        if (c.plateau()) {
            if (c.lo > t) acc += c.mass;
        } else if (t <= c.lo) {
            acc += c.mass;
        } else if (t < c.hi) {
            acc += c.mass * (c.hi - t) / (c.hi - c.lo);
        }
    }
    return acc;
}

}  // namespace

double DistributionProfile::evaluate(double t) const {
    if (levels.empty()) return 0.0;
    if (t >= levels.front()) return 0.0;
    if (t < 0.0) return total_mass;
    // Descending levels; first index with level <= t holds the
    // right-continuous value when equal.
    const auto it = std::lower_bound(levels.begin(), levels.end(), t,
                                     [](double lvl, double x) { return lvl > x; });
    const size_t k = static_cast<size_t>(it - levels.begin());
    if (k >= levels.size()) return mu.back();
    if (levels[k] == t || k == 0) return mu[k];
    const double dl = levels[k - 1] - levels[k];
    if (dl <= 0.0) return mu[k];
    return mu[k] + (mu[k - 1] - mu[k]) * (t - levels[k]) / dl;
}

DistributionProfile distribution_function(const SampledFunction& u,
                                          int n_levels) {
    if (n_levels < 2)
        throw std::invalid_argument("distribution_function: n_levels >= 2");
    for (double v : u.values)
        if (v < 0.0)
            throw std::invalid_argument(
                "distribution_function: negative values not supported");
    const auto cells = cells_of(u);
    const double vmax = *std::max_element(u.values.begin(), u.values.end());

    // Breakpoints: every cell endpoint level plus a uniform backbone.
    std::vector<double> bp;
    bp.reserve(2 * cells.size() + n_levels + 2);
    bp.push_back(0.0);
    bp.push_back(vmax);
    for (const Cell& c : cells) {
        bp.push_back(c.lo);
        bp.push_back(c.hi);
    }
    for (int j = 0; j < n_levels; ++j) bp.push_back(vmax * j / (n_levels - 1));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    // Events per breakpoint: slope change (non-plateau activations and
    // deactivations) and jump mass (plateau cells at that exact level).
    std::vector<double> slope_delta(bp.size(), 0.0), jump(bp.size(), 0.0);
    const auto idx_of = [&](double t) {
        return static_cast<size_t>(
            std::lower_bound(bp.begin(), bp.end(), t) - bp.begin());
    };
    for (const Cell& c : cells) {
        if (c.plateau()) {
            jump[idx_of(c.lo)] += c.mass;
        } else {
            const double s = c.mass / (c.hi - c.lo);
            slope_delta[idx_of(c.lo)] -= s;
            slope_delta[idx_of(c.hi)] += s;
        }
    }

    // Ascending sweep; (level, value) pairs pushed in ascending-level order.
    std::vector<double> asc_lvl, asc_mu;
    double cur = mu_direct(cells, 0.0);  // right-limit at 0
    double slope = 0.0;
    // Events exactly at 0 affect the slope to the right of 0.
    slope += slope_delta[0];
    asc_lvl.push_back(0.0);
    asc_mu.push_back(cur);
    for (size_t k = 1; k < bp.size(); ++k) {
        const double left = cur + slope * (bp[k] - bp[k - 1]);
        if (jump[k] > 0.0) {
            asc_lvl.push_back(bp[k]);
            asc_mu.push_back(left);  // left limit mu(t^-)
            cur = left - jump[k];
        } else {
            cur = left;
        }
        asc_lvl.push_back(bp[k]);
        asc_mu.push_back(cur);  // right-continuous value
        slope += slope_delta[k];
    }

    DistributionProfile profile;
    profile.total_mass = u.grid->total_mass();
    profile.max_value = vmax;
    profile.levels.assign(asc_lvl.rbegin(), asc_lvl.rend());
    profile.mu.assign(asc_mu.rbegin(), asc_mu.rend());
    // Clamp sweep round-off.
    for (double& m : profile.mu) m = std::clamp(m, 0.0, profile.total_mass);
    profile.mu.front() = 0.0;  // mu(max) = 0
    return profile;
}

GeneralizedInverse::GeneralizedInverse(DistributionProfile profile)
    : profile_(std::move(profile)) {
    if (profile_.levels.size() != profile_.mu.size() || profile_.levels.empty())
        throw std::invalid_argument("GeneralizedInverse: malformed profile");
}

double GeneralizedInverse::operator()(double s) const {
    const auto& L = profile_.levels;
    const auto& A = profile_.mu;
    if (s <= 0.0) return profile_.max_value;
    if (s > A.back()) return 0.0;
    // First k with A[k] >= s (A ascending along the descending-level array).
    const auto it = std::lower_bound(A.begin(), A.end(), s);
    const size_t k = static_cast<size_t>(it - A.begin());
    if (k == 0) return L[0];
    const double da = A[k] - A[k - 1];
    if (da <= 0.0) return L[k];
    return L[k] + (A[k] - s) / da * (L[k - 1] - L[k]);
}

namespace {

// 5-point Gauss-Legendre (duplicated from grid.cpp on purpose: tiny, local).
constexpr double kG5x[5] = {-0.906179845938663992797626878299,
                            -0.538469310105683091036314420700, 0.0,
                            0.538469310105683091036314420700,
                            0.906179845938663992797626878299};
constexpr double kG5w[5] = {0.236926885056189087514264040720,
                            0.478628670499366468041291514836,
                            0.568888888888888888888888888889,
                            0.478628670499366468041291514836,
                            0.236926885056189087514264040720};

template <class F>
double gauss5(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += kG5w[i] * f(c + h * kG5x[i]);
    return s * h;
}

void require_non_negative(const SampledFunction& u, const char* who) {
    for (double v : u.values)
        if (v < 0.0)
            throw std::invalid_argument(std::string(who) +
                                        ": requires u >= 0");
}

}  // namespace

Rearranged monotone_rearrange_sphere(const SampledFunction& u, double N,
                                     int n_out) {
    require_non_negative(u, "monotone_rearrange_sphere");
    if (n_out < 3)
        throw std::invalid_argument("monotone_rearrange_sphere: n_out >= 3");
    const double mass = u.grid->total_mass();
    if (mass > 1.0 + 1e-9)
        throw std::invalid_argument(
            "monotone_rearrange_sphere: domain mass exceeds 1");
    const double N_dim = N;
    const auto dens = [N_dim](double t) {
        const double s = std::sin(t);
        return s <= 0.0 ? 0.0 : std::pow(s, N_dim - 1.0);
    };
    const double c_N = integrate(dens, 0.0, std::numbers::pi);
    // Radius with m_N([0,r]) = mass, by bisection on the smooth prefix.
    double lo = 0.0, hi = std::numbers::pi;
    if (mass >= 1.0 - 1e-12) {
        hi = std::numbers::pi;
        lo = std::numbers::pi;
    } else {
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (integrate(dens, 0.0, mid) / c_N < mass ? lo : hi) = mid;
        }
    }
    const double r = 0.5 * (lo + hi);

    std::vector<double> nodes(n_out), weights(n_out), masses(n_out - 1);
    for (int i = 0; i < n_out; ++i) nodes[i] = r * i / (n_out - 1);
    for (int i = 0; i < n_out; ++i) weights[i] = dens(nodes[i]) / c_N;
    for (int i = 0; i + 1 < n_out; ++i)
        masses[i] = gauss5([&](double t) { return dens(t) / c_N; }, nodes[i],
                           nodes[i + 1]);

    GeneralizedInverse inv(distribution_function(u, 64));
    std::vector<double> values(n_out);
    double prefix = 0.0;
    values[0] = inv(0.0);
    for (int i = 1; i < n_out; ++i) {
        prefix += masses[i - 1];
        values[i] = inv(prefix);
    }
    Rearranged out;
    out.grid = std::make_shared<WeightedGrid>(WeightedGrid::with_masses(
        std::move(nodes), std::move(weights), std::move(masses),
        DomainKind::SphereModel, N));
    out.fn = SampledFunction(*out.grid, std::move(values));
    return out;
}

Rearranged euclidean_rearrange(const SampledFunction& u, double N, int n_out) {
    require_non_negative(u, "euclidean_rearrange");
    if (n_out < 3)
        throw std::invalid_argument("euclidean_rearrange: n_out >= 3");
    const double mass = u.grid->total_mass();
    const double omega = unit_ball_volume(N);
    const double r = std::pow(mass / omega, 1.0 / N);

    auto grid = std::make_shared<WeightedGrid>(
        WeightedGrid::cone_model(N, r, n_out));
    GeneralizedInverse inv(distribution_function(u, 64));
    std::vector<double> values(grid->n_nodes());
    double prefix = 0.0;
    values[0] = inv(0.0);
    for (int i = 1; i < grid->n_nodes(); ++i) {
        prefix += grid->cell_mass()[i - 1];
        values[i] = inv(prefix);
    }
    Rearranged out;
    out.grid = std::move(grid);
    out.fn = SampledFunction(*out.grid, std::move(values));
    return out;
}

PolyaSzegoReport polya_szego_report(const SampledFunction& u, double p,
                                    const RearrangementTarget& target,
                                    double tol) {
    require_non_negative(u, "polya_szego_report");
    PolyaSzegoReport rep;
    rep.energy_in = dirichlet_energy(u, p);
    const int n_out = u.grid->n_nodes();
    rep.rearranged = target.kind == RearrangementTarget::Kind::Sphere
                         ? monotone_rearrange_sphere(u, target.N, n_out)
                         : euclidean_rearrange(u, target.N, n_out);
    rep.energy_out = dirichlet_energy(rep.rearranged.fn, p);
    if (rep.energy_in <= 1e-14) {
        // Constant input: both sides vanish, trivially consistent.
        rep.ratio = 0.0;
        rep.passed = rep.energy_out <= 1e-12;
        return rep;
    }
    double lhs = rep.energy_out;
    if (target.kind == RearrangementTarget::Kind::Euclid) {
        const double sharp =
            target.N * std::pow(unit_ball_volume(target.N), 1.0 / target.N);
        lhs *= std::pow(target.C_Isop / sharp, p);
    }
    rep.ratio = lhs / rep.energy_in;
    rep.passed = lhs <= rep.energy_in * (1.0 + tol);
    return rep;
}

}  // namespace soblab
