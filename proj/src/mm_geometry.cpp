#include "soblab/mm_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "soblab/constants.hpp"
#include "soblab/parallel.hpp"
#include "soblab/random.hpp"

namespace soblab {

DiscreteMMS DiscreteMMS::from_matrix(std::vector<std::vector<double>> distance,
                                     std::vector<double> mass,
                                     bool validate_triangle) {
    const size_t n = mass.size();
    if (n == 0 || distance.size() != n)
        throw std::invalid_argument("DiscreteMMS: size mismatch");
    for (size_t i = 0; i < n; ++i) {
        if (distance[i].size() != n)
            throw std::invalid_argument("DiscreteMMS: non-square matrix");
        if (distance[i][i] != 0.0)
            throw std::invalid_argument("DiscreteMMS: nonzero diagonal");
        if (!(mass[i] > 0.0))
            throw std::invalid_argument("DiscreteMMS: non-positive mass");
        for (size_t j = 0; j < n; ++j) {
            if (!(distance[i][j] >= 0.0))
                throw std::invalid_argument("DiscreteMMS: negative distance");
            if (distance[i][j] != distance[j][i])
                throw std::invalid_argument("DiscreteMMS: asymmetric matrix");
        }
    }
    if (n > 2000 && validate_triangle)
        throw std::invalid_argument(
            "DiscreteMMS: triangle validation is O(n^3); disable it "
            "explicitly for n > 2000");
    if (validate_triangle) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    if (distance[i][j] >
                        distance[i][k] + distance[k][j] + 1e-9)
                        throw std::invalid_argument(
                            "DiscreteMMS: triangle inequality violated");
    }
    DiscreteMMS s;
    s.dist_ = std::move(distance);
    s.mass_ = std::move(mass);
    for (double m : s.mass_) s.total_mass_ += m;
    return s;
}

DiscreteMMS DiscreteMMS::from_edges(
    int n, const std::vector<std::array<double, 3>>& edges,
    std::vector<double> mass) {
    if (n <= 0 || static_cast<int>(mass.size()) != n)
        throw std::invalid_argument("DiscreteMMS: size mismatch");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0.0;
    for (const auto& e : edges) {
        const int i = static_cast<int>(e[0]);
        const int j = static_cast<int>(e[1]);
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::invalid_argument("DiscreteMMS: edge index out of range");
        if (!(e[2] >= 0.0))
            throw std::invalid_argument("DiscreteMMS: negative edge length");
        d[i][j] = std::min(d[i][j], e[2]);
        d[j][i] = d[i][j];
    }
    // Shortest-path completion (Floyd-Warshall).
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(d[i][j]))
                throw std::invalid_argument("DiscreteMMS: graph not connected");
    // Shortest-path metrics satisfy the triangle inequality by construction.
    return from_matrix(std::move(d), std::move(mass), false);
}

DiscreteMMS DiscreteMMS::load(const std::string& path, bool validate_triangle) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("DiscreteMMS: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("distance")) {
        return from_matrix(
            j.at("distance").get<std::vector<std::vector<double>>>(),
            j.at("mass").get<std::vector<double>>(), validate_triangle);
    }
    if (j.contains("edges")) {
        const int n = j.at("n").get<int>();
        std::vector<std::array<double, 3>> edges;
        for (const auto& e : j.at("edges"))
            edges.push_back({e.at(0).get<double>(), e.at(1).get<double>(),
                             e.at(2).get<double>()});
        return from_edges(n, edges, j.at("mass").get<std::vector<double>>());
    }
    throw std::invalid_argument(
        "DiscreteMMS: expected \"distance\" or \"edges\" in " + path);
}

double ball_mass(const DiscreteMMS& space, int x, double r) {
    if (x < 0 || x >= space.n_points())
        throw std::invalid_argument("ball_mass: invalid center index");
    if (!(r >= 0.0)) throw std::invalid_argument("ball_mass: requires r >= 0");
    double acc = 0.0;
    for (int i = 0; i < space.n_points(); ++i)
        if (space.distance(x, i) < r) acc += space.mass(i);
    return acc;
}

double ball_mass(const WeightedGrid& grid, double x, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("ball_mass: requires r >= 0");
    if (x < grid.nodes().front() - 1e-12 || x > grid.nodes().back() + 1e-12)
        throw std::invalid_argument("ball_mass: center outside domain");
    return grid.measure_interval(x - r, x + r);
}

namespace {

template <class BallFn>
DensityProfile density_profile_impl(double center, double N,
                                    const std::vector<double>& radii,
                                    BallFn&& ball) {
    if (radii.empty())
        throw std::invalid_argument("density_profile: empty radius list");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("density_profile: radii not increasing");
    if (!(radii.front() > 0.0))
        throw std::invalid_argument("density_profile: radii must be positive");
    const double omega = unit_ball_volume(N);
    DensityProfile prof;
    prof.center = center;
    prof.radii = radii;
    for (double r : radii)
        prof.theta_r.push_back(ball(r) / (omega * std::pow(r, N)));
    prof.theta_smallest = prof.theta_r.front();
    prof.theta_sup = *std::max_element(prof.theta_r.begin(),
                                       prof.theta_r.end());
    // Divergence test: log-log slope over the smallest radii. A genuine
    // density is flat as r -> 0; a lower-dimensional center blows up like a
    // negative power of r.
    const size_t k = std::min<size_t>(3, radii.size());
    if (k >= 2) {
        const double slope =
            (std::log(prof.theta_r[k - 1]) - std::log(prof.theta_r[0])) /
            (std::log(radii[k - 1]) - std::log(radii[0]));
        prof.infinite = slope <= -0.5;
    }
    prof.theta_0_estimate = prof.infinite ? 0.0 : prof.theta_sup;
    return prof;
}

}  // namespace

DensityProfile density_profile(const WeightedGrid& grid, double x, double N,
                               const std::vector<double>& radii) {
    return density_profile_impl(x, N, radii,
                                [&](double r) { return ball_mass(grid, x, r); });
}

DensityProfile density_profile(const DiscreteMMS& space, int x, double N,
                               const std::vector<double>& radii) {
    return density_profile_impl(static_cast<double>(x), N, radii,
                                [&](double r) { return ball_mass(space, x, r); });
}

double avr_estimate(const WeightedGrid& grid, double x, double N) {
    if (grid.kind() == DomainKind::SphereModel)
        throw std::invalid_argument(
            "avr_estimate: undefined on the bounded sphere model");
    const double R = grid.nodes().back() - x;
    if (!(R > 0.0))
        throw std::invalid_argument("avr_estimate: center at domain end");
    // theta_{N,r} over the largest decade of radii.
    const int n_r = 16;
    const double omega = unit_ball_volume(N);
    std::vector<double> theta(n_r);
    for (int i = 0; i < n_r; ++i) {
        const double r = R * (0.1 + 0.9 * i / (n_r - 1));
        theta[i] = ball_mass(grid, x, r) / (omega * std::pow(r, N));
    }
    for (int i = 0; i + 1 < n_r; ++i)
        if (theta[i + 1] > theta[i] + 1e-9 * std::max(1.0, theta[i]))
            throw std::domain_error(
                "avr_estimate: density not non-increasing (not a CD(0,N) "
                "profile)");
    return theta.back();
}

double perimeter_superlevel(const SampledFunction& u, double t) {
    const auto& w = u.grid->weight_at_node();
    const size_t n = u.values.size();
    for (size_t i = 0; i + 1 < n; ++i)
        if (u.values[i] == t && u.values[i + 1] == t)
            throw std::domain_error(
                "perimeter_superlevel: plateau at level t (not a regular "
                "value)");
    double per = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
        const double a = u.values[i], b = u.values[i + 1];
        const bool above_a = a > t, above_b = b > t;
        if (above_a == above_b) continue;
        // Linear crossing point and interpolated weight there.
        const double frac = (t - a) / (b - a);
        per += w[i] + frac * (w[i + 1] - w[i]);
    }
    return per;
}

MinkowskiReport minkowski_content(const DiscreteMMS& space,
                                  const std::vector<int>& E,
                                  const std::vector<double>& delta_list) {
    if (E.empty())
        throw std::invalid_argument("minkowski_content: empty set");
    for (size_t i = 0; i + 1 < delta_list.size(); ++i)
        if (!(delta_list[i] > delta_list[i + 1]))
            throw std::invalid_argument(
                "minkowski_content: delta_list must be decreasing");
    const int n = space.n_points();
    std::vector<double> dE(n, std::numeric_limits<double>::infinity());
    double mE = 0.0;
    std::vector<bool> inE(n, false);
    for (int e : E) {
        if (e < 0 || e >= n)
            throw std::invalid_argument("minkowski_content: bad index");
        if (!inE[e]) mE += space.mass(e);
        inE[e] = true;
    }
    for (int i = 0; i < n; ++i)
        for (int e : E) dE[i] = std::min(dE[i], space.distance(i, e));
    MinkowskiReport rep;
    rep.deltas = delta_list;
    rep.value = std::numeric_limits<double>::infinity();
    for (double delta : delta_list) {
        if (!(delta > 0.0))
            throw std::invalid_argument("minkowski_content: delta <= 0");
        double enlarged = 0.0;
        for (int i = 0; i < n; ++i)
            if (dE[i] <= delta) enlarged += space.mass(i);
        const double est = (enlarged - mE) / delta;
        rep.estimates.push_back(est);
        rep.value = std::min(rep.value, est);
    }
    return rep;
}

namespace {

double weight_at(const WeightedGrid& grid, double s) {
    const auto& x = grid.nodes();
    const auto& w = grid.weight_at_node();
    if (s <= x.front()) return w.front();
    if (s >= x.back()) return w.back();
    const auto it = std::upper_bound(x.begin(), x.end(), s);
    const size_t i = static_cast<size_t>(it - x.begin()) - 1;
    const double frac = (s - x[i]) / (x[i + 1] - x[i]);
    return w[i] + frac * (w[i + 1] - w[i]);
}

}  // namespace

double isoperimetric_constant(const WeightedGrid& grid, double region_lo,
                              double region_hi, double N) {
    const double dom_lo = grid.nodes().front();
    const double dom_hi = grid.nodes().back();
    if (!(region_lo < region_hi) || region_lo < dom_lo - 1e-12 ||
        region_hi > dom_hi + 1e-12)
        throw std::invalid_argument("isoperimetric_constant: bad region");
    // Perimeter of a closed sub-interval [a,b]: boundary points that are
    // interior to the ambient domain each contribute the weight there.
    const auto perim = [&](double a, double b) {
        double per = 0.0;
        if (a > dom_lo + 1e-12) per += weight_at(grid, a);
        if (b < dom_hi - 1e-12) per += weight_at(grid, b);
        return per;
    };
    const int n_scan = 512;
    double best = std::numeric_limits<double>::infinity();
    const auto consider = [&](double a, double b) {
        const double m = grid.measure_interval(a, b);
        if (m <= 1e-14) return;
        const double ratio = perim(a, b) / std::pow(m, (N - 1.0) / N);
        best = std::min(best, ratio);
    };
    for (int i = 1; i <= n_scan; ++i) {
        const double s = region_lo + (region_hi - region_lo) * i / (n_scan + 1);
        consider(region_lo, s);   // anchored at the left end of the region
        consider(s, region_hi);   // anchored at the right end
    }
    // Interior pairs on a coarser lattice.
    const int n_pair = 48;
    for (int i = 1; i < n_pair; ++i)
        for (int j = i + 1; j < n_pair; ++j) {
            const double a =
                region_lo + (region_hi - region_lo) * i / n_pair;
            const double b =
                region_lo + (region_hi - region_lo) * j / n_pair;
            consider(a, b);
        }
    if (!std::isfinite(best))
        throw std::invalid_argument("isoperimetric_constant: empty scan");
    return best;
}

BrunnMinkowskiReport brunn_minkowski_check(const WeightedGrid& grid,
                                           double a0, double b0, double a1,
                                           double b1, double t, double K,
                                           double N) {
    if (!(a0 <= b0 && a1 <= b1))
        throw std::invalid_argument("brunn_minkowski_check: bad intervals");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("brunn_minkowski_check: t in [0,1]");
    // Interval geodesics: the midpoint set is again an interval.
    const double at = (1.0 - t) * a0 + t * a1;
    const double bt = (1.0 - t) * b0 + t * b1;
    BrunnMinkowskiReport rep;
    // theta per the K-sign rule: inf of distances for K >= 0, sup for K < 0.
    if (K >= 0.0) {
        const double gap = std::max({a1 - b0, a0 - b1, 0.0});
        rep.theta = gap;
    } else {
        rep.theta = std::max(std::abs(b1 - a0), std::abs(b0 - a1));
    }
    const ExtendedReal s0 = distortion_sigma(1.0 - t, K, N, rep.theta);
    const ExtendedReal s1 = distortion_sigma(t, K, N, rep.theta);
    if (s0.infinite || s1.infinite) {
        rep.vacuous = true;
        rep.passed = true;
        return rep;
    }
    const double m0 = grid.measure_interval(a0, b0);
    const double m1 = grid.measure_interval(a1, b1);
    const double mt = grid.measure_interval(std::min(at, bt),
                                            std::max(at, bt));
    rep.lhs = std::pow(mt, 1.0 / N);
    rep.rhs = s0.value * std::pow(m0, 1.0 / N) +
              s1.value * std::pow(m1, 1.0 / N);
    rep.passed = rep.lhs >= rep.rhs - 1e-9;
    return rep;
}

LocalSobolevReport local_sobolev_check(const WeightedGrid& grid, double x,
                                       double r, double R, double N, double p,
                                       int trials, uint64_t seed) {
    if (!(r > 0.0 && r < R))
        throw std::invalid_argument("local_sobolev_check: requires 0 < r < R");
    if (x < grid.nodes().front() - 1e-12 || x > grid.nodes().back() + 1e-12)
        throw std::invalid_argument("local_sobolev_check: center outside domain");
    const double omega = unit_ball_volume(N);
    const double theta_R = ball_mass(grid, x, R) / (omega * std::pow(R, N));
    const double theta_r = ball_mass(grid, x, r) / (omega * std::pow(r, N));

    LocalSobolevReport rep;
    // Slack from the almost-Euclidean isoperimetric factor, specialized to
    // K >= 0 (the model grids we verify): 1 - (2 C^{1/N} + 1) delta' with
    // delta' = r/R and C = theta_{N,r}/theta_{N,R}.
    const double C = theta_r / theta_R;
    const double factor = 1.0 - (2.0 * std::pow(C, 1.0 / N) + 1.0) * (r / R);
    if (!(factor > 0.0)) {
        rep.outside_regime = true;
        return rep;
    }
    rep.eps = 1.0 / factor - 1.0;
    rep.bound = (1.0 + rep.eps) * eucl_constant(N, p) /
                std::pow(theta_R, 1.0 / N);

    const auto& nodes = grid.nodes();
    const int n = grid.n_nodes();
    std::vector<double> ratios(trials, 0.0);
    parallel_for(trials, [&](int t) {
        auto eng = seeded_engine(seed, static_cast<uint64_t>(t));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        // Random compactly supported profile in B_r(x): a power cap with a
        // smooth modulation, vanishing at distance r.
        const double alpha = 0.6 + 1.8 * unif(eng);
        const double k = 1.0 + 3.0 * unif(eng);
        const double phase = 2.0 * std::numbers::pi * unif(eng);
        std::vector<double> u(n, 0.0);
        for (int i = 0; i < n; ++i) {
            const double s = std::abs(nodes[i] - x) / r;
            if (s >= 1.0) continue;
            const double cap = std::pow(1.0 - s, alpha);
            u[i] = cap * (1.0 + 0.3 * std::sin(k * std::numbers::pi * s +
                                               phase) * (1.0 - s));
        }
        const SampledFunction uf(grid, u);
        const double grad = std::pow(dirichlet_energy(uf, p), 1.0 / p);
        if (grad <= 1e-14) return;
        ratios[t] = lp_norm(uf, p * N / (N - p)) / grad;
    });
    for (int t = 0; t < trials; ++t) {
        if (ratios[t] > rep.sharpest_ratio) {
            rep.sharpest_ratio = ratios[t];
            rep.worst_trial = t;
        }
    }
    rep.passed = rep.sharpest_ratio <= rep.bound * (1.0 + 1e-9);
    return rep;
}

}  // namespace soblab
