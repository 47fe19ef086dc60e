#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "soblab/constants.hpp"
#include "soblab/grid.hpp"
#include "soblab/yamabe.hpp"

using namespace soblab;
using std::numbers::pi;

namespace {

ScalarField constant_field(const WeightedGrid& g, double c, double N) {
    return ScalarField(g, std::vector<double>(g.n_nodes(), c), N, N);
}

}  // namespace

TEST_CASE("ScalarField validates size, finiteness and integrability") {
    const auto g = WeightedGrid::sphere_model(3.0, 128);
    CHECK_NOTHROW(constant_field(g, 1.0, 3.0));
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(64, 0.0), 3.0, 3.0),
                    std::invalid_argument);
    std::vector<double> bad(g.n_nodes(), 0.0);
    bad[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ScalarField(g, bad, 3.0, 3.0), std::invalid_argument);
    // Declared exponent must exceed N/2.
    CHECK_THROWS_AS(
        ScalarField(g, std::vector<double>(g.n_nodes(), 0.0), 1.4, 3.0),
        std::invalid_argument);
}

TEST_CASE("yamabe quotient preconditions") {
    const auto g = WeightedGrid::cone_model(3.0, 1.0, 128);  // mass != 1
    const auto S = constant_field(g, 0.0, 3.0);
    const auto u = SampledFunction::from(g, [](double t) { return 1.0 + t; });
    CHECK_THROWS_AS(yamabe_quotient(u, S, 3.0), std::invalid_argument);
    const auto gs = WeightedGrid::sphere_model(3.0, 128);
    const auto Ss = constant_field(gs, 0.0, 3.0);
    const auto z = SampledFunction::from(gs, [](double) { return 0.0; });
    CHECK_THROWS_AS(yamabe_quotient(z, Ss, 3.0), std::invalid_argument);
}

TEST_CASE("quotient shift identity at the constant function") {
    const auto g = WeightedGrid::sphere_model(4.0, 1024);
    const auto u = SampledFunction::from(g, [](double) { return 1.0 ; });
    const auto S = SampledFunction::from(
        g, [](double t) { return std::cos(2.0 * t); });
    for (double c : {-3.0, 0.5, 2.0}) {
        std::vector<double> shifted(S.values);
        for (double& v : shifted) v += c;
        const double q0 =
            yamabe_quotient(u, ScalarField(g, S.values, 4.0, 4.0), 4.0);
        const double qc =
            yamabe_quotient(u, ScalarField(g, shifted, 4.0, 4.0), 4.0);
        CHECK(qc == doctest::Approx(q0 + c).epsilon(1e-12));
    }
}

TEST_CASE("vanishing scalar term: constant is the exact minimizer") {
    const auto g = WeightedGrid::sphere_model(3.0, 1024);
    const auto S = constant_field(g, 0.0, 3.0);
    YamabeOptions opts;
    opts.n_restarts = 2;
    const auto rep = minimize_yamabe(g, S, 3.0, opts);
    CHECK(std::abs(rep.lambda_estimate) < 1e-8);
    CHECK(rep.el_residual < 1e-7);
    CHECK(!rep.unbounded_suspected);
    // Minimizer is (numerically) constant.
    double lo = rep.minimizer.values[0], hi = lo;
    for (double v : rep.minimizer.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo < 1e-6 * std::abs(hi));
}

TEST_CASE("constant positive scalar term: lambda at most the constant") {
    const auto g = WeightedGrid::sphere_model(3.0, 1024);
    for (double s0 : {0.5, 2.0}) {
        const auto rep = minimize_yamabe(g, constant_field(g, s0, 3.0), 3.0);
        CHECK(std::isfinite(rep.lambda_estimate));
        CHECK(rep.lambda_estimate <= s0 + 1e-9);
        CHECK(rep.lambda_estimate > 0.0);
    }
}

TEST_CASE("lambda is monotone in the scalar term") {
    const auto g = WeightedGrid::sphere_model(3.0, 512);
    YamabeOptions opts;
    opts.n_restarts = 3;
    const auto S_lo = SampledFunction::from(
        g, [](double t) { return std::cos(t) - 1.0; });
    const auto S_hi = SampledFunction::from(
        g, [](double t) { return std::cos(t) + 0.5; });
    const double lam_lo =
        minimize_yamabe(g, ScalarField(g, S_lo.values, 3.0, 3.0), 3.0, opts)
            .lambda_estimate;
    const double lam_hi =
        minimize_yamabe(g, ScalarField(g, S_hi.values, 3.0, 3.0), 3.0, opts)
            .lambda_estimate;
    // Pointwise S_lo <= S_hi forces lambda_lo <= lambda_hi, up to
    // optimizer noise.
    CHECK(lam_lo <= lam_hi + 2e-6);
}

TEST_CASE("negative well: minimizer localizes, stable across resolutions") {
    const auto well = [](double t) {
        const double d = (t - pi / 2.0) / 0.25;
        return -25.0 * std::exp(-d * d);
    };
    YamabeOptions opts;
    opts.n_restarts = 4;
    std::vector<double> lambda;
    for (int n : {1024, 4096}) {
        const auto g = WeightedGrid::sphere_model(3.0, n);
        const auto S = SampledFunction::from(g, well);
        const auto rep =
            minimize_yamabe(g, ScalarField(g, S.values, 3.0, 3.0), 3.0, opts);
        CHECK(rep.lambda_estimate < 0.0);
        lambda.push_back(rep.lambda_estimate);
        // Mass of the minimizer concentrates near the well.
        const auto& u = rep.minimizer;
        double peak_t = 0.0, peak = -1.0;
        for (int i = 0; i < g.n_nodes(); ++i)
            if (u.values[i] > peak) {
                peak = u.values[i];
                peak_t = g.nodes()[i];
            }
        CHECK(std::abs(peak_t - pi / 2.0) < 0.3);
    }
    CHECK(std::abs(lambda[0] - lambda[1]) < 0.02 * std::abs(lambda[1]));
}

TEST_CASE("Euler-Lagrange residual is small for converged minimizers") {
    const auto g = WeightedGrid::sphere_model(3.0, 4096);
    const auto S = SampledFunction::from(
        g, [](double t) { return std::cos(t); });
    const auto field = ScalarField(g, S.values, 3.0, 3.0);
    YamabeOptions opts;
    opts.n_restarts = 2;
    opts.max_iter = 8000;
    const auto rep = minimize_yamabe(g, field, 3.0, opts);
    CHECK(rep.el_residual <= 1e-5);
    // Consistency: recomputing the residual from the returned pieces matches.
    CHECK(euler_lagrange_residual(rep.minimizer, rep.lambda_estimate, field,
                                  3.0) == doctest::Approx(rep.el_residual));
}

TEST_CASE("Euler-Lagrange residual vanishes exactly for the trivial triple") {
    const auto g = WeightedGrid::sphere_model(3.0, 512);
    const auto u = SampledFunction::from(g, [](double) { return 1.0; });
    CHECK(euler_lagrange_residual(u, 0.0, constant_field(g, 0.0, 3.0), 3.0) ==
          0.0);
}

TEST_CASE("Euler-Lagrange residual grows linearly in a multiplier error") {
    const auto g = WeightedGrid::sphere_model(3.0, 1024);
    const auto field = constant_field(g, 0.0, 3.0);
    YamabeOptions opts;
    opts.n_restarts = 1;
    const auto rep = minimize_yamabe(g, field, 3.0, opts);
    const double base = rep.el_residual;
    const double r1 = euler_lagrange_residual(rep.minimizer,
                                              rep.lambda_estimate + 1e-3,
                                              field, 3.0);
    const double r2 = euler_lagrange_residual(rep.minimizer,
                                              rep.lambda_estimate + 1e-2,
                                              field, 3.0);
    CHECK(r1 > 10.0 * std::max(base, 1e-12));
    CHECK(r2 / r1 == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("density upper bound evaluates to N(N-2)/4 at the model density") {
    for (double N : {3.0, 4.0, 6.0}) {
        const double theta = 1.0 / unit_sphere_volume(N + 1.0);
        const double sharp = N * (N - 2.0) / 4.0;
        const auto ok = yamabe_upper_bound_check(sharp, theta, N);
        CHECK(ok.passed);
        CHECK(ok.bound == doctest::Approx(sharp).epsilon(1e-12));
        CHECK(!yamabe_upper_bound_check(sharp * 1.01, theta, N).passed);
    }
    CHECK_THROWS_AS(yamabe_upper_bound_check(1.0, 0.0, 3.0),
                    std::invalid_argument);
}

TEST_CASE("lambda estimate stays below the density upper bound") {
    // S = 10 * bound is far above the bound pointwise, yet the Yamabe
    // constant cannot exceed min_theta^{2/N}/Eucl^2: concentration at the
    // tip caps it.
    const double N = 3.0;
    const auto g = WeightedGrid::sphere_model(N, 2048);
    const double theta = 1.0 / unit_sphere_volume(N + 1.0);
    const double bound = N * (N - 2.0) / 4.0;
    const auto rep =
        minimize_yamabe(g, constant_field(g, 10.0 * bound, N), N);
    CHECK(yamabe_upper_bound_check(rep.lambda_estimate, theta, N, 1e-6)
              .passed);
}

TEST_CASE("trend over an identical family is exactly flat") {
    const auto g = WeightedGrid::sphere_model(3.0, 512);
    const auto S = constant_field(g, 1.0, 3.0);
    std::vector<const WeightedGrid*> gs(3, &g);
    std::vector<const ScalarField*> Ss(3, &S);
    YamabeOptions opts;
    opts.n_restarts = 2;
    const auto rep = lambda_continuity_trend(gs, Ss, 3.0, opts);
    CHECK(rep.cauchy);
    CHECK(rep.max_successive_jump == doctest::Approx(0.0));
}

TEST_CASE("trend along a converging weight family is Cauchy") {
    // Grids with weight sin^{N-1+1/k} converge to the model as k grows;
    // the constants must settle down along the family.
    const double N = 3.0;
    std::vector<WeightedGrid> grids;
    std::vector<ScalarField> fields;
    for (int k : {1, 2, 4, 8}) {
        grids.push_back(WeightedGrid::sphere_model(N + 1.0 / k, 512));
    }
    for (const auto& g : grids) {
        const auto S = SampledFunction::from(
            g, [](double t) { return -2.0 * std::cos(t); });
        fields.emplace_back(g, S.values, N, N);
    }
    std::vector<const WeightedGrid*> gs;
    std::vector<const ScalarField*> Ss;
    for (size_t i = 0; i < grids.size(); ++i) {
        gs.push_back(&grids[i]);
        Ss.push_back(&fields[i]);
    }
    YamabeOptions opts;
    opts.n_restarts = 2;
    const auto rep = lambda_continuity_trend(gs, Ss, N, opts);
    CHECK(rep.cauchy);
    CHECK(rep.max_successive_jump < 0.5);
}

TEST_CASE("trend rejects mismatched or too-short families") {
    const auto g = WeightedGrid::sphere_model(3.0, 128);
    const auto S = constant_field(g, 0.0, 3.0);
    std::vector<const WeightedGrid*> gs{&g};
    std::vector<const ScalarField*> Ss{&S};
    CHECK_THROWS_AS(lambda_continuity_trend(gs, Ss, 3.0),
                    std::invalid_argument);
}
