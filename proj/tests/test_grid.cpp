#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "soblab/constants.hpp"
#include "soblab/grid.hpp"

using namespace soblab;
using std::numbers::pi;

TEST_CASE("sphere model grid has unit mass and correct metadata") {
    for (double N : {2.0, 3.0, 5.5}) {
        const auto g = WeightedGrid::sphere_model(N, 2048);
        CHECK(g.n_nodes() == 2048);
        CHECK(g.kind() == DomainKind::SphereModel);
        CHECK(g.model_N() == doctest::Approx(N));
        CHECK(g.diameter() == doctest::Approx(pi));
        CHECK(std::abs(g.total_mass() - 1.0) < 1e-10);
    }
    CHECK_THROWS_AS(WeightedGrid::sphere_model(3.0, 8), std::invalid_argument);
}

TEST_CASE("cone model grid mass matches the exact ball volume") {
    for (double N : {2.0, 3.0, 4.5}) {
        const double R = 1.7;
        const auto g = WeightedGrid::cone_model(N, R, 512);
        CHECK(g.kind() == DomainKind::ConeModel);
        CHECK(std::abs(g.total_mass() -
                       unit_ball_volume(N) * std::pow(R, N)) < 1e-12);
    }
}

TEST_CASE("custom grid rejects malformed input") {
    CHECK_THROWS_AS(WeightedGrid::custom({0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightedGrid::custom({0.0, 1.0}, {1.0, -0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightedGrid::custom({0.0, 0.5, 1.0}, {1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("measure_interval is consistent and additive") {
    const auto g = WeightedGrid::sphere_model(3.0, 4096);
    const double whole = g.measure_interval(0.0, pi);
    CHECK(std::abs(whole - g.total_mass()) < 1e-10);
    const double left = g.measure_interval(0.0, 1.1);
    const double right = g.measure_interval(1.1, pi);
    CHECK(std::abs(left + right - whole) < 1e-10);
    // Clamped outside the domain.
    CHECK(g.measure_interval(-5.0, 2.0 * pi) == doctest::Approx(whole));
    CHECK(g.measure_interval(4.0, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("measure_interval on the cone is the exact shell volume") {
    const auto g = WeightedGrid::cone_model(3.0, 2.0, 777);
    const double a = 0.3, b = 1.4;
    const double exact =
        unit_ball_volume(3.0) * (std::pow(b, 3.0) - std::pow(a, 3.0));
    CHECK(std::abs(g.measure_interval(a, b) - exact) < 1e-12);
}

TEST_CASE("Lp norm against analytic values on the sphere model") {
    // I_3 has density sin^2(t)/c_3, c_3 = pi/2. ||cos||_L2^2 =
    // (2/pi) int_0^pi cos^2 sin^2 = 1/4.
    const auto g = WeightedGrid::sphere_model(3.0, 8192);
    const auto u = SampledFunction::from(g, [](double t) { return std::cos(t); });
    CHECK(std::abs(lp_norm(u, 2.0) - 0.5) < 1e-6);
    CHECK(std::abs(integral(u)) < 1e-10);  // odd about pi/2
    CHECK(std::abs(mean(u)) < 1e-10);
}

TEST_CASE("Dirichlet energy of a linear function is exact") {
    const auto g = WeightedGrid::cone_model(3.0, 1.0, 1024);
    const double slope = 2.5;
    const auto u =
        SampledFunction::from(g, [&](double t) { return slope * t + 1.0; });
    for (double p : {1.5, 2.0, 3.0})
        CHECK(std::abs(dirichlet_energy(u, p) -
                       std::pow(slope, p) * g.total_mass()) < 1e-10);
}

TEST_CASE("Lp norm converges under refinement") {
    // ||sin||_{L3(I_4)}^3 = (3/4) int_0^pi sin^3 sin^3 dt = ... compare
    // against a 16x refined grid instead of a closed form.
    const auto fine = WeightedGrid::sphere_model(4.0, 65536);
    const auto coarse = WeightedGrid::sphere_model(4.0, 4096);
    const auto uf =
        SampledFunction::from(fine, [](double t) { return std::sin(t); });
    const auto uc =
        SampledFunction::from(coarse, [](double t) { return std::sin(t); });
    CHECK(std::abs(lp_norm(uc, 3.0) - lp_norm(uf, 3.0)) < 1e-6);
}

TEST_CASE("normalized() rescales to unit mass") {
    const auto g = WeightedGrid::cone_model(3.0, 2.0, 256).normalized();
    CHECK(std::abs(g.total_mass() - 1.0) < 1e-12);
}

TEST_CASE("truncated() keeps the prefix and appends the cut point") {
    const auto g = WeightedGrid::cone_model(3.0, 2.0, 256);
    const double r = 1.234567;
    const auto t = g.truncated(r);
    CHECK(t.nodes().back() == doctest::Approx(r));
    CHECK(std::abs(t.total_mass() - g.measure_interval(0.0, r)) < 1e-12);
}

TEST_CASE("function save/load round-trips in CSV and JSON") {
    const auto g = WeightedGrid::sphere_model(3.0, 64);
    const auto u = SampledFunction::from(
        g, [](double t) { return 1.0 + std::sin(2.0 * t); });
    for (const char* path : {"/tmp/soblab_rt.csv", "/tmp/soblab_rt.json"}) {
        save_function(u, path);
        const auto v = load_function(g, path);
        for (int i = 0; i < g.n_nodes(); ++i)
            CHECK(v.values[i] == doctest::Approx(u.values[i]).epsilon(1e-12));
        std::remove(path);
    }
}

TEST_CASE("load_function rejects mismatched nodes") {
    const auto g = WeightedGrid::sphere_model(3.0, 64);
    const auto h = WeightedGrid::sphere_model(3.0, 65);
    const auto u = SampledFunction::from(g, [](double) { return 1.0; });
    save_function(u, "/tmp/soblab_mismatch.csv");
    CHECK_THROWS_AS(load_function(h, "/tmp/soblab_mismatch.csv"),
                    std::invalid_argument);
    std::remove("/tmp/soblab_mismatch.csv");
}
