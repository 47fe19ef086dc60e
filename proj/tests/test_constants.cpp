#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "soblab/constants.hpp"

using namespace soblab;
using std::numbers::pi;

namespace {
double rel_err(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}
}  // namespace

TEST_CASE("gamma function against high-precision oracle values") {
    CHECK(rel_err(gamma_fn(0.5), std::sqrt(pi)) < 1e-13);
    CHECK(rel_err(gamma_fn(1.0), 1.0) < 1e-14);
    CHECK(rel_err(gamma_fn(5.0), 24.0) < 1e-13);
    CHECK(rel_err(gamma_fn(7.5), 1871.25430579778835) < 1e-13);
    CHECK(rel_err(gamma_fn(0.1), 9.51350769866873184) < 1e-13);
    // Reflection formula branch (negative non-integer arguments).
    CHECK(rel_err(gamma_fn(-1.5), 2.3632718012073547) < 1e-12);
    CHECK(rel_err(gamma_fn(-0.3), -4.32685110882519262) < 1e-12);
}

TEST_CASE("gamma recurrence as a property") {
    for (double x : {0.3, 1.7, 2.9, 4.4, 6.1, 9.8})
        CHECK(rel_err(gamma_fn(x + 1.0), x * gamma_fn(x)) < 1e-13);
}

TEST_CASE("adaptive quadrature on closed-form integrals") {
    CHECK(std::abs(integrate([](double t) { return std::sin(t); }, 0.0, pi) -
                   2.0) < 1e-12);
    CHECK(std::abs(integrate([](double t) { return std::exp(t); }, 0.0, 1.0) -
                   (std::exp(1.0) - 1.0)) < 1e-12);
    // Integrable endpoint singularity (nodes never touch the endpoints).
    CHECK(std::abs(integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0,
                             1.0) -
                   2.0) < 1e-7);
}

TEST_CASE("unit ball and sphere volumes in closed form") {
    CHECK(rel_err(unit_ball_volume(1.0), 2.0) < 1e-14);
    CHECK(rel_err(unit_ball_volume(2.0), pi) < 1e-14);
    CHECK(rel_err(unit_ball_volume(3.0), 4.0 * pi / 3.0) < 1e-14);
    CHECK(rel_err(unit_ball_volume(4.0), pi * pi / 2.0) < 1e-14);
    CHECK(rel_err(unit_sphere_volume(2.0), 2.0 * pi) < 1e-14);
    CHECK(rel_err(unit_sphere_volume(3.0), 4.0 * pi) < 1e-14);
    CHECK(rel_err(unit_sphere_volume(4.0), 2.0 * pi * pi) < 1e-14);
    // sigma_{N-1} = N omega_N holds for fractional N too.
    for (double N : {2.5, 3.7, 5.5, 8.1})
        CHECK(rel_err(unit_sphere_volume(N), N * unit_ball_volume(N)) < 1e-13);
}

TEST_CASE("sharp Sobolev constant against high-precision oracle") {
    // {N, p, value} computed with 40-digit arithmetic.
    const double table[][3] = {
        {2.5, 1.3, 0.252850960287603513}, {2.5, 1.8, 0.435593248157915736},
        {3, 1.5, 0.26053088059892401},    {3, 2, 0.427260542862526665},
        {3, 2.5, 0.843263859938520833},   {4, 1.2, 0.169297994759762729},
        {4, 2, 0.312189205697777952},     {4, 3, 0.763245623819651575},
        {5, 1.5, 0.181915206757170351},   {5, 2.5, 0.365978061196094985},
        {5, 4, 1.2007908310131508},       {5.5, 2, 0.242217159854624964},
        {6, 3, 0.417670706201594027},     {7, 2, 0.205622441342225553},
        {7, 5, 1.06803079850800368},      {8, 1.7, 0.156898520436751168},
        {8, 4, 0.512993868944470266},     {10, 2, 0.165133524113089777},
        {10, 6, 0.875051743453710355},    {12, 3.5, 0.292155546352377863},
    };
    for (const auto& row : table)
        CHECK(rel_err(eucl_constant(row[0], row[1]), row[2]) < 1e-12);
}

TEST_CASE("p=2 closed form agrees with the general constant") {
    for (double N : {2.5, 3.0, 4.0, 7.0, 10.0})
        CHECK(rel_err(eucl_constant(N, 2.0), eucl_constant_2(N)) < 1e-12);
}

TEST_CASE("sharp constant rejects out-of-range exponents") {
    CHECK_THROWS_AS(eucl_constant(3.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(eucl_constant(3.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(eucl_constant(3.0, 4.5), std::domain_error);
    CHECK_THROWS_AS(eucl_constant_2(2.0), std::domain_error);
}

TEST_CASE("comparison volume against oracle values") {
    // Flat case is exactly the Euclidean ball volume.
    CHECK(rel_err(comparison_volume(0.0, 3.0, 2.0),
                  unit_ball_volume(3.0) * 8.0) < 1e-12);
    CHECK(rel_err(comparison_volume(0.0, 2.5, 0.7), 1.51339168736193003) <
          1e-10);
    CHECK(rel_err(comparison_volume(2.0, 3.0, 1.0), 3.42654319113592228) <
          1e-10);
    CHECK(rel_err(comparison_volume(-1.0, 3.0, 1.0), 4.62818012251038406) <
          1e-10);
    CHECK(rel_err(comparison_volume(3.0, 4.0, 1.0), 3.53214512733123094) <
          1e-10);
    CHECK(rel_err(comparison_volume(-2.0, 5.5, 2.0), 625.697588669062466) <
          1e-10);
}

TEST_CASE("comparison volume small-radius limit is Euclidean") {
    for (double K : {-3.0, -1.0, 0.0, 1.0, 4.0})
        for (double N : {2.5, 3.0, 5.0}) {
            const double r = 1e-4;
            const double ratio = comparison_volume(K, N, r) /
                                 (unit_ball_volume(N) * std::pow(r, N));
            CHECK(std::abs(ratio - 1.0) < 1e-6);
        }
}

TEST_CASE("comparison volume respects the diameter bound for K > 0") {
    // Positive curvature caps the radius at pi sqrt((N-1)/K).
    const double K = 2.0, N = 3.0;
    const double r_max = pi * std::sqrt((N - 1.0) / K);
    CHECK_NOTHROW(comparison_volume(K, N, r_max * 0.999));
    CHECK_THROWS_AS(comparison_volume(K, N, r_max * 1.001), std::domain_error);
}

TEST_CASE("distortion coefficient: four-case definition") {
    // K theta^2 = 0 and the (K < 0, N = 0) branch both give t.
    CHECK(distortion_sigma(0.3, 0.0, 3.0, 1.7).value == doctest::Approx(0.3));
    CHECK(!distortion_sigma(0.3, 0.0, 3.0, 1.7).infinite);
    CHECK(distortion_sigma(0.6, -2.0, 0.0, 1.0).value == doctest::Approx(0.6));
    // K theta^2 >= N pi^2 is the infinite branch.
    CHECK(distortion_sigma(0.5, 40.0, 3.0, 2.0).infinite);
    CHECK(distortion_sigma(0.5, 3.0 * pi * pi, 3.0, 1.0).infinite);
    // Oscillating branch.
    CHECK(rel_err(distortion_sigma(0.3, 2.0, 3.0, 1.0).value,
                  0.33277037339411288) < 1e-13);
    // Hyperbolic branch.
    CHECK(rel_err(distortion_sigma(0.3, -2.0, 3.0, 1.0).value,
                  0.27178763852630896) < 1e-13);
}

TEST_CASE("distortion sigma endpoint values") {
    for (double K : {-2.0, 0.0, 2.0})
        for (double th : {0.5, 1.0}) {
            const auto s0 = distortion_sigma(0.0, K, 3.0, th);
            const auto s1 = distortion_sigma(1.0, K, 3.0, th);
            CHECK(s0.value == doctest::Approx(0.0));
            CHECK(s1.value == doctest::Approx(1.0));
        }
}

TEST_CASE("tau distortion relation to sigma") {
    for (double K : {-1.5, 0.0, 1.5})
        for (double t : {0.2, 0.5, 0.8}) {
            const double N = 4.0, th = 1.1;
            const auto s = distortion_sigma(t, K, N - 1.0, th);
            const auto tau = distortion_tau(t, K, N, th);
            REQUIRE(!s.infinite);
            REQUIRE(!tau.infinite);
            CHECK(rel_err(tau.value, std::pow(t, 1.0 / N) *
                                         std::pow(s.value, 1.0 - 1.0 / N)) <
                  1e-13);
        }
}

TEST_CASE("tau distortion N = 1 special cases") {
    CHECK(distortion_tau(0.4, -1.0, 1.0, 2.0).value == doctest::Approx(0.4));
    CHECK(distortion_tau(0.4, 0.0, 1.0, 2.0).value == doctest::Approx(0.4));
    CHECK(distortion_tau(0.4, 1.0, 1.0, 2.0).infinite);
}
