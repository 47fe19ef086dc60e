#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "soblab/concentration.hpp"
#include "soblab/constants.hpp"
#include "soblab/grid.hpp"

using namespace soblab;
using std::numbers::pi;

namespace {

// u_k(x) = k^{(N-2)/2} phi(k x) renormalized in L^{2*}: the canonical
// concentrating (bubbling) family at the cone tip.
std::vector<SampledFunction> bubble_family(const WeightedGrid& g, double N,
                                           const std::vector<double>& scales) {
    std::vector<SampledFunction> seq;
    for (double k : scales) {
        auto u = SampledFunction::from(g, [&](double x) {
            const double t = k * x;
            return std::pow(k, 0.5 * (N - 2.0)) * std::exp(-t * t);
        });
        seq.push_back(std::move(u));
    }
    return seq;
}

}  // namespace

TEST_CASE("constant-limit family classified as ConstantLimit") {
    const auto g = WeightedGrid::sphere_model(3.0, 1024);
    std::vector<SampledFunction> seq;
    for (int k = 1; k <= 8; ++k)
        seq.push_back(SampledFunction::from(g, [&](double t) {
            return 1.0 + std::cos(t) / k;
        }));
    const auto d = classify_sequence(g, seq, 3.0);
    CHECK(d.classification == SequenceClass::ConstantLimit);
}

TEST_CASE("repeated non-constant function classified as NonConstantLimit") {
    const auto g = WeightedGrid::sphere_model(3.0, 1024);
    std::vector<SampledFunction> seq;
    for (int k = 0; k < 6; ++k)
        seq.push_back(SampledFunction::from(g, [](double t) {
            return 1.0 + 0.8 * std::cos(t);
        }));
    const auto d = classify_sequence(g, seq, 3.0);
    CHECK(d.classification == SequenceClass::NonConstantLimit);
}

TEST_CASE("bubbling family classified as Concentration at the tip") {
    for (double N : {3.0, 4.0}) {
        const auto g = WeightedGrid::cone_model(N, 2.0, 2048);
        const auto seq = bubble_family(g, N, {2, 4, 8, 16, 32});
        const double q = 2.0 * N / (N - 2.0);
        const auto d = classify_sequence(g, seq, q);
        CHECK(d.classification == SequenceClass::Concentration);
        CHECK(d.location < 0.2);  // concentrates at x = 0
        CHECK(d.mass_in_shrinking_balls >= 0.9);
        // L2 collapse along the family.
        CHECK(d.l2_norms.back() < 0.1 * d.l2_norms.front());
    }
}

TEST_CASE("classification is invariant under per-term positive rescaling") {
    const auto g = WeightedGrid::cone_model(3.0, 2.0, 1024);
    auto seq = bubble_family(g, 3.0, {2, 4, 8, 16});
    const auto base = classify_sequence(g, seq, 6.0);
    for (size_t k = 0; k < seq.size(); ++k)
        for (double& v : seq[k].values) v *= (1.7 + 2.0 * k);
    const auto scaled = classify_sequence(g, seq, 6.0);
    CHECK(base.classification == scaled.classification);
    CHECK(scaled.auto_normalized);
}

TEST_CASE("oscillating family is reported Inconclusive") {
    const auto g = WeightedGrid::sphere_model(3.0, 1024);
    std::vector<SampledFunction> seq;
    for (int k = 0; k < 6; ++k)
        seq.push_back(SampledFunction::from(g, [&](double t) {
            // Alternates between two far-apart shapes: no limit, no decay.
            return k % 2 == 0 ? 1.0 + 0.8 * std::cos(t)
                              : 1.0 + 0.8 * std::cos(2.0 * t);
        }));
    const auto d = classify_sequence(g, seq, 3.0);
    CHECK(d.classification == SequenceClass::Inconclusive);
}

TEST_CASE("classify_sequence rejects short or mismatched input") {
    const auto g = WeightedGrid::sphere_model(3.0, 256);
    std::vector<SampledFunction> two(
        2, SampledFunction::from(g, [](double t) { return 1.0 + t; }));
    CHECK_THROWS_AS(classify_sequence(g, two, 3.0), std::invalid_argument);
}

TEST_CASE("Brezis-Lieb defect vanishes identically for u = v = limit") {
    const auto g = WeightedGrid::sphere_model(3.0, 512);
    const auto u = SampledFunction::from(
        g, [](double t) { return 1.0 + 0.3 * std::sin(t); });
    std::vector<SampledFunction> seq(5, u);
    const auto rep = brezis_lieb_check(g, seq, seq, 3.0, 2.0);
    CHECK(rep.max_tail_defect == doctest::Approx(0.0));
}

TEST_CASE("Brezis-Lieb defect decays on the sliding-shrinking bump family") {
    // Long uniform grid; u_k = u_inf + w_k with w_k a shrinking bump sliding
    // to the right (slowly decaying L3 norm, geometrically vanishing L2
    // norm); v_k = u_inf identically.
    std::vector<double> nodes, w;
    const int n = 16384;
    for (int i = 0; i < n; ++i) {
        nodes.push_back(20.0 * i / (n - 1));
        w.push_back(1.0);
    }
    const auto g = WeightedGrid::custom(nodes, w);
    const auto u_inf = SampledFunction::from(
        g, [](double x) { return 1.0 + 0.2 * std::sin(x); });
    std::vector<SampledFunction> u_seq, v_seq;
    const double q = 3.0;
    for (int k = 1; k <= 7; ++k) {
        const double scale = std::pow(2.0, k - 1);
        const double damp = std::pow(0.8, k - 1);
        const double center = 3.0 + 2.0 * k;
        u_seq.push_back(SampledFunction::from(g, [&](double x) {
            const double t = scale * (x - center);
            return 1.0 + 0.2 * std::sin(x) +
                   2.0 * damp * std::pow(scale, 1.0 / q) * std::exp(-t * t);
        }));
        v_seq.push_back(u_inf);
    }
    const auto rep = brezis_lieb_check(g, u_seq, v_seq, q, 2.0);
    CHECK(rep.decaying);
    CHECK(rep.defects.back() < rep.defects.front());
}

TEST_CASE("Brezis-Lieb reports which precondition fails") {
    const auto g = WeightedGrid::sphere_model(3.0, 512);
    std::vector<SampledFunction> u_seq, v_seq;
    for (int k = 0; k < 5; ++k) {
        // v_seq oscillates: not convergent.
        u_seq.push_back(SampledFunction::from(
            g, [](double t) { return 1.0 + 0.1 * std::cos(t); }));
        v_seq.push_back(SampledFunction::from(g, [&](double t) {
            return k % 2 == 0 ? 1.0 : 2.0 + std::cos(t);
        }));
    }
    CHECK_THROWS_WITH_AS(brezis_lieb_check(g, u_seq, v_seq, 3.0, 2.0),
                         doctest::Contains("v_seq"), std::invalid_argument);
}

TEST_CASE("concentration density bound: saturation and contrapositive") {
    const double N = 3.0, p = 2.0;
    // theta = 1 at the cone tip with A -> Eucl^p: equality case.
    const double Ap = std::pow(eucl_constant(N, p), p);
    CHECK(concentration_density_bound(1.0, false, Ap, N, p).passed);
    // Slightly larger theta must fail at the same A.
    CHECK(!concentration_density_bound(1.01, false, Ap, N, p, 1e-9).passed);
    // Infinite density requires limsup A = 0.
    CHECK(!concentration_density_bound(0.0, true, 0.1, N, p).passed);
    CHECK(concentration_density_bound(0.0, true, 0.0, N, p).passed);
    // theta = 1/sigma_N with A = (2*-2)/N: the alpha_p identity, equality.
    const double theta = 1.0 / unit_sphere_volume(N + 1.0);
    const double A = (2.0 * N / (N - 2.0) - 2.0) / N;
    const auto rep = concentration_density_bound(theta, false, A, N, p);
    CHECK(rep.passed);
    CHECK(rep.lhs == doctest::Approx(rep.rhs).epsilon(1e-10));
}
