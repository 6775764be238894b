#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "acfront/flow.hpp"
#include "acfront/rng.hpp"

using namespace acfront;

namespace {

// e^{-t} I_k(t) from the power series in long double.
double series_scaled(int k, double t) {
    long double x = t / 2.0L;
    long double term = std::exp(static_cast<long double>(k) * std::log(x) - std::lgamma(k + 1.0L) - t);
    if (t == 0.0) return k == 0 ? 1.0 : 0.0;
    long double sum = term;
    for (int m = 1; m < 500; ++m) {
        term *= x * x / (static_cast<long double>(m) * (m + k));
        sum += term;
        if (term < 1e-22L * sum) break;
    }
    return static_cast<double>(sum);
}

PhaseSequence random_sequence(int n, double amp, std::uint64_t seed, BoundaryJ bc = BoundaryJ::periodic) {
    SplitMix64 rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-amp, amp);
    return PhaseSequence(v, bc);
}

double sup_diff(const PhaseSequence& a, const PhaseSequence& b) {
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a[j] - b[j]));
    return s;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("scaled Bessel values against the series") {
    for (double t : {0.0, 0.01, 0.5, 1.0, 3.0, 5.0, 12.0, 20.0})
        for (int k = 0; k <= 30; ++k) {
            const double ref = series_scaled(k, t);
            const double got = bessel_I_scaled(k, t);
            if (ref > 1e-290) CHECK(std::abs(got - ref) <= 1e-13 * ref);
        }
}

TEST_CASE("scaled Bessel values against Boost") {
    for (double t : {0.7, 10.0, 50.0, 200.0, 600.0})
        for (int k : {0, 1, 2, 7, 40, 150}) {
            const double ref = boost::math::cyl_bessel_i(k, t) * std::exp(-t);
            if (!std::isfinite(ref) || ref < 1e-290) continue;
            CHECK(bessel_I_scaled(k, t) == doctest::Approx(ref).epsilon(1e-12));
        }
    CHECK(bessel_I(3, 2.0) == doctest::Approx(boost::math::cyl_bessel_i(3, 2.0)).epsilon(1e-13));
}

TEST_CASE("Bessel table identities") {
    for (double t : {0.3, 4.0, 75.0}) {
        const auto I = bessel_I_scaled_table(400, t);
        double total = I[0];
        for (std::size_t k = 1; k < I.size(); ++k) total += 2 * I[k];
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
        // recurrence I_{k-1} - I_{k+1} = (2k/t) I_k
        for (int k = 1; k < 20; ++k) CHECK(I[k - 1] - I[k + 1] == doctest::Approx(2.0 * k / t * I[k]).epsilon(1e-10));
    }
}

TEST_CASE("heat kernel mass and symmetry") {
    for (double t : {0.0, 1.0, 5.0, 20.0, 100.0, 1000.0}) {
        const HeatKernelTable G = heat_kernel(t);
        CHECK(std::abs(G.mass() - 1.0) < 1e-12);
        for (int k = 0; k < 10; ++k) CHECK(G(k) == G(-k));
    }
}

TEST_CASE("heat solve matches explicit Euler") {
    for (auto bc : {BoundaryJ::periodic, BoundaryJ::reflect}) {
        const PhaseSequence h0 = random_sequence(40, 1.0, 9, bc);
        const PhaseSequence a = heat_solve(h0, 3.0);
        const PhaseSequence b = heat_euler(h0, 3.0, 1e-4);
        CHECK(sup_diff(a, b) < 1e-4);
    }
}

TEST_CASE("heat solve preserves constants and the mean") {
    const PhaseSequence c(std::vector<double>(33, 0.625));
    const PhaseSequence hc = heat_solve(c, 17.0);
    for (int j = 0; j < 33; ++j) CHECK(hc[j] == doctest::Approx(0.625).epsilon(1e-14));
    const PhaseSequence h0 = random_sequence(64, 1.0, 4);
    const PhaseSequence h = heat_solve(h0, 9.0);
    double m0 = 0, m1 = 0;
    for (int j = 0; j < 64; ++j) {
        m0 += h0[j];
        m1 += h[j];
    }
    CHECK(m1 == doctest::Approx(m0).epsilon(1e-12));
}

TEST_CASE("decay rates on block data") {
    const PhaseSequence h0 = random_block_sequence(2048, 256, 1.0, 1);
    const DecayReport r = decay_report(h0, log_time_grid(1.0, 1000.0, 31));
    CHECK(r.slope_grad == doctest::Approx(-0.5).epsilon(0.2));
    CHECK(r.slope_lap == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(r.monotone_grad);
    CHECK(r.monotone_lap);
}

TEST_CASE("Bessel sums behind the decay bounds") {
    const BesselBoundsReport r = bessel_bounds_report({1.0, 5.0, 20.0, 100.0});
    CHECK(r.single_sign_change);
    CHECK(r.decreasing_in_k);
    for (double x : r.telescoping) CHECK(x < 1e-12);
    for (double x : r.grad_sum) CHECK(x < 1.0);
}

TEST_CASE("Cole-Hopf and direct routes agree") {
    const FlowParams p = FlowParams::from_wave(-0.28, -0.15);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const PhaseSequence V0 = random_sequence(64, 0.5, seed);
        const VTrajectory a = v_solve(V0, p, {0.5, 2.0});
        const VTrajectory b = v_solve_direct(V0, p, {0.5, 2.0}, 1e-3);
        CHECK(sup_diff(a.at(1), b.at(1)) < 1e-4);
    }
}

TEST_CASE("Cole-Hopf route is translation invariant") {
    const FlowParams p = FlowParams::from_wave(-0.28, -0.15);
    std::vector<double> v(32), w(32);
    SplitMix64 rng(8);
    for (int j = 0; j < 32; ++j) {
        v[j] = std::ldexp(std::floor(rng.uniform(-64, 64)), -7);
        w[j] = v[j] + 3.25;
    }
    const VTrajectory a = v_solve(PhaseSequence(v), p, {1.0, 4.0});
    const VTrajectory b = v_solve(PhaseSequence(w), p, {1.0, 4.0});
    for (std::size_t k = 0; k < 2; ++k) {
        const PhaseSequence va = a.at(k), vb = b.at(k);
        for (int j = 0; j < 32; ++j) CHECK(vb[j] - va[j] == 3.25);
    }
}

TEST_CASE("linear variant when d vanishes") {
    const FlowParams p = FlowParams::from_wave(0.1, 0.0);
    CHECK(p.variant == FlowParams::Variant::linear_heat);
    const PhaseSequence V0 = random_sequence(20, 1.0, 2);
    const VTrajectory t = v_solve(V0, p, {2.0});
    const PhaseSequence h = heat_solve(V0, 2.0);
    for (int j = 0; j < 20; ++j) CHECK(t.at(0)[j] == doctest::Approx(h[j] + 0.2).epsilon(1e-12));
}

TEST_CASE("overflow guard") {
    const FlowParams p = FlowParams::from_wave(-0.28, -0.15);
    std::vector<double> v(10, 0.0);
    v[5] = 5000.0;
    CHECK_THROWS_AS(v_solve(PhaseSequence(v), p, {1.0}), OverflowGuard);
}

TEST_CASE("gradient report") {
    const FlowParams p = FlowParams::from_wave(-0.28, -0.15);
    const PhaseSequence V0 = random_block_sequence(512, 64, 0.5, 3);
    const VTrajectory tr = v_solve(V0, p, log_time_grid(1.0, 500.0, 20));
    const GradientReport g = v_gradient_report(tr);
    CHECK(g.monotone_envelope);
    CHECK(g.slope_grad < -0.3);
}

TEST_CASE("mean-curvature flow of a constant is a rigid translation") {
    FlowParams p = FlowParams::from_wave(-0.28, -0.15);
    const PhaseSequence G0(std::vector<double>(16, 1.5));
    const PhaseTrajectory tr = mcf_solve(G0, p, {0.0, 2.0, 10.0});
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        for (int j = 0; j < 16; ++j) CHECK(tr.values[k][j] == doctest::Approx(1.5 - 0.28 * tr.times[k]).epsilon(1e-12));
}

TEST_CASE("mean-curvature flow comparison principle") {
    FlowParams p = FlowParams::from_wave(-0.28, -0.15);
    SplitMix64 rng(99);
    long violations = 0;
    for (int pair = 0; pair < 5; ++pair) {
        std::vector<double> a(32), b(32);
        double x = 0.0;
        for (int j = 0; j < 32; ++j) {
            x += rng.uniform(-0.02, 0.02);
            a[j] = x - (j * (x / 32.0));
            b[j] = a[j] + rng.uniform(0.0, 0.05);
        }
        const auto ta = mcf_solve(PhaseSequence(a), p, {1.0, 5.0, 10.0});
        const auto tb = mcf_solve(PhaseSequence(b), p, {1.0, 5.0, 10.0});
        for (std::size_t k = 0; k < 3; ++k)
            for (int j = 0; j < 32; ++j)
                if (ta.values[k][j] > tb.values[k][j]) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("gradient equation is the difference of the curvature flow") {
    FlowParams p = FlowParams::from_wave(-0.28, -0.15);
    std::vector<double> g(24);
    for (int j = 0; j < 24; ++j) g[j] = 0.3 * std::sin(2 * std::numbers::pi * j / 24);
    const PhaseSequence G0(g);
    std::vector<double> u(24);
    for (int j = 0; j < 24; ++j) u[j] = d_plus(G0, j);
    const auto G = mcf_solve(G0, p, {0.5, 1.0});
    const auto U = gradient_lde_solve(PhaseSequence(u), p, {0.5, 1.0});
    for (std::size_t k = 0; k < 2; ++k)
        for (int j = 0; j < 24; ++j) CHECK(U.values[k][j] == doctest::Approx(d_plus(G.values[k], j)).epsilon(1e-10));
}

TEST_CASE("flatness guard of the curvature flow") {
    FlowParams p = FlowParams::from_wave(-0.28, -0.15);
    p.delta = 0.1;
    std::vector<double> g(16, 0.0);
    g[3] = 1.0;
    CHECK_THROWS_AS(mcf_solve(PhaseSequence(g), p, {1.0}), FlatnessViolated);
}

}
