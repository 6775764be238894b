#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "acfront/phase.hpp"
#include "acfront/rng.hpp"
#include "acfront/sim.hpp"
#include "acfront/wave.hpp"

using namespace acfront;

namespace {

constexpr double kL = 40.0;
constexpr double kH = 1.0 / 16.0;

double sup_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

// Speed of a 1D lattice front started from the profile, tracked by the
// phase of its single row over t in (0, t_end].
double tracked_speed(const WaveProfile& w, double dt, double t_end) {
    SimConfig cfg = SimConfig::defaults(w.f, t_end);
    cfg.dt = dt;
    cfg.record_every = 1 << 30;
    LatticeField u(400, 1, -300);
    for (int ix = 0; ix < u.width(); ++ix) u.cell(ix, 0) = w.phi_at(u.i_begin() + ix);
    const LatticeField end = run(u, cfg);
    return extract(end, w).gamma[0] / (step_count(cfg) * dt);
}

}  // namespace

TEST_SUITE("wave") {

TEST_CASE("MFDE residual and monotone profile") {
    for (double a : {0.25, 0.3, 0.35}) {
        const WaveProfile w = solve_wave(BistableNonlinearity::cubic(a), kL, kH);
        CHECK(sup_abs(mfde_residual(w)) < 1e-9);
        CHECK(w.c < 0.0);
        CHECK(w.phi[static_cast<std::size_t>(w.zero_index())] == doctest::Approx(0.5).epsilon(1e-12));
        for (int k = 0; k + 1 < w.size(); ++k) CHECK(w.phi[k + 1] >= w.phi[k] - 1e-10);
        CHECK(w.phi.front() >= 0.0);
        CHECK(w.phi.back() <= 1.0);
    }
}

TEST_CASE("speed agrees with Richardson-extrapolated front tracking") {
    // The Euler front speed carries an O(dt) bias; extrapolating two step
    // sizes removes it and leaves an independent estimate of c.
    const WaveProfile w = solve_wave(BistableNonlinearity::cubic(0.3), kL, kH);
    const double dt = default_dt(w.f);
    const double s1 = tracked_speed(w, dt, 100.0);
    const double s2 = tracked_speed(w, dt / 2, 100.0);
    const double extrapolated = 2 * s2 - s1;
    CHECK(std::abs(s1 - w.c) / std::abs(w.c) < 1e-3);
    CHECK(std::abs(extrapolated - w.c) / std::abs(w.c) < 1e-5);
}

TEST_CASE("frozen speed for a = 0.3") {
    // Richardson-extrapolated simulation speed, see the previous case.
    const WaveProfile w = solve_wave(BistableNonlinearity::cubic(0.3), kL, kH);
    CHECK(w.c == doctest::Approx(-0.2795904).epsilon(1e-6));
}

TEST_CASE("mirror symmetry c(a) = -c(1-a)") {
    for (double a : {0.25, 0.3, 0.35}) {
        const double c = solve_wave(BistableNonlinearity::cubic(a), kL, kH).c;
        const double m = solve_wave(BistableNonlinearity::cubic(1.0 - a), kL, kH).c;
        CHECK(std::abs(c + m) < 1e-6);
    }
}

TEST_CASE("grid refinement") {
    const auto f = BistableNonlinearity::cubic(0.3);
    const double c8 = solve_wave(f, kL, 1.0 / 8.0).c;
    const double c16 = solve_wave(f, kL, 1.0 / 16.0).c;
    const double c32 = solve_wave(f, kL, 1.0 / 32.0).c;
    CHECK(std::abs(c16 - c32) < 1e-6);
    CHECK(std::abs(c16 - c32) <= std::abs(c8 - c16));
    // Longer domains change nothing at this resolution.
    CHECK(std::abs(solve_wave(f, 50.0, kH).c - c16) < 1e-9);
}

TEST_CASE("pinning is detected at the balanced detuning") {
    CHECK_THROWS_AS(solve_wave(BistableNonlinearity::cubic(0.5), kL, kH), PinningDetected);
}

TEST_CASE("adjoint kernel") {
    WaveProfile w = solve_wave(BistableNonlinearity::cubic(0.3), kL, kH);
    adjoint_solve(w);
    REQUIRE(w.has_psi);
    for (double p : w.psi) CHECK(p >= 0.0);
    CHECK(pairing(w, w.psi, w.dphi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.sigma_ratio > 10.0);
    CHECK(sup_abs(apply_adjoint(w, w.psi)) < 1e-6 * sup_abs(w.psi));

    // <psi, L v> vanishes for compactly supported v (Fredholm consistency).
    SplitMix64 rng(11);
    std::vector<double> v(static_cast<std::size_t>(w.size()), 0.0);
    for (int k = 0; k < w.size(); ++k)
        if (std::abs(w.xi(k)) < 20.0) v[static_cast<std::size_t>(k)] = rng.uniform(-1, 1) * std::exp(-w.xi(k) * w.xi(k) / 50);
    const auto Lv = apply_linearization(w, v);
    CHECK(std::abs(pairing(w, w.psi, Lv)) < 1e-6 * sup_abs(Lv));
}

TEST_CASE("d, r and the solvability pairing") {
    WaveProfile w = solve_wave_full(BistableNonlinearity::cubic(0.3), kL, kH);
    REQUIRE(w.has_d);
    REQUIRE(w.has_r);
    // Fredholm condition for L r = -Phi'' - d Phi'
    std::vector<double> rhs(w.phi.size());
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = -w.d2phi[k] - w.d * w.dphi[k];
    CHECK(std::abs(pairing(w, w.psi, rhs)) < 1e-12);
    CHECK(std::abs(pairing(w, w.psi, w.r)) < 1e-10);
    const auto Lr = apply_linearization(w, w.r);
    double res = 0.0;
    for (std::size_t k = 0; k < rhs.size(); ++k) res = std::max(res, std::abs(Lr[k] - rhs[k]));
    CHECK(res < 1e-7);
    // Frozen from the angular route below.
    CHECK(w.d == doctest::Approx(-0.14657).epsilon(2e-3));
}

TEST_CASE("d identity from the angular dispersion") {
    const auto f = BistableNonlinearity::cubic(0.3);
    const WaveProfile w = solve_wave_full(f, kL, kH);
    const double c0 = w.c;
    for (double e : {0.05, 0.1}) {
        const double cp = c_theta(f, e, kL, kH);
        const double cm = c_theta(f, -e, kL, kH);
        const double second = (cp - 2 * c0 + cm) / (e * e);
        const double first = (cp - cm) / (2 * e);
        CHECK(std::abs(w.d - 0.5 * c0 - 0.5 * second) / std::abs(w.d) < 1e-2);
        CHECK(std::abs(first) < 1e-3);
    }
    CHECK(dispersion(f, 0.0, kL, kH) == doctest::Approx(c0).epsilon(1e-12));
}

TEST_CASE("phi_inverse") {
    const WaveProfile w = solve_wave(BistableNonlinearity::cubic(0.35), kL, kH);
    for (double x : {-7.3, -1.0, 0.0, 0.4, 5.5}) CHECK(phi_inverse(w, w.phi_at(x)) == doctest::Approx(x).epsilon(1e-9));
    CHECK(phi_inverse(w, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(phi_inverse(w, 1.5), OutOfRange);
    CHECK_THROWS_AS(phi_inverse(w, -0.1), OutOfRange);
}

TEST_CASE("shift stencil reproduces cubics") {
    for (double s : {0.0, 0.3, 1.0, -2.75, 16.0, 13.4}) {
        const ShiftStencil st = shift_stencil(s);
        double sum = 0.0, m1 = 0.0, m3 = 0.0;
        for (int k = 0; k < st.count; ++k) {
            sum += st.weights[k];
            m1 += st.weights[k] * st.offsets[k];
            m3 += st.weights[k] * std::pow(st.offsets[k], 3);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(m1 == doctest::Approx(s).epsilon(1e-12));
        CHECK(m3 == doctest::Approx(s * s * s).epsilon(1e-10));
    }
}

}
