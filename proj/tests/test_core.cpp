#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "acfront/config.hpp"
#include "acfront/core.hpp"
#include "acfront/rng.hpp"

using namespace acfront;

TEST_SUITE("core") {

TEST_CASE("cubic nonlinearity values") {
    const auto f = BistableNonlinearity::cubic(0.3);
    CHECK(g_eval(f, 0.0) == 0.0);
    CHECK(g_eval(f, 1.0) == 0.0);
    CHECK(g_eval(f, 0.3) == 0.0);
    // 0.5 * 0.5 * 0.2
    CHECK(g_eval(f, 0.5) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(f.derivative(0.0) == doctest::Approx(-0.3));
    CHECK(f.derivative(1.0) == doctest::Approx(-0.7));
    CHECK_NOTHROW(f.validate());
}

TEST_CASE("cubic mirror symmetry g(1-u; a) = -g(u; 1-a)") {
    for (double a : {0.1, 0.25, 0.3, 0.45}) {
        const auto f = BistableNonlinearity::cubic(a);
        const auto m = BistableNonlinearity::cubic(1.0 - a);
        for (int k = -200; k <= 1200; ++k) {
            const double u = k / 1000.0;
            CHECK(f(1.0 - u) == doctest::Approx(-m(u)).epsilon(1e-12));
        }
    }
}

TEST_CASE("derivatives agree with finite differences") {
    const auto f = BistableNonlinearity::cubic(0.35);
    for (double u : {-0.5, 0.0, 0.2, 0.6, 1.0, 1.7}) {
        const double e = 1e-5;
        CHECK(f.derivative(u) == doctest::Approx((f(u + e) - f(u - e)) / (2 * e)).epsilon(1e-8));
        CHECK(f.second_derivative(u) ==
              doctest::Approx((f.derivative(u + e) - f.derivative(u - e)) / (2 * e)).epsilon(1e-7));
    }
}

TEST_CASE("table nonlinearity reproduces the cubic") {
    const double a = 0.3;
    const auto cubic = BistableNonlinearity::cubic(a);
    std::vector<double> samples;
    const int n = 301;
    for (int k = 0; k < n; ++k) samples.push_back(cubic(-1.0 + 3.0 * k / (n - 1)));
    const auto t = BistableNonlinearity::table(a, -1.0, 2.0, samples);
    // Cubic interpolation of a cubic is exact up to rounding.
    for (double u : {-0.93, 0.0, 0.123, 0.3, 0.77, 1.0, 1.5})
        CHECK(t(u) == doctest::Approx(cubic(u)).epsilon(1e-10));
    CHECK_NOTHROW(t.validate());
}

TEST_CASE("invalid nonlinearities are rejected") {
    CHECK_THROWS_AS(BistableNonlinearity::cubic(0.0), InvalidNonlinearity);
    CHECK_THROWS_AS(BistableNonlinearity::cubic(1.2), InvalidNonlinearity);
    // Monostable sample: g(u) = u(1-u) has the wrong sign on (0, a).
    std::vector<double> s;
    for (int k = 0; k <= 30; ++k) {
        const double u = -1.0 + 0.1 * k;
        s.push_back(u * (1.0 - u));
    }
    CHECK_THROWS_AS(BistableNonlinearity::table(0.3, -1.0, 2.0, s).validate(), InvalidNonlinearity);
}

TEST_CASE("discrete laplacian") {
    LatticeField c(8, 6, -4, BoundaryJ::periodic, 0.7);
    for (int j = 0; j < 6; ++j)
        for (int i = -3; i < 3; ++i) CHECK(discrete_laplacian(c, i, j) == 0.0);

    LatticeField lin(10, 4, 0);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 10; ++i) lin.at(i, j) = i;
    for (int j = 0; j < 4; ++j)
        for (int i = 2; i < 8; ++i) CHECK(discrete_laplacian(lin, i, j) == 0.0);

    LatticeField spike(9, 9, -4);
    spike.at(0, 4) = 1.0;
    CHECK(discrete_laplacian(spike, 0, 4) == -4.0);
    CHECK(discrete_laplacian(spike, 1, 4) == 1.0);
    CHECK(discrete_laplacian(spike, -1, 4) == 1.0);
    CHECK(discrete_laplacian(spike, 0, 5) == 1.0);
    CHECK(discrete_laplacian(spike, 0, 3) == 1.0);
    CHECK_THROWS_AS(discrete_laplacian(spike, 5, 0), IndexError);
    CHECK_THROWS_AS(discrete_laplacian(spike, 0, 9), IndexError);
}

TEST_CASE("constant fields are harmonic under both j-policies") {
    for (auto bc : {BoundaryJ::periodic, BoundaryJ::reflect}) {
        LatticeField u(5, 7, 3, bc, 0.25);
        for (int j = 0; j < 7; ++j)
            for (int i = 4; i < 7; ++i) CHECK(discrete_laplacian(u, i, j) == 0.0);
    }
}

TEST_CASE("ghost reads are the two equilibria") {
    LatticeField u(4, 3, -2, BoundaryJ::periodic, 0.5);
    CHECK(u.value(-3, 0) == 0.0);
    CHECK(u.value(-100, 2) == 0.0);
    CHECK(u.value(2, 1) == 1.0);
    CHECK(u.value(50, 1) == 1.0);
    CHECK(u.value(0, -1) == 0.5);
}

TEST_CASE("wrap_index") {
    CHECK(wrap_index(-1, 5, BoundaryJ::periodic) == 4);
    CHECK(wrap_index(5, 5, BoundaryJ::periodic) == 0);
    CHECK(wrap_index(-1, 5, BoundaryJ::reflect) == 0);
    CHECK(wrap_index(5, 5, BoundaryJ::reflect) == 4);
    CHECK(wrap_index(-2, 5, BoundaryJ::reflect) == 1);
    CHECK(wrap_index(3, 5, BoundaryJ::reflect) == 3);
}

TEST_CASE("sequence derivatives") {
    const PhaseSequence c({3.0, 3.0, 3.0, 3.0});
    CHECK(d_plus(c, 1) == 0.0);
    CHECK(d_minus(c, 1) == 0.0);
    CHECK(d2(c, 1) == 0.0);

    const PhaseSequence lin({0.0, 2.0, 4.0, 6.0, 8.0}, BoundaryJ::reflect);
    CHECK(d_plus(lin, 2) == 2.0);
    CHECK(d_minus(lin, 2) == 2.0);
    CHECK(d2(lin, 2) == 0.0);

    const PhaseSequence bump({0.0, 1.0, 0.0}, BoundaryJ::reflect);
    CHECK(d_plus(bump, 1) == -1.0);
    CHECK(d_minus(bump, 1) == 1.0);
    CHECK(d2(bump, 1) == -2.0);
    CHECK(beta(bump, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(alpha(bump, 1) == doctest::Approx(1.0));
}

TEST_CASE("beta and alpha") {
    const PhaseSequence c({1.0, 1.0, 1.0});
    CHECK(beta(c, 1) == 1.0);
    CHECK(alpha(c, 1) == 0.0);
    const double t = 0.37;
    std::vector<double> v;
    for (int j = 0; j < 9; ++j) v.push_back(t * j);
    const PhaseSequence s(v, BoundaryJ::reflect);
    CHECK(beta(s, 4) == doctest::Approx(std::sqrt(1 + t * t)).epsilon(1e-15));

    SplitMix64 rng(7);
    std::vector<double> r(50);
    for (auto& x : r) x = rng.uniform(-3, 3);
    const PhaseSequence rs(r);
    for (int j = 0; j < 50; ++j) {
        CHECK(beta(rs, j) >= 1.0);
        CHECK(alpha(rs, j) >= 0.0);
        CHECK(beta(rs, j) * beta(rs, j) - 1.0 == doctest::Approx(alpha(rs, j)).epsilon(1e-12));
    }
}

TEST_CASE("deviation seminorm") {
    CHECK(deviation_seminorm(PhaseSequence({2.0, 2.0})) == 0.0);
    CHECK(deviation_seminorm(PhaseSequence({5.0, 6.0, 7.0})) == 2.0);
    SplitMix64 rng(3);
    std::vector<double> v(40), w(40);
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = rng.uniform(-1, 1);
        w[k] = v[k] + 0.5;  // dyadic shift keeps the differences exact
    }
    CHECK(deviation_seminorm(PhaseSequence(v)) == deviation_seminorm(PhaseSequence(w)));
}

TEST_CASE("splitmix64 reference vectors") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xe220a8397b1dcdafULL);
    CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(rng.next() == 0x06c45d188009454fULL);
    SplitMix64 u(42);
    for (int k = 0; k < 1000; ++k) {
        const double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("config parsing") {
    const Config c = Config::parse("# comment\n a = 0.3 \n\nname=thm22 # trailing\nflag = yes\n", "t");
    CHECK(c.get_double("a", 0) == 0.3);
    CHECK(c.get_string("name", "") == "thm22");
    CHECK(c.get_bool("flag", false));
    CHECK(c.get_int("missing", 7) == 7);
    CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), UsageError);
    CHECK_THROWS_AS(Config::parse("novalue\n"), UsageError);
    CHECK_THROWS_AS(Config::parse("a = x\n").get_double("a", 0), UsageError);
    CHECK_THROWS_AS(c.require_known({"a"}), UsageError);
    try {
        Config::parse("a = 1\n\nbroken\n", "cfg");
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("cfg:3") != std::string::npos);
    }
}

TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

}
