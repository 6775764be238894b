#include <doctest.h>

#include <cmath>
#include <sstream>

#include "acfront/harness.hpp"
#include "acfront/phase.hpp"

using namespace acfront;

namespace {

const WaveProfile& wave03() {
    static const WaveProfile w = solve_wave_full(BistableNonlinearity::cubic(0.3), 40.0, 1.0 / 16.0);
    return w;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("make_initial with zero data is the planar profile") {
    ExperimentSpec s = ExperimentSpec::defaults("thm22");
    s.kappa.kind = KappaSpec::Kind::zero;
    const WaveProfile& w = wave03();
    const LatticeField u = make_initial(s, w);
    CHECK(planar_error(u, w, 0.0) == 0.0);
    CHECK(u.i_offset() == s.offset_for(w.c));
}

TEST_CASE("make_initial keeps the edge condition for front-like data") {
    const WaveProfile& w = wave03();
    ExperimentSpec s = ExperimentSpec::defaults("thm24");
    s.kappa.amplitude = 2.0;
    const LatticeField u = make_initial(s, w);
    const PhaseExtract g = extract(u, w);
    CHECK(g.all_defined());
    CHECK(phase_spread(g) > 3.9);

    s.v0.kind = PerturbationSpec::Kind::gaussian;
    s.v0.amplitude = 10.0;
    CHECK_NOTHROW(make_initial(s, w));
    s.v0.kind = PerturbationSpec::Kind::random_l1;
    CHECK_NOTHROW(make_initial(s, w));
}

TEST_CASE("edge condition violations") {
    const WaveProfile& w = wave03();
    ExperimentSpec s = ExperimentSpec::defaults("thm22");
    s.kappa.kind = KappaSpec::Kind::constant;
    s.kappa.value = 500.0;  // front pushed past the right edge
    try {
        make_initial(s, w);
        FAIL("expected H0Violated");
    } catch (const H0Violated& e) {
        CHECK(e.value() < 0.3);
    }
    LatticeField u(20, 2, -10, BoundaryJ::periodic, 0.5);
    CHECK_THROWS_AS(check_h0(u, 0.3), H0Violated);
}

TEST_CASE("spec validation and config round trip") {
    CHECK_THROWS_AS(ExperimentSpec::defaults("thm99"), UsageError);
    const Config cfg = Config::parse("name = thm24\nkappa_P = 4\nheight = 32\nv0 = gaussian\nv0_amplitude = 0.3\n");
    const ExperimentSpec s = ExperimentSpec::from_config(cfg);
    CHECK(s.name == "thm24");
    CHECK(s.kappa.P == 4);
    CHECK(s.height == 32);
    CHECK(s.v0.kind == PerturbationSpec::Kind::gaussian);
    const ExperimentSpec r = ExperimentSpec::from_config(s.to_config());
    CHECK(r.hash() == s.hash());
    CHECK_THROWS_AS(ExperimentSpec::from_config(Config::parse("bogus = 1\n")), UsageError);
    CHECK_THROWS_AS(ExperimentSpec::from_config(Config::parse("kappa_P = 5\n")), UsageError);
    CHECK_THROWS_AS(ExperimentSpec::from_config(Config::parse("a = 1.5\n")), UsageError);
}

TEST_CASE("Cole-Hopf average") {
    const PhaseSequence flat(std::vector<double>(8, 2.0));
    CHECK(mu_prediction(flat, -0.3, -0.15, 10.0) == doctest::Approx(5.0).epsilon(1e-14));
    const PhaseSequence two({0.0, 1.0});
    const double d = -0.5;
    CHECK(mu_prediction(two, 0.0, d, 0.0) == doctest::Approx(std::log(0.5 * (1 + std::exp(d))) / d).epsilon(1e-14));
    CHECK(mu_prediction(two, 0.0, 0.0, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("planar data stays close to the wave") {
    ExperimentSpec s = ExperimentSpec::defaults("thm22");
    s.kappa.kind = KappaSpec::Kind::zero;
    s.t_end = 30.0;
    const ExperimentReport r = run_thm22(s);
    CHECK(r.passed());
    const auto& fe = r.series.at("front_error");
    for (std::size_t k = 0; k < fe.size(); ++k)
        if (r.times[k] >= 5.0) CHECK(fe[k] < 1e-3);
    CHECK(fe.front() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("constant shift gives the shift back as the asymptotic phase") {
    ExperimentSpec s = ExperimentSpec::defaults("thm24");
    s.kappa.kind = KappaSpec::Kind::constant;
    s.kappa.value = 1.25;
    s.t_end = 30.0;
    s.tau = 10.0;
    s.height = 8;
    const ExperimentReport r = run_thm24(s);
    // the lattice speed differs from c by about 1e-4 at the default dt,
    // which accumulates to roughly 3e-3 in gamma - c t by t = 30
    CHECK(r.scalar("mu_hat") == doctest::Approx(1.25).epsilon(5e-3 / 1.25));
    CHECK(r.passed());
}

TEST_CASE("constant data is tracked by the curvature flow") {
    ExperimentSpec s = ExperimentSpec::defaults("thm23");
    s.kappa.kind = KappaSpec::Kind::constant;
    s.kappa.value = 0.5;
    s.height = 8;
    s.t_end = 60.0;
    s.tau = 20.0;
    const ExperimentReport r = run_thm23(s);
    CHECK(r.scalar("tracking_sup") < 0.02);
    CHECK(r.passed());
}

TEST_CASE("hand-off that is too early is refused") {
    ExperimentSpec s = ExperimentSpec::defaults("thm23");
    s.tau = 0.0;
    s.t_end = 5.0;
    CHECK_THROWS_AS(run_thm23(s), FlatnessViolated);
}

TEST_CASE("later hand-offs do not track worse") {
    double last = 1e9;
    for (double tau : {40.0, 80.0, 160.0}) {
        ExperimentSpec s = ExperimentSpec::defaults("thm23");
        s.tau = tau;
        s.t_end = 200.0;
        const double sup = run_thm23(s).scalar("tracking_sup");
        CHECK(sup <= last + 1e-3);
        last = sup;
    }
}

TEST_CASE("reports are reproducible and independent of the thread count") {
    ExperimentSpec s = ExperimentSpec::defaults("thm22");
    s.t_end = 10.0;
    s.height = 32;
    std::ostringstream a, b;
    run_thm22(s).write_ndjson(a);
    s.threads = 3;
    run_thm22(s).write_ndjson(b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("\"config_hash\":\"" + s.hash() + "\"") != std::string::npos);
}

TEST_CASE("verdict bookkeeping") {
    ExperimentReport r;
    r.check("x", 0.5, "<", 1.0);
    r.check("y", 0.0, "==", 0.0);
    CHECK(r.passed());
    r.check("z", 2.0, "<", 1.0);
    CHECK_FALSE(r.passed());
    CHECK(r.verdict("z")->tolerance == 1.0);
    CHECK_THROWS_AS(r.check("w", 1.0, "~", 1.0), UsageError);
    std::ostringstream s;
    r.series["nan"] = {1.0, NAN};
    r.times = {0.0, 1.0};
    r.write_ndjson(s);
    CHECK(s.str().find("[1.0,null]") != std::string::npos);
}

}
