#include <doctest.h>

#include <cmath>
#include <vector>

#include "acfront/phase.hpp"
#include "acfront/wave.hpp"

using namespace acfront;

namespace {

const WaveProfile& wave03() {
    static const WaveProfile w = solve_wave(BistableNonlinearity::cubic(0.3), 40.0, 1.0 / 16.0);
    return w;
}

LatticeField shifted(const WaveProfile& w, const std::vector<double>& shifts, int width = 80, int i_offset = -40) {
    LatticeField u(width, static_cast<int>(shifts.size()), i_offset);
    for (int j = 0; j < u.height(); ++j)
        for (int ix = 0; ix < width; ++ix) u.cell(ix, j) = w.phi_at(u.i_begin() + ix - shifts[j]);
    return u;
}

}  // namespace

TEST_SUITE("phase") {

TEST_CASE("phases of shifted profiles") {
    const WaveProfile& w = wave03();
    const std::vector<double> s = {0.0, 0.25, -1.7, 3.5, 10.01};
    const PhaseExtract g = extract(shifted(w, s), w);
    CHECK(g.all_defined());
    for (int j = 0; j < 5; ++j) CHECK(g.gamma[j] == doctest::Approx(s[j]).epsilon(1e-9));
    CHECK(phase_spread(g) == doctest::Approx(11.71).epsilon(1e-9));
    CHECK(front_error(shifted(w, s), w, g) < 1e-9);
}

TEST_CASE("crossing at a half-integer level") {
    const WaveProfile& w = wave03();
    // u_{i*} = 1/2 exactly gives gamma = i*.
    LatticeField u = shifted(w, {3.0});
    const PhaseExtract g = extract(u, w);
    CHECK(g.i_star[0] == 3);
    CHECK(g.gamma[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("rows without a unique crossing stay undefined") {
    const WaveProfile& w = wave03();
    LatticeField u = shifted(w, {0.0, 0.0, 0.0});
    for (int ix = 0; ix < u.width(); ++ix) u.cell(ix, 1) = 0.2;  // only the ghost side crosses
    for (int ix = 30; ix < 35; ++ix) u.cell(ix, 2) = 0.9;        // a second crossing
    const PhaseExtract g = extract(u, w);
    CHECK(g.defined[0] == 1);
    CHECK(g.defined[1] == 1);  // the right ghost supplies the crossing
    CHECK(g.i_star[1] == u.i_end() - 1);
    CHECK(g.defined[2] == 0);
    CHECK_THROWS_AS(front_error(u, w, g), UndefinedRows);

    LatticeField none(10, 2, -5, BoundaryJ::periodic, 0.8);
    const PhaseExtract n = extract(none, w);
    CHECK(n.defined_count() == 0);
    CHECK_THROWS_AS(flatness(n), NoDefinedRows);
    CHECK_THROWS_AS(phase_spread(n), NoDefinedRows);
}

TEST_CASE("flatness honours the j-boundary") {
    const WaveProfile& w = wave03();
    const std::vector<double> s = {0.0, 0.1, 0.2, 0.3};
    LatticeField per = shifted(w, s);
    CHECK(flatness(extract(per, w)) == doctest::Approx(0.3).epsilon(1e-8));
    LatticeField ref(per.width(), per.height(), per.i_offset(), BoundaryJ::reflect);
    for (std::size_t k = 0; k < ref.values().size(); ++k) ref.values()[k] = per.values()[k];
    CHECK(flatness(extract(ref, w)) == doctest::Approx(0.1).epsilon(1e-8));
}

TEST_CASE("interfacial monotonicity") {
    const WaveProfile& w = wave03();
    LatticeField u = shifted(w, {0.0, 1.3, -0.4});
    const MonotonicityReport ok = interfacial_monotonicity(u, w);
    CHECK(ok.ok());
    CHECK(ok.region_size > 0);
    u.at(0, 0) = 0.999;  // a bump inside the interface region
    const MonotonicityReport bad = interfacial_monotonicity(u, w);
    CHECK_FALSE(bad.ok());
}

TEST_CASE("planar error") {
    const WaveProfile& w = wave03();
    const LatticeField u = shifted(w, {2.0, 2.0});
    CHECK(planar_error(u, w, 2.0) < 1e-12);
    CHECK(planar_error(u, w, 2.5) > 0.01);
}

}
