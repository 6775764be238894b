#include "acfront/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acfront {

int PhaseExtract::defined_count() const {
    return static_cast<int>(std::count(defined.begin(), defined.end(), 1));
}

bool PhaseExtract::all_defined() const { return !defined.empty() && defined_count() == static_cast<int>(defined.size()); }

PhaseExtract extract(const LatticeField& u, const WaveProfile& w) {
    const int h = u.height();
    std::vector<double> gamma(static_cast<std::size_t>(h), 0.0);
    PhaseExtract out;
    out.i_star.assign(static_cast<std::size_t>(h), 0);
    out.defined.assign(static_cast<std::size_t>(h), 0);
    out.clamped.assign(static_cast<std::size_t>(h), 0);
    for (int j = 0; j < h; ++j) {
        int found = 0;
        int i_star = 0;
        for (int i = u.i_begin() - 1; i < u.i_end(); ++i) {
            const double here = u.value(i, j);
            if (here > 0.0 && here <= 0.5 && u.value(i + 1, j) > 0.5) {
                ++found;
                i_star = i;
            }
        }
        if (found != 1) continue;
        const double v = u.value(i_star, j);
        double xi;
        try {
            xi = phi_inverse(w, v);
        } catch (const OutOfRange&) {
            xi = -w.L;
            out.clamped[static_cast<std::size_t>(j)] = 1;
        }
        gamma[static_cast<std::size_t>(j)] = i_star - xi;
        out.i_star[static_cast<std::size_t>(j)] = i_star;
        out.defined[static_cast<std::size_t>(j)] = 1;
    }
    out.gamma = PhaseSequence(std::move(gamma), u.boundary_j());
    return out;
}

MonotonicityReport interfacial_monotonicity(const LatticeField& u, const WaveProfile& w) {
    const double lo = w.phi_at(-2.0);
    const double hi = w.phi_at(2.0);
    MonotonicityReport rep;
    rep.min_difference = std::numeric_limits<double>::infinity();
    for (int j = 0; j < u.height(); ++j)
        for (int i = u.i_begin(); i < u.i_end(); ++i) {
            const double v = u.value(i, j);
            if (v >= lo && v <= hi) {
                ++rep.region_size;
                rep.min_difference = std::min(rep.min_difference, u.value(i + 1, j) - v);
            }
            if (v <= lo && u.value(i - 1, j) > lo) ++rep.violations_left;
            if (v >= hi && u.value(i + 1, j) < hi) ++rep.violations_right;
        }
    if (rep.region_size == 0) rep.min_difference = 0.0;
    return rep;
}

double flatness(const PhaseExtract& g) {
    const int n = g.gamma.size();
    if (g.defined_count() < 2) throw NoDefinedRows("flatness needs at least two defined rows");
    const bool periodic = g.gamma.boundary_j() == BoundaryJ::periodic;
    double sup = 0.0;
    bool any = false;
    for (int j = 0; j < n; ++j) {
        if (j + 1 == n && !periodic) break;
        const int k = (j + 1) % n;
        if (!g.defined[static_cast<std::size_t>(j)] || !g.defined[static_cast<std::size_t>(k)]) continue;
        sup = std::max(sup, std::abs(g.gamma[k] - g.gamma[j]));
        any = true;
    }
    if (!any) throw NoDefinedRows("no adjacent pair of defined rows");
    return sup;
}

double phase_spread(const PhaseExtract& g) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int j = 0; j < g.gamma.size(); ++j) {
        if (!g.defined[static_cast<std::size_t>(j)]) continue;
        lo = std::min(lo, g.gamma[j]);
        hi = std::max(hi, g.gamma[j]);
    }
    if (hi < lo) throw NoDefinedRows("no defined rows");
    return hi - lo;
}

double front_error(const LatticeField& u, const WaveProfile& w, const PhaseExtract& g) {
    if (!g.all_defined()) throw UndefinedRows("front error needs every row to define a phase");
    double sup = 0.0;
    for (int j = 0; j < u.height(); ++j) {
        const double gj = g.gamma[j];
        for (int i = u.i_begin(); i < u.i_end(); ++i)
            sup = std::max(sup, std::abs(u.value(i, j) - w.phi_at(i - gj)));
    }
    return sup;
}

double planar_error(const LatticeField& u, const WaveProfile& w, double shift) {
    double sup = 0.0;
    for (int j = 0; j < u.height(); ++j)
        for (int i = u.i_begin(); i < u.i_end(); ++i)
            sup = std::max(sup, std::abs(u.value(i, j) - w.phi_at(i - shift)));
    return sup;
}

}  // namespace acfront
