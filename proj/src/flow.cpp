#include "acfront/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acfront/rng.hpp"

namespace acfront {

namespace {

/// Kernel folded onto the period of the boundary extension (n for periodic,
/// 2n for reflect); entry m collects every offset k = m mod period.
std::vector<double> folded_kernel(const HeatKernelTable& kernel, int period) {
    std::vector<double> folded(static_cast<std::size_t>(period), 0.0);
    for (int k = -kernel.k_max; k <= kernel.k_max; ++k) {
        int m = k % period;
        if (m < 0) m += period;
        folded[static_cast<std::size_t>(m)] += kernel(k);
    }
    return folded;
}

/// Splits [t0, t1] into the fewest equal steps not exceeding dt.
struct Substeps {
    long count;
    double h;
};
Substeps substeps(double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw UsageError("time step must be positive");
    const double span = t1 - t0;
    if (span <= 0.0) return {0, 0.0};
    const long n = static_cast<long>(std::ceil(span / dt - 1e-9));
    return {n, span / n};
}

void check_times(const std::vector<double>& times) {
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0)) throw UsageError("output times must be non-negative");
        if (k > 0 && times[k] < times[k - 1]) throw UsageError("output times must be sorted");
    }
}

}  // namespace

PhaseSequence heat_solve(const PhaseSequence& h0, double t) { return heat_solve(h0, heat_kernel(t)); }

PhaseSequence heat_solve(const PhaseSequence& h0, const HeatKernelTable& kernel) {
    const int n = h0.size();
    const int period = h0.boundary_j() == BoundaryJ::periodic ? n : 2 * n;
    const auto folded = folded_kernel(kernel, period);
    // Renormalize to unit mass so constants are reproduced exactly.
    double mass = 0.0;
    for (double g : folded) mass += g;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < period; ++m) s += folded[static_cast<std::size_t>(m)] * h0[j - m];
        out[static_cast<std::size_t>(j)] = s / mass;
    }
    return PhaseSequence(std::move(out), h0.boundary_j());
}

PhaseSequence random_block_sequence(int n, int block, double amplitude, std::uint64_t seed,
                                    BoundaryJ boundary_j) {
    if (n < 1 || block < 1) throw UsageError("block sequence needs n >= 1 and block >= 1");
    SplitMix64 rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    double cur = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j % block == 0) cur = rng.uniform(-amplitude, amplitude);
        v[static_cast<std::size_t>(j)] = cur;
    }
    return PhaseSequence(std::move(v), boundary_j);
}

std::vector<double> log_time_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw UsageError("log grid needs 0 < lo < hi and count >= 2");
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) t[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, k / (count - 1.0));
    t.back() = hi;
    return t;
}

PhaseSequence heat_euler(const PhaseSequence& h0, double t, double dt) {
    const Substeps sub = substeps(0.0, t, dt);
    PhaseSequence h = h0;
    std::vector<double> next(static_cast<std::size_t>(h.size()));
    for (long s = 0; s < sub.count; ++s) {
        for (int j = 0; j < h.size(); ++j) next[static_cast<std::size_t>(j)] = h[j] + sub.h * d2(h, j);
        h.storage() = next;
    }
    return h;
}

LogLogFit loglog_fit(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2) throw UsageError("log-log fit needs two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!(t[k] > 0.0) || !(y[k] > 0.0)) throw NumericalError("log-log fit needs positive data");
        const double x = std::log(t[k]);
        const double v = std::log(y[k]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    LogLogFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

DecayReport decay_report(const PhaseSequence& h0, const std::vector<double>& t_grid, double fit_lo,
                         double fit_hi) {
    check_times(t_grid);
    DecayReport rep;
    rep.grad0 = sup_d_plus(h0);
    rep.lap0 = sup_d2(h0);
    rep.sup0 = sup_norm(h0.values());
    rep.monotone_grad = true;
    rep.monotone_lap = true;
    std::vector<double> ft, fg, fl;
    for (double t : t_grid) {
        const PhaseSequence h = heat_solve(h0, t);
        const double g = sup_d_plus(h);
        const double l = sup_d2(h);
        rep.t.push_back(t);
        rep.grad.push_back(g);
        rep.lap.push_back(l);
        if (g > rep.grad0) rep.monotone_grad = false;
        if (l > rep.lap0) rep.monotone_lap = false;
        if (t > 0.0 && rep.sup0 > 0.0) {
            rep.K_grad = std::max(rep.K_grad, g * std::sqrt(t) / rep.sup0);
            rep.K_lap = std::max(rep.K_lap, l * t / rep.sup0);
        }
        if (t >= fit_lo && t <= fit_hi) {
            ft.push_back(t);
            fg.push_back(g);
            fl.push_back(l);
        }
    }
    if (ft.size() >= 2) {
        rep.slope_grad = loglog_fit(ft, fg).slope;
        rep.slope_lap = loglog_fit(ft, fl).slope;
    }
    return rep;
}

BesselBoundsReport bessel_bounds_report(const std::vector<double>& t_grid, int k_max) {
    BesselBoundsReport rep;
    rep.decreasing_in_k = true;
    rep.single_sign_change = true;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw UsageError("bessel bounds need t > 0");
        const int k_check = k_max >= 0 ? k_max : static_cast<int>(std::floor(4.0 * t));
        const int K = std::max(k_check + 2, static_cast<int>(t + 40.0 * std::sqrt(t + 1.0) + 40.0));
        const auto I = bessel_I_scaled_table(K, t);
        auto at = [&](int k) { return I[static_cast<std::size_t>(std::abs(k))]; };
        double grad = 0.0;
        double lap = 0.0;
        for (int k = -K; k < K; ++k) grad += std::abs(at(k + 1) - at(k));
        for (int k = -K + 1; k < K; ++k) lap += std::abs(at(k + 1) - 2.0 * at(k) + at(k - 1));
        rep.t.push_back(t);
        rep.grad_sum.push_back(std::sqrt(t) * grad);
        rep.lap_sum.push_back(t * lap);
        rep.telescoping.push_back(std::abs(grad - 2.0 * at(0)));

        int changes = 0;
        int last_sign = 0;
        for (int k = 0; k <= k_check; ++k) {
            const double s = at(k + 1) - 2.0 * at(k) + at(k - 1);
            const int sign = (s > 0.0) - (s < 0.0);
            if (sign != 0 && last_sign != 0 && sign != last_sign) ++changes;
            if (sign != 0) last_sign = sign;
            if (at(k) > 0.0 && !(at(k) > at(k + 1))) rep.decreasing_in_k = false;
        }
        rep.sign_changes.push_back(changes);
        if (changes != 1) rep.single_sign_change = false;
    }
    return rep;
}

FlowParams FlowParams::from_wave(double c, double d) {
    FlowParams p;
    p.c = c;
    p.d = d;
    p.variant = std::abs(d) < 1e-8 ? Variant::linear_heat : Variant::exp_lde;
    return p;
}

double FlowParams::step() const {
    return dt > 0.0 ? dt : 0.1 * std::min(1.0, 1.0 / (2.0 + 2.0 * std::abs(d)));
}

std::vector<double> v_rhs(const PhaseSequence& V, const FlowParams& p) {
    std::vector<double> out(static_cast<std::size_t>(V.size()));
    for (int j = 0; j < V.size(); ++j) {
        if (p.variant == FlowParams::Variant::linear_heat) {
            out[static_cast<std::size_t>(j)] = d2(V, j) + p.c;
        } else {
            out[static_cast<std::size_t>(j)] =
                (std::expm1(p.d * d_plus(V, j)) + std::expm1(-p.d * d_minus(V, j))) / p.d + p.c;
        }
    }
    return out;
}

PhaseSequence VTrajectory::at(std::size_t k) const {
    std::vector<double> v(shape.at(k).size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = anchor + shape[k][j];
    return PhaseSequence(std::move(v), boundary_j);
}

VTrajectory v_solve(const PhaseSequence& V0, const FlowParams& p, const std::vector<double>& times) {
    check_times(times);
    VTrajectory traj;
    traj.times = times;
    traj.boundary_j = V0.boundary_j();
    traj.anchor = V0[0];
    std::vector<double> base(static_cast<std::size_t>(V0.size()));
    for (int j = 0; j < V0.size(); ++j) base[static_cast<std::size_t>(j)] = V0[j] - traj.anchor;
    const bool linear = p.variant == FlowParams::Variant::linear_heat;
    if (!linear && std::abs(p.d) * deviation_seminorm(V0) > 500.0)
        throw OverflowGuard("d times the deviation of V0 exceeds 500");
    std::vector<double> h0(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) h0[j] = linear ? base[j] : std::exp(p.d * base[j]);
    const PhaseSequence H0(h0, V0.boundary_j());
    for (double t : times) {
        const PhaseSequence h = heat_solve(H0, t);
        std::vector<double> s(base.size());
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double hj = h[static_cast<int>(j)];
            if (!linear && !(hj > 0.0)) throw NonFinite("Cole-Hopf variable lost positivity");
            s[j] = p.c * t + (linear ? hj : std::log(hj) / p.d);
        }
        traj.shape.push_back(std::move(s));
    }
    return traj;
}

VTrajectory v_solve_direct(const PhaseSequence& V0, const FlowParams& p,
                           const std::vector<double>& times, double dt) {
    check_times(times);
    VTrajectory traj;
    traj.times = times;
    traj.boundary_j = V0.boundary_j();
    traj.anchor = V0[0];
    std::vector<double> s(static_cast<std::size_t>(V0.size()));
    for (int j = 0; j < V0.size(); ++j) s[static_cast<std::size_t>(j)] = V0[j] - traj.anchor;
    PhaseSequence cur(s, V0.boundary_j());
    double now = 0.0;
    for (double t : times) {
        const Substeps sub = substeps(now, t, dt);
        for (long k = 0; k < sub.count; ++k) {
            const auto rhs = v_rhs(cur, p);
            for (int j = 0; j < cur.size(); ++j) cur.raw(j) += sub.h * rhs[static_cast<std::size_t>(j)];
        }
        now = t;
        if (!cur.all_finite()) throw NonFinite("direct V integration produced non-finite values");
        traj.shape.emplace_back(cur.values().begin(), cur.values().end());
    }
    return traj;
}

GradientReport v_gradient_report(const VTrajectory& traj, double fit_lo, double fit_hi) {
    GradientReport rep;
    if (traj.times.empty()) return rep;
    const PhaseSequence first = traj.at(0);
    const double grad0 = sup_d_plus(first);
    const double dev0 = deviation_seminorm(first);
    rep.monotone_envelope = true;
    std::vector<double> ft, fg, fl;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const PhaseSequence v = traj.at(k);
        const double t = traj.times[k];
        const double g = sup_d_plus(v);
        const double l = sup_d2(v);
        rep.t.push_back(t);
        rep.grad.push_back(g);
        rep.lap.push_back(l);
        if (g > grad0) rep.monotone_envelope = false;
        if (t > 0.0) {
            const double bound = std::exp(rep.kappa * dev0) * std::min(grad0, 1.0 / std::sqrt(t));
            if (bound > 0.0) rep.M_fit = std::max(rep.M_fit, g / bound);
        }
        if (t >= fit_lo && t <= fit_hi && g > 0.0 && l > 0.0) {
            ft.push_back(t);
            fg.push_back(g);
            fl.push_back(l);
        }
    }
    if (ft.size() >= 2) {
        rep.slope_grad = loglog_fit(ft, fg).slope;
        rep.slope_lap = loglog_fit(ft, fl).slope;
    }
    return rep;
}

std::vector<double> mcf_rhs(const PhaseSequence& G, const FlowParams& p) {
    std::vector<double> out(static_cast<std::size_t>(G.size()));
    for (int j = 0; j < G.size(); ++j) {
        const double b2 = 1.0 + alpha(G, j);
        const double b = std::sqrt(b2);
        out[static_cast<std::size_t>(j)] = d2(G, j) / b2 + 2.0 * p.d * b + p.c - 2.0 * p.d;
    }
    return out;
}

std::vector<double> mcf_rhs_angular(const PhaseSequence& G, double c, double c2) {
    std::vector<double> out(static_cast<std::size_t>(G.size()));
    for (int j = 0; j < G.size(); ++j) {
        const double b2 = 1.0 + alpha(G, j);
        const double b = std::sqrt(b2);
        out[static_cast<std::size_t>(j)] = d2(G, j) / b2 + b * (c + c2) - c2;
    }
    return out;
}

namespace {

template <class Rhs, class Check>
PhaseTrajectory euler_trajectory(const PhaseSequence& x0, double dt, const std::vector<double>& times,
                                 Rhs rhs, Check check) {
    check_times(times);
    PhaseTrajectory traj;
    PhaseSequence cur = x0;
    check(cur, 0.0);
    double now = 0.0;
    for (double t : times) {
        const Substeps sub = substeps(now, t, dt);
        for (long k = 0; k < sub.count; ++k) {
            const auto r = rhs(cur);
            for (int j = 0; j < cur.size(); ++j) cur.raw(j) += sub.h * r[static_cast<std::size_t>(j)];
            check(cur, now + (k + 1) * sub.h);
        }
        now = t;
        traj.times.push_back(t);
        traj.values.push_back(cur);
    }
    return traj;
}

}  // namespace

PhaseTrajectory mcf_solve(const PhaseSequence& G0, const FlowParams& p, const std::vector<double>& times) {
    auto check = [&](const PhaseSequence& g, double t) {
        if (!g.all_finite()) throw NonFinite("mean-curvature flow produced non-finite values");
        const double s = sup_d_plus(g);
        if (s > p.delta)
            throw FlatnessViolated("||d+ Gamma|| = " + std::to_string(s) + " exceeds delta = " +
                                   std::to_string(p.delta) + " at t = " + std::to_string(t));
    };
    return euler_trajectory(G0, p.step(), times, [&](const PhaseSequence& g) { return mcf_rhs(g, p); },
                            check);
}

std::vector<double> gradient_rhs(const PhaseSequence& U, const FlowParams& p) {
    const int n = U.size();
    std::vector<double> pi(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        pi[static_cast<std::size_t>(j)] = std::sqrt(1.0 + 0.5 * (U[j + 1] * U[j + 1] + U[j] * U[j]));
    auto P = [&](int j) { return pi[static_cast<std::size_t>(wrap_index(j, n, BoundaryJ::periodic))]; };
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double pj = P(j);
        const double pm = P(j - 1);
        out[static_cast<std::size_t>(j)] =
            d_plus(U, j) / (pj * pj) - d_minus(U, j) / (pm * pm) + 2.0 * p.d * (pj - pm);
    }
    return out;
}

PhaseTrajectory gradient_lde_solve(const PhaseSequence& U0, const FlowParams& p,
                                   const std::vector<double>& times) {
    if (U0.boundary_j() != BoundaryJ::periodic)
        throw UsageError("the gradient equation is implemented for periodic sequences only");
    auto check = [&](const PhaseSequence& u, double t) {
        if (!u.all_finite()) throw NonFinite("gradient equation produced non-finite values");
        const double s = sup_norm(u.values());
        if (s > p.delta)
            throw FlatnessViolated("||Upsilon|| = " + std::to_string(s) + " exceeds delta = " +
                                   std::to_string(p.delta) + " at t = " + std::to_string(t));
    };
    return euler_trajectory(U0, p.step(), times,
                            [&](const PhaseSequence& u) { return gradient_rhs(u, p); }, check);
}

}  // namespace acfront
