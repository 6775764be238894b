#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "acfront/sim.hpp"

namespace acfront {

void PlanarSpec::validate(double a) const {
    if (!(q0 > 0.0 && q0 < a)) throw UsageError("q0 must lie in (0, a)");
    if (!(q1 > 0.0 && q1 < 1.0 - a)) throw UsageError("q1 must lie in (0, 1 - a)");
    if (!(mu > 0.0)) throw UsageError("mu must be positive");
    if (!(C >= 1.0)) throw UsageError("C must be at least 1");
}

// p = 3K/(2m) satisfies K <= m p <= 2K and m|p'| <= 2|K'|; q = C int_0^t p.

double CurvedSpec::K(double t) const {
    if (zero_offsets || delta <= 0.0) return 0.0;
    if (t <= 0.0) return M * delta;
    return M * std::min(delta, std::pow(t, -1.5));
}

double CurvedSpec::p(double t) const { return zero_offsets ? 0.0 : 1.5 * K(t) / m; }

double CurvedSpec::p_dot(double t) const {
    if (zero_offsets || delta <= 0.0) return 0.0;
    const double knee = std::pow(delta, -2.0 / 3.0);
    if (t <= knee) return 0.0;
    return -1.5 * 1.5 * M * std::pow(t, -2.5) / m;
}

double CurvedSpec::q(double t) const {
    if (zero_offsets || delta <= 0.0 || t <= 0.0) return 0.0;
    const double knee = std::pow(delta, -2.0 / 3.0);
    const double integral = t <= knee ? M * delta * t
                                      : M * delta * knee + 2.0 * M * (1.0 / std::sqrt(knee) - 1.0 / std::sqrt(t));
    return C * 1.5 * integral / m;
}

double CurvedSpec::q_dot(double t) const { return C * p(t); }

double CurvedSpec::initial_margin(const WaveProfile& w) const {
    return p(0.0) - sup_norm(w.r) * delta * delta;
}

CurvedSpec make_curved_spec(const WaveProfile& w, const PhaseSequence& V0, double eps) {
    if (!w.has_r) throw UsageError("curved construction needs the corrector r");
    if (!(eps > 0.0 && eps < 0.25)) throw UsageError("eps must lie in (0, 0.25)");
    CurvedSpec s;
    s.eps = eps;
    s.delta = sup_d_plus(V0);
    double worst = std::numeric_limits<double>::infinity();
    constexpr int samples = 2001;
    for (int k = 0; k < samples; ++k) {
        const double x = static_cast<double>(k) / (samples - 1);
        worst = std::min(worst, -w.f.derivative(-eps + 4.0 * eps * x));
        worst = std::min(worst, -w.f.derivative(1.0 - 2.0 * eps + 4.0 * eps * x));
    }
    if (!(worst > 0.0))
        throw UsageError("eps too large: g' is not negative near the stable equilibria");
    s.m = std::min(1.0, 0.5 * worst);
    s.M = std::max({1.0, sup_norm(w.r), sup_norm(w.dr), w.f.sup_abs_derivative(-1.0, 2.0),
                    w.f.sup_abs_second_derivative(-1.0, 2.0)});
    double min_slope = std::numeric_limits<double>::infinity();
    for (int k = 0; k < w.size(); ++k)
        if (w.phi[k] >= eps && w.phi[k] <= 1.0 - eps) min_slope = std::min(min_slope, w.dphi[k]);
    s.C = std::max(1.0, (2.0 * s.m + s.M) / min_slope);
    return s;
}

namespace {

struct Tracker {
    double tol;
    SuperSubReport rep;
    double worst_violation = -std::numeric_limits<double>::infinity();

    explicit Tracker(double tolerance) : tol(tolerance) {
        rep.tolerance = tolerance;
        rep.min_upper = std::numeric_limits<double>::infinity();
        rep.max_lower = -std::numeric_limits<double>::infinity();
    }
    void upper(double J, int i, int j, double t) {
        rep.min_upper = std::min(rep.min_upper, J);
        note(-J, J, i, j, t);
    }
    void lower(double J, int i, int j, double t) {
        rep.max_lower = std::max(rep.max_lower, J);
        note(J, J, i, j, t);
    }
    void note(double violation, double J, int i, int j, double t) {
        if (violation > worst_violation) {
            worst_violation = violation;
            rep.worst_i = i;
            rep.worst_j = j;
            rep.worst_t = t;
            rep.worst_residual = J;
        }
    }
    SuperSubReport finish() {
        rep.pass = rep.min_upper >= -tol && rep.max_lower <= tol;
        return rep;
    }
};

/// Phase offsets of the planar pair: u+ = Phi(i - ct + S0) + e0, u- = Phi(i - ct - S1) - e1.
struct PlanarState {
    double S0, S0_dot, e0, e0_dot;
    double S1, S1_dot, e1, e1_dot;
};

PlanarState planar_state(const PlanarSpec& s, double t) {
    const double decay = std::exp(-s.mu * t);
    return {s.C * s.q0 * (1.0 - decay), s.C * s.q0 * s.mu * decay, s.q0 * decay, -s.mu * s.q0 * decay,
            s.C * s.q1 * (1.0 - decay), s.C * s.q1 * s.mu * decay, s.q1 * decay, -s.mu * s.q1 * decay};
}

double planar_residual(const WaveProfile& w, double zeta, double phase_rate, double offset,
                       double offset_rate) {
    const double u = w.phi_at(zeta) + offset;
    const double u_dot = w.dphi_at(zeta) * phase_rate + offset_rate;
    const double lap = w.phi_at(zeta + 1.0) + w.phi_at(zeta - 1.0) - 2.0 * w.phi_at(zeta);
    return u_dot - lap - w.f(u);
}

struct CurvedRow {
    double V;
    double V_dot;
    double alpha;
    double alpha_dot;
};

std::vector<CurvedRow> curved_rows(const VState& v) {
    const PhaseSequence& V = v.V;
    const int n = V.size();
    const PhaseSequence Vd(v.V_dot, V.boundary_j());
    std::vector<CurvedRow> rows(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double dp = d_plus(V, j);
        const double dm = d_minus(V, j);
        rows[static_cast<std::size_t>(j)] = {V[j], Vd[j], alpha(V, j),
                                             dp * d_plus(Vd, j) + dm * d_minus(Vd, j)};
    }
    return rows;
}

}  // namespace

FieldPair build_planar_supersub(const WaveProfile& w, const PlanarSpec& spec, double t, const Window& win) {
    const PlanarState s = planar_state(spec, t);
    FieldPair out{LatticeField(win.width, win.height, win.i_offset, win.boundary_j),
                  LatticeField(win.width, win.height, win.i_offset, win.boundary_j)};
    for (int j = 0; j < win.height; ++j)
        for (int ix = 0; ix < win.width; ++ix) {
            const double xi = win.i_offset + ix - w.c * t;
            out.upper.cell(ix, j) = w.phi_at(xi + s.S0) + s.e0;
            out.lower.cell(ix, j) = w.phi_at(xi - s.S1) - s.e1;
        }
    return out;
}

FieldPair build_curved_supersub(const WaveProfile& w, const CurvedSpec& spec, const VState& v, double t,
                                const Window& win) {
    if (v.V.size() != win.height) throw UsageError("V must have one entry per window row");
    const double p = spec.p(t);
    const double q = spec.q(t);
    FieldPair out{LatticeField(win.width, win.height, win.i_offset, win.boundary_j),
                  LatticeField(win.width, win.height, win.i_offset, win.boundary_j)};
    for (int j = 0; j < win.height; ++j) {
        const double a = alpha(v.V, j);
        for (int ix = 0; ix < win.width; ++ix) {
            const double xi = win.i_offset + ix - v.V[j];
            out.upper.cell(ix, j) = w.phi_at(xi + q) + w.r_at(xi + q) * a + p;
            out.lower.cell(ix, j) = w.phi_at(xi - q) + w.r_at(xi - q) * a - p;
        }
    }
    return out;
}

SuperSubReport verify_planar(const WaveProfile& w, const PlanarSpec& spec, const Window& win,
                             const std::vector<double>& t_grid, double tol) {
    spec.validate(w.f.a());
    Tracker tr(tol);
    // Both fields are independent of j, so one row represents the window.
    for (double t : t_grid) {
        const PlanarState s = planar_state(spec, t);
        for (int ix = 0; ix < win.width; ++ix) {
            const int i = win.i_offset + ix;
            const double xi = i - w.c * t;
            tr.upper(planar_residual(w, xi + s.S0, -w.c + s.S0_dot, s.e0, s.e0_dot), i, 0, t);
            tr.lower(planar_residual(w, xi - s.S1, -w.c - s.S1_dot, -s.e1, -s.e1_dot), i, 0, t);
        }
    }
    SuperSubReport rep = tr.finish();
    rep.mu = spec.mu;
    rep.C = spec.C;
    return rep;
}

SuperSubReport search_planar(const WaveProfile& w, double q0, double q1, const Window& win,
                             const std::vector<double>& t_grid, double tol) {
    constexpr int n_mu = 24;
    constexpr int n_C = 24;
    SuperSubReport best;
    best.pass = false;
    double best_violation = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_mu; ++a) {
        const double mu = 0.5 * std::pow(1e-3 / 0.5, static_cast<double>(a) / (n_mu - 1));
        for (int b = 0; b < n_C; ++b) {
            const double C = std::pow(1e4, static_cast<double>(b) / (n_C - 1));
            const PlanarSpec spec{q0, q1, mu, C};
            SuperSubReport rep = verify_planar(w, spec, win, t_grid, tol);
            if (rep.pass) return rep;
            const double violation = std::max(-rep.min_upper, rep.max_lower);
            if (violation < best_violation) {
                best_violation = violation;
                best = rep;
            }
        }
    }
    return best;
}

SuperSubReport verify_curved(const WaveProfile& w, const CurvedSpec& spec, const PhaseSequence& V0,
                             const Window& win, const std::vector<double>& t_grid, double tol) {
    if (!w.has_r) throw UsageError("curved verification needs the corrector r");
    if (V0.size() != win.height) throw UsageError("V0 must have one entry per window row");
    const FlowParams params = FlowParams::from_wave(w.c, w.d);
    const VTrajectory traj = v_solve(V0, params, t_grid);
    Tracker tr(tol);
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const double t = t_grid[k];
        VState state{traj.at(k), {}};
        state.V_dot = v_rhs(state.V, params);
        const auto rows = curved_rows(state);
        const int n = win.height;
        auto row = [&](int j) -> const CurvedRow& {
            return rows[static_cast<std::size_t>(wrap_index(j, n, win.boundary_j))];
        };
        const double p = spec.p(t);
        const double p_dot = spec.p_dot(t);
        const double q = spec.q(t);
        const double q_dot = spec.q_dot(t);
        for (int sign : {1, -1}) {
            auto u_at = [&](int i, int j) {
                const CurvedRow& r = row(j);
                const double y = i - r.V + sign * q;
                return w.phi_at(y) + w.r_at(y) * r.alpha + sign * p;
            };
            for (int j = 0; j < n; ++j) {
                const CurvedRow& r = row(j);
                for (int ix = 0; ix < win.width; ++ix) {
                    const int i = win.i_offset + ix;
                    const double y = i - r.V + sign * q;
                    const double rate = -r.V_dot + sign * q_dot;
                    const double u = w.phi_at(y) + w.r_at(y) * r.alpha + sign * p;
                    const double u_dot = w.dphi_at(y) * rate + w.dr_at(y) * rate * r.alpha +
                                         w.r_at(y) * r.alpha_dot + sign * p_dot;
                    const double lap = u_at(i + 1, j) + u_at(i - 1, j) + u_at(i, j + 1) + u_at(i, j - 1) - 4.0 * u;
                    const double J = u_dot - lap - w.f(u);
                    if (sign > 0)
                        tr.upper(J, i, j, t);
                    else
                        tr.lower(J, i, j, t);
                }
            }
        }
    }
    return tr.finish();
}

void require_pass(const SuperSubReport& report, const char* what) {
    if (report.pass) return;
    throw VerificationFailed(std::string(what) + ": residual " + std::to_string(report.worst_residual) +
                                 " has the wrong sign at (" + std::to_string(report.worst_i) + "," +
                                 std::to_string(report.worst_j) + ") t = " + std::to_string(report.worst_t),
                             report.worst_i, report.worst_j, report.worst_t, report.worst_residual);
}

}  // namespace acfront
